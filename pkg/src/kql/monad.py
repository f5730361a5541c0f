"""Monads on the projective plane attached to ADHM data, and related checks.

For ``(B1, B2, i, j)`` on ``V`` with framing ``W`` the monad is

    V(-1) --A--> (V + V)(0) + W(0) --B--> V(1)

    A = [z B1 - x;  z B2 - y;  z j]
    B = [y - z B2,  z B1 - x,  z i]

so ``B A = z^2 ([B1, B2] + i j)``. Each map is stored as three coefficient
matrices, one per homogeneous coordinate.

Weight convention: ``B1`` raises the weight by one, so with the identity
twisted appropriately ``x`` has weight -1 on the coefficients; the check
routines only ever need monomial weights ``a - b`` for ``x^a y^b``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import sympy

from . import linalg as la
from .pimodule import ADHMDatum, QuiverModule, adhm_residual, is_pi_module

COORDS = ("x", "y", "z")


@dataclass(frozen=True, eq=False)
class MonadData:
    dims: tuple  # (dim V, 2 dim V + r, dim V)
    A: dict  # coordinate -> (2V + r) x V coefficient matrix
    B: dict  # coordinate -> V x (2V + r) coefficient matrix
    field: object = la.EXACT

    def evaluate(self, point: Sequence) -> tuple:
        """Numerical ``(A(p), B(p))`` at a point given by homogeneous coordinates."""
        p = [complex(c) for c in point]
        a = sum(c * self.A[k].astype(complex) for c, k in zip(p, COORDS))
        b = sum(c * self.B[k].astype(complex) for c, k in zip(p, COORDS))
        return np.asarray(a, dtype=complex).reshape(self.dims[1], self.dims[0]), np.asarray(b, dtype=complex).reshape(self.dims[2], self.dims[1])


def build_monad(d: ADHMDatum) -> MonadData:
    n, r, f = d.dim, d.r, d.field
    eye, zero = la.identity(n, f), la.zeros(n, n, f)
    zr_col, zr_row = la.zeros(r, n, f), la.zeros(n, r, f)
    A = {
        "x": np.concatenate([-eye, zero, zr_col]),
        "y": np.concatenate([zero, -eye, zr_col]),
        "z": np.concatenate([d.B1, d.B2, d.j]),
    }
    B = {
        "x": np.concatenate([zero, -eye, zr_row], axis=1),
        "y": np.concatenate([eye, zero, zr_row], axis=1),
        "z": np.concatenate([-d.B2, d.B1, d.i], axis=1),
    }
    return MonadData((n, 2 * n + r, n), A, B, f)


def composite_coefficients(md: MonadData) -> dict:
    """``B A`` as a quadratic form: monomial name (``"xy"`` etc.) -> matrix."""
    out = {}
    for s, t in itertools.combinations_with_replacement(COORDS, 2):
        term = md.B[s] @ md.A[t]
        if s != t:
            term = term + md.B[t] @ md.A[s]
        out[s + t] = term
    return out


def composite_vanishes(md: MonadData) -> bool:
    return all(la.is_zero(m, md.field) for m in composite_coefficients(md).values())


def _rank(m: np.ndarray, tol: float) -> int:
    return la.rank(m, la.ComplexApprox(tol))


def monad_fiber_check(md: MonadData, point: Sequence, tol: float = la.DEFAULT_TOL) -> tuple:
    """``(A(p) injective, B(p) surjective)``."""
    if all(c == 0 for c in point):
        raise ValueError("(0:0:0) is not a point of the projective plane")
    a, b = md.evaluate(point)
    inj = md.dims[0] == 0 or _rank(a, tol) == md.dims[0]
    surj = md.dims[2] == 0 or _rank(b, tol) == md.dims[2]
    return inj, surj


def sample_points(count: int, seed: int, at_infinity: bool = False) -> list:
    """Seeded unit-scale points; with ``at_infinity`` the last coordinate is 0."""
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(count):
        v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        if at_infinity:
            v[2] = 0
        v = v / np.linalg.norm(v)
        pts.append(tuple(complex(c) for c in v))
    return pts


def koszul_middle_check(d: ADHMDatum, points: Iterable, tol: float = la.DEFAULT_TOL) -> bool:
    """Middle cohomology of the monad fibre vanishes at every point."""
    if d.r != 0:
        raise ValueError("the Koszul check needs W = 0")
    if d.weight_dims()[0] != 0:
        raise ValueError("the Koszul check needs V_0 = 0")
    md = build_monad(d)
    for p in points:
        a, b = md.evaluate(p)
        ra = _rank(a, tol) if a.size else 0
        rb = _rank(b, tol) if b.size else 0
        if ra + rb != md.dims[1]:
            return False
    return True


def invariant_sections_check(d: ADHMDatum, degree_bound: int = 6) -> bool:
    """No Gamma-invariant part in the cokernel of ``b`` on the chart ``z = 1``.

    For a vertex simple ``rho_k`` (``k != 0``) the map ``b = (y, -x)`` sends
    pairs of polynomials to ``C[x, y] (x) rho_k``; a target monomial
    ``x^a y^b`` has weight ``a - b + k``. Degree by degree we check that every
    invariant target monomial lies in the image.
    """
    if d.dim != 1 or d.r != 0:
        raise ValueError("expected a vertex-simple datum (dim V = 1, W = 0)")
    k = d.weights[0]
    if k == 0:
        raise ValueError("the vertex simple must sit at a nontrivial representation")
    if not (la.is_zero(d.B1) and la.is_zero(d.B2)):
        raise ValueError("a vertex simple has vanishing B1, B2")
    for deg in range(degree_bound + 1):
        target = [(a, deg - a) for a in range(deg + 1)]
        index = {t: n for n, t in enumerate(target)}
        cols = []
        if deg:
            for a in range(deg):
                src = (a, deg - 1 - a)
                col = la.zeros(len(target), 1)[:, 0]
                col[index[(src[0], src[1] + 1)]] += 1  # y * f
                cols.append(col)
                col = la.zeros(len(target), 1)[:, 0]
                col[index[(src[0] + 1, src[1])]] -= 1  # -x * g
                cols.append(col)
        image = np.column_stack(cols) if cols else la.zeros(len(target), 0)
        for t in target:
            if (t[0] - t[1] + k) % d.m:
                continue
            e = la.zeros(len(target), 1)[:, 0]
            e[index[t]] = 1
            if image.shape[1] == 0 or la.solve(image, e) is None:
                return False
    return True


# --------------------------------------------------------------------------
# support cycles


@dataclass(frozen=True)
class SupportCycle:
    points: tuple  # ((x, y, multiplicity), ...); coordinates Fraction or complex

    @property
    def total(self) -> int:
        return sum(p[2] for p in self.points)


def _sym(mat: np.ndarray) -> sympy.Matrix:
    return sympy.Matrix(mat.shape[0], mat.shape[1], [sympy.Rational(c.numerator, c.denominator) for c in mat.flat])


def _poly_at(coeffs: Sequence, mat: np.ndarray) -> np.ndarray:
    n = mat.shape[0]
    out = la.zeros(n, n)
    for c in coeffs:
        out = out @ mat + Fraction(int(c.p), int(c.q)) * la.identity(n)
    return out


def _distinct_roots(mat: np.ndarray) -> int:
    cp = _sym(mat).charpoly(sympy.Symbol("t"))
    return sum(sympy.degree(f) for f, _ in sympy.sqf_list(cp.as_expr())[1])


def _exact_support(d: ADHMDatum) -> SupportCycle:
    n = d.dim
    best_t, best = 0, -1
    cap = n * (n - 1) // 2 + 1
    for k in range(cap + 1):
        t = (k + 1) // 2 * (1 if k % 2 else -1)
        count = _distinct_roots(d.B1 + t * d.B2)
        if count > best:
            best_t, best = t, count
        if best == n:
            break
    c = d.B1 + best_t * d.B2
    lam = sympy.Symbol("t")
    cp = sympy.Poly(_sym(c).charpoly(lam).as_expr(), lam, domain=sympy.QQ)
    points = []
    for factor, e in sympy.factor_list(cp)[1]:
        f = sympy.Poly(factor, lam, domain=sympy.QQ)
        deg = f.degree()
        fe = f**e
        kmat = la.kernel_matrix(_poly_at([sympy.Rational(x) for x in fe.all_coeffs()], c))
        dim = kmat.shape[1]
        restricted = [la.solve(kmat, m @ kmat) for m in (d.B1, d.B2, c)]
        mult = dim // deg
        # power sums of the roots of f, then the coordinate as a polynomial in lambda
        cpow = [la.identity(dim)]
        for _ in range(2 * deg):
            cpow.append(cpow[-1] @ restricted[2])
        psum = [sum(np.diag(p), Fraction(0)) / mult for p in cpow]
        hank = la.qmatrix([[psum[a + b] for b in range(deg)] for a in range(deg)])
        coords = []
        for bm in restricted[:2]:
            rhs = [sum(np.diag(bm @ cpow[a]), Fraction(0)) / mult for a in range(deg)]
            g = la.solve(hank, la.qmatrix(rhs)[:, 0])
            coords.append([Fraction(x) for x in g])
        if deg == 1:
            points.append((coords[0][0], coords[1][0], mult))
            continue
        roots = sorted((complex(r) for r in sympy.Poly(f).nroots(n=30)), key=lambda z: (round(z.real, 9), round(z.imag, 9)))
        for root in roots:
            xy = [sum(float(cf) * root**p for p, cf in enumerate(g)) for g in coords]
            points.append((_clean(xy[0]), _clean(xy[1]), mult))
    return SupportCycle(tuple(sorted(points, key=_point_key)))


def _clean(z: complex, digits: int = 12) -> complex:
    return complex(round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0)


def _point_key(p):
    def part(c):
        c = complex(c)
        return (round(c.real, 9), round(c.imag, 9))

    return part(p[0]) + part(p[1])


def _approx_support(d: ADHMDatum, tol: float) -> SupportCycle:
    import scipy.linalg

    rng = np.random.default_rng(0)
    t = complex(rng.standard_normal(), rng.standard_normal())
    b1 = d.B1.astype(complex)
    b2 = d.B2.astype(complex)
    _, q = scipy.linalg.schur(b1 + t * b2, output="complex")
    t1 = np.diag(q.conj().T @ b1 @ q)
    t2 = np.diag(q.conj().T @ b2 @ q)
    radius = 10 * tol * max(1.0, float(np.abs(b1).max(initial=0)), float(np.abs(b2).max(initial=0)))
    clusters: list = []
    for x, y in zip(t1, t2):
        for cl in clusters:
            if abs(cl[0] - x) <= radius and abs(cl[1] - y) <= radius:
                cl[2].append((x, y))
                break
        else:
            clusters.append([x, y, [(x, y)]])
    points = []
    for _, _, members in clusters:
        xs = np.mean([m[0] for m in members])
        ys = np.mean([m[1] for m in members])
        points.append((_clean(xs), _clean(ys), len(members)))
    return SupportCycle(tuple(sorted(points, key=_point_key)))


def support_cycle(d: ADHMDatum, tol: float = la.DEFAULT_TOL) -> SupportCycle:
    """Joint spectrum of ``(B1, B2)`` with multiplicities."""
    if d.r != 1:
        raise ValueError("support cycles are computed for framing rank 1")
    if not la.is_zero(d.j, d.field):
        raise ValueError("j must vanish")
    if not la.is_zero(adhm_residual(d), d.field):
        raise ValueError("B1 and B2 do not commute")
    if d.dim == 0:
        return SupportCycle(())
    if isinstance(d.field, la.Exact):
        return _exact_support(d)
    return _approx_support(d, tol)


# --------------------------------------------------------------------------
# tangent dimension


def moment_map_jacobian(m: QuiverModule) -> np.ndarray:
    """Derivative of the preprojective residual at ``m`` in all arrow entries."""
    q = m.quiver
    var = {}
    total = 0
    for a in q.arrows:
        var[a.name] = total
        total += m.dims[a.head] * m.dims[a.tail]
    eq = {}
    rows = 0
    for v in q.vertices:
        eq[v] = rows
        rows += m.dims[v] ** 2
    jac = la.zeros(rows, total, m.field)
    for a in q.arrows:
        ba, bbar = m.maps[a.name], m.maps[a.reverse]
        h, t = a.head, a.tail
        nh, nt = m.dims[h], m.dims[t]
        # d(B_a B_abar) = dB_a B_abar + B_a dB_abar, an nh x nh matrix
        for p in range(nh):
            for s in range(nh):
                row = eq[h] + p * nh + s
                for c in range(nt):
                    # dB_a[p, c] * B_abar[c, s]
                    if bbar[c, s] != 0:
                        jac[row, var[a.name] + p * nt + c] += a.eps * bbar[c, s]
                    # B_a[p, c] * dB_abar[c, s]
                    if ba[p, c] != 0:
                        jac[row, var[a.reverse] + c * nh + s] += a.eps * ba[p, c]
    return jac


def tangent_dimension(m: QuiverModule) -> int:
    """``dim ker dmu - sum of v_i^2`` over the Dynkin vertices."""
    from .stability import c_plus_representative, is_stable

    if m.dim_inf != 1:
        raise ValueError("tangent dimension needs a framed module")
    if not is_pi_module(m):
        raise ValueError("preprojective residual does not vanish")
    if not is_stable(m, c_plus_representative(m.v)):
        raise ValueError("module is not C+-stable; the group action is not free")
    jac = moment_map_jacobian(m)
    kernel = jac.shape[1] - (la.rank(jac, m.field) if jac.size else 0)
    return kernel - sum(m.dims[v] ** 2 for v in m.quiver.dynkin_vertices)
