"""Independent reference implementations used by the tests.

Nothing here calls the package's linear algebra: the oracles work with
sympy matrices, explicit enumeration and Groebner bases.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import sympy

from kql.mckay import INF


def _sym_matrix(mat) -> sympy.Matrix:
    rows, cols = mat.shape
    return sympy.Matrix(rows, cols, [sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) for c in mat.flat])


def _charts(dim: int, sub: int, name: str):
    """Parametrised bases of the sub-dimensional subspaces of C^dim (dim <= 2)."""
    if sub == 0:
        return [([], [])]
    if sub == dim:
        return [([sympy.Matrix([1 if r == c else 0 for r in range(dim)]) for c in range(dim)], [])]
    if dim == 2 and sub == 1:
        s = sympy.Symbol(name)
        return [([sympy.Matrix([1, s])], [s]), ([sympy.Matrix([0, 1])], [])]
    raise ValueError("oracle handles vertex dimensions up to 2")


def submodule_exists(mod, u: dict) -> bool:
    """Is there a submodule with dimension vector ``u``? Decided exactly over C."""
    q = mod.quiver
    verts = q.vertices
    maps = {a.name: _sym_matrix(mod.maps[a.name]) for a in q.arrows}
    options = [_charts(mod.dims[v], u[v], f"s_{v}") for v in verts]
    for choice in itertools.product(*options):
        basis = {v: c[0] for v, c in zip(verts, choice)}
        syms = [s for c in choice for s in c[1]]
        polys = []
        for a in q.arrows:
            t, h = a.tail, a.head
            if not basis[t] or u[h] == mod.dims[h]:
                continue
            for w in basis[t]:
                img = maps[a.name] * w
                if not basis[h]:
                    polys.extend(img)
                else:
                    wh = basis[h][0]
                    polys.append(img[0] * wh[1] - img[1] * wh[0])
        polys = [sympy.expand(p) for p in polys]
        polys = [p for p in polys if p != 0]
        if not polys:
            return True
        if not syms:
            continue
        if any(p.is_number for p in polys):
            continue
        gb = sympy.groebner(polys, *syms, order="grevlex")
        if list(gb.exprs) != [1]:
            return True
    return False


def _theta(t, dims_u: dict, q) -> Fraction:
    return t.theta_inf * dims_u[INF] + sum(th * dims_u[v] for th, v in zip(t.theta, q.dynkin_vertices))


def brute_force_stability(mod, t) -> tuple:
    """``(stable, semistable)`` straight from the definition."""
    q = mod.quiver
    verts = q.vertices
    stable = semistable = True
    for dims in itertools.product(*[range(mod.dims[v] + 1) for v in verts]):
        u = dict(zip(verts, dims))
        value = _theta(t, u, q)
        trivial = all(x == 0 for x in dims) or all(u[v] == mod.dims[v] for v in verts)
        if trivial or value > 0:
            continue
        if submodule_exists(mod, u):
            stable = False
            if value < 0:
                semistable = False
                break
    return stable, semistable


def monomial_in(mono, generators) -> bool:
    return any(all(a >= g for a, g in zip(mono, gen)) for gen in generators)


def descended_colength_monomial(lead_gens, m: int, bound: int) -> int:
    """Invariant monomials ``u^a w^c`` and ``v^b w^c`` outside a monomial ideal."""
    count = 0
    seen = set()
    for c in range(bound + 1):
        for a in range(bound + 1):
            for mono in ((m * a + c, c), (c, m * a + c)):
                if mono in seen or sum(mono) > bound:
                    continue
                seen.add(mono)
                if not monomial_in(mono, lead_gens):
                    count += 1
    return count


def multiplication_matrices(staircase, generators):
    """Monomial-ideal quotient: x and y act by shifting, dropping ideal members."""
    index = {s: k for k, s in enumerate(staircase)}
    n = len(staircase)
    b1 = [[0] * n for _ in range(n)]
    b2 = [[0] * n for _ in range(n)]
    for col, (a, b) in enumerate(staircase):
        for mat, tgt in ((b1, (a + 1, b)), (b2, (a, b + 1))):
            if tgt in index:
                mat[index[tgt]][col] = 1
    return b1, b2


def expand_composite(A: dict, B: dict) -> dict:
    """Symbolic ``B(x,y,z) A(x,y,z)``, coefficient matrices per quadratic monomial."""
    x, y, z = sympy.symbols("x y z")
    syms = {"x": x, "y": y, "z": z}
    a = sum((syms[k] * _sym_matrix(v) for k, v in A.items()), sympy.zeros(*A["x"].shape))
    b = sum((syms[k] * _sym_matrix(v) for k, v in B.items()), sympy.zeros(*B["x"].shape))
    prod = (b * a).applyfunc(sympy.expand)
    out = {}
    for s, t in itertools.combinations_with_replacement("xyz", 2):
        mono = syms[s] * syms[t]
        out[s + t] = prod.applyfunc(lambda e: sympy.Poly(e, x, y, z).coeff_monomial(mono) if e != 0 else 0)
    return out
