"""Rank-one side of the correspondence: Gamma-invariant ideals of C[x, y].

Gamma = Z/m acts by ``x -> z x``, ``y -> z^-1 y``, so ``x^a y^b`` has weight
``a - b mod m``. Ideals carry rational coefficients and are stored by their
reduced Groebner basis for grevlex with ``x > y``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
import sympy
from sympy import QQ

from . import linalg as la
from .mckay import GroupSpec, framed_quiver
from .pimodule import ADHMDatum, QuiverModule, adhm_residual, adhm_to_quiver

X, Y = sympy.symbols("x y")


def _frac(c) -> Fraction:
    r = c if isinstance(c, sympy.Basic) else QQ.to_sympy(c)
    if not r.is_Rational:
        raise ValueError(f"coefficient {c} is not rational")
    return Fraction(int(r.p), int(r.q))


def _grevlex(mono: tuple) -> tuple:
    # two variables with x > y: total degree first, then the x exponent
    return (mono[0] + mono[1], mono[0])


def _divides(a: tuple, b: tuple) -> bool:
    return a[0] <= b[0] and a[1] <= b[1]


def format_poly(terms: dict, names=("x", "y")) -> str:
    """Canonical text form, terms in descending grevlex order."""
    if not terms:
        return "0"
    pieces = []
    for mono in sorted(terms, key=lambda t: (sum(t), t), reverse=True):
        c = terms[mono]
        factors = []
        for name, e in zip(names, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        body = "*".join(factors)
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        pieces.append((sign, text))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


_ALLOWED = re.compile(r"^[0-9xyuvw+\-*/^() .]*$")


def parse_poly(text: str, gens=(X, Y)) -> sympy.Poly:
    """Parse ``"x^2 - 3/2*x*y + 1"`` into a rational sympy Poly."""
    if not isinstance(text, str) or not _ALLOWED.match(text):
        raise ValueError(f"cannot parse polynomial {text!r}")
    if "." in text:
        raise ValueError("decimal coefficients are not accepted; use p/q")
    local = {str(g): g for g in gens}
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals=local, rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ValueError(f"cannot parse polynomial {text!r}") from exc
    extra = expr.free_symbols - set(gens)
    if extra:
        raise ValueError(f"unknown variables {sorted(map(str, extra))} in {text!r}")
    return sympy.Poly(expr, *gens, domain=QQ)


def poly_terms(p: sympy.Poly) -> dict:
    return {tuple(int(e) for e in mono): _frac(c) for mono, c in p.terms() if c != 0}


@dataclass(frozen=True, eq=False)
class EquivariantIdeal:
    m: int
    groebner: tuple  # reduced basis, each a dict monomial -> Fraction, sorted by leading monomial
    staircase: tuple  # standard monomials in ascending grevlex order

    @staticmethod
    def from_generators(gens: Iterable, m: int) -> "EquivariantIdeal":
        if m < 1:
            raise ValueError("group order must be positive")
        polys = []
        for g in gens:
            if isinstance(g, str):
                polys.append(parse_poly(g))
            elif isinstance(g, dict):
                polys.append(sympy.Poly.from_dict({k: sympy.Rational(v.numerator, v.denominator) for k, v in g.items()} or {(0, 0): 0}, X, Y, domain=QQ))
            else:
                polys.append(sympy.Poly(g, X, Y, domain=QQ))
        polys = [p for p in polys if not p.is_zero]
        if not polys:
            raise ValueError("the zero ideal has infinite colength")
        gb = sympy.groebner([p.as_expr() for p in polys], X, Y, order="grevlex", domain=QQ)
        basis = []
        for p in gb.polys:
            terms = poly_terms(p)
            lead = max(terms, key=_grevlex)
            c = terms[lead]
            basis.append({k: v / c for k, v in terms.items()})
        basis.sort(key=lambda t: _grevlex(max(t, key=_grevlex)))
        for t in basis:
            if len({(a - b) % m for a, b in t}) > 1:
                raise ValueError(f"ideal is not Gamma-invariant: {format_poly(t)} mixes weights")
        leads = [max(t, key=_grevlex) for t in basis]
        px = [a for a, b in leads if b == 0]
        py = [b for a, b in leads if a == 0]
        if not px or not py:
            raise ValueError("ideal has infinite colength")
        stair = [
            (a, b)
            for a in range(min(px))
            for b in range(min(py))
            if not any(_divides(lm, (a, b)) for lm in leads)
        ]
        stair.sort(key=_grevlex)
        return EquivariantIdeal(m, tuple(basis), tuple(stair))

    @property
    def leading_monomials(self) -> tuple:
        return tuple(max(t, key=_grevlex) for t in self.groebner)

    @property
    def colength(self) -> int:
        return len(self.staircase)

    def generator_strings(self) -> list:
        return [format_poly(t) for t in self.groebner]

    def key(self) -> tuple:
        return (self.m, tuple(tuple(sorted(t.items())) for t in self.groebner))

    def __eq__(self, other) -> bool:
        return isinstance(other, EquivariantIdeal) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def contains(self, terms: dict) -> bool:
        return not normal_form(self, terms)

    def __repr__(self) -> str:
        return f"EquivariantIdeal(m={self.m}, {self.generator_strings()})"


def normal_form(ideal: EquivariantIdeal, terms: dict) -> dict:
    """Remainder of ``terms`` modulo the Groebner basis (exact, in standard monomials)."""
    rem = {k: Fraction(v) for k, v in terms.items() if v != 0}
    out = {}
    leads = [(max(t, key=_grevlex), t) for t in ideal.groebner]
    while rem:
        mono = max(rem, key=_grevlex)
        c = rem.pop(mono)
        for lm, t in leads:
            if _divides(lm, mono):
                shift = (mono[0] - lm[0], mono[1] - lm[1])
                for k, v in t.items():
                    if k == lm:
                        continue
                    tgt = (k[0] + shift[0], k[1] + shift[1])
                    val = rem.get(tgt, Fraction(0)) - c * v
                    if val:
                        rem[tgt] = val
                    else:
                        rem.pop(tgt, None)
                break
        else:
            out[mono] = c
    return out


def unit_ideal(m: int) -> EquivariantIdeal:
    return EquivariantIdeal.from_generators(["1"], m)


def ideal_to_adhm(ideal: EquivariantIdeal) -> ADHMDatum:
    """Multiplication by x and y on C[x, y]/I in the staircase basis."""
    stair = ideal.staircase
    index = {s: k for k, s in enumerate(stair)}
    n = len(stair)
    b1, b2 = la.zeros(n, n), la.zeros(n, n)
    for col, (a, b) in enumerate(stair):
        for mat, shift in ((b1, (1, 0)), (b2, (0, 1))):
            nf = normal_form(ideal, {(a + shift[0], b + shift[1]): Fraction(1)})
            for mono, c in nf.items():
                mat[index[mono], col] = c
    i = la.zeros(n, 1)
    if n:
        i[index[(0, 0)], 0] = Fraction(1)
    j = la.zeros(1, n)
    weights = tuple((a - b) % ideal.m for a, b in stair)
    return ADHMDatum(ideal.m, weights, b1, b2, i, j)


def ideal_of_functional(vec: Callable, m: int, degree_bound: int) -> EquivariantIdeal:
    """Buchberger-Moeller: the ideal ``{f : f applied to the data = 0}``.

    ``vec(a, b)`` returns the exact image of ``x^a y^b``; the map must be a
    module homomorphism from C[x, y] (commuting operators applied to a vector).
    """
    leads: list = []
    relations: list = []
    std: list = []
    cols: list = []
    closed = False
    for deg in range(degree_bound + 1):
        alive = [(a, deg - a) for a in range(deg + 1) if not any(_divides(lm, (a, deg - a)) for lm in leads)]
        if not alive:
            closed = True
            break
        for mono in alive:
            v = vec(*mono)
            if cols:
                coeffs = la.solve(np.column_stack(cols), v)
            else:
                coeffs = np.zeros(0, dtype=object) if la.is_zero(v) else None
            if coeffs is None:
                std.append(mono)
                cols.append(v)
                continue
            rel = {mono: Fraction(1)}
            for s, c in zip(std, coeffs):
                if c != 0:
                    rel[s] = -Fraction(c)
            relations.append(rel)
            leads.append(mono)
    if not closed:
        raise ValueError(f"staircase did not close within degree {degree_bound}")
    return EquivariantIdeal.from_generators(relations, m)


def adhm_to_ideal(d: ADHMDatum, degree_bound: Optional[int] = None) -> EquivariantIdeal:
    """Kernel of ``f -> f(B1, B2) i``; inverse of :func:`ideal_to_adhm`."""
    if not isinstance(d.field, la.Exact):
        raise ValueError("ideals are computed for exact rational data only")
    if d.r != 1:
        raise ValueError("the ideal correspondence needs framing rank 1")
    if not la.is_zero(d.j):
        raise ValueError("j must vanish")
    if not la.is_zero(adhm_residual(d)):
        raise ValueError("B1 and B2 must commute")
    bound = d.dim + 1 if degree_bound is None else degree_bound
    cache = {(0, 0): d.i[:, 0]}

    def vec(a, b):
        if (a, b) not in cache:
            cache[(a, b)] = d.B1 @ vec(a - 1, b) if a else d.B2 @ vec(a, b - 1)
        return cache[(a, b)]

    ideal = ideal_of_functional(vec, d.m, bound)
    if ideal.colength != d.dim:
        raise ValueError("datum is not stable: i does not generate V")
    return ideal


def isotypic_decomposition(ideal: EquivariantIdeal) -> tuple:
    counts = [0] * ideal.m
    for a, b in ideal.staircase:
        counts[(a - b) % ideal.m] += 1
    return tuple(counts)


def _point(p) -> tuple:
    if len(p) != 2:
        raise ValueError(f"point {p!r} does not have two coordinates")
    return (Fraction(p[0]), Fraction(p[1]))


def orbit_ideal(point: Sequence, m: int) -> EquivariantIdeal:
    """Vanishing ideal of the Gamma-orbit of a nonzero rational point."""
    a, b = _point(point)
    if a == 0 and b == 0:
        raise ValueError("the origin is a fixed point, not a free orbit")
    gens = [
        {(m, 0): Fraction(1), (0, 0): -(a**m)},
        {(0, m): Fraction(1), (0, 0): -(b**m)},
        {(1, 1): Fraction(1), (0, 0): -a * b},
        {(0, 1): a ** (m - 1), (m - 1, 0): -b},
        {(1, 0): b ** (m - 1), (0, m - 1): -a},
    ]
    ideal = EquivariantIdeal.from_generators(gens, m)
    if ideal.colength != m:
        raise AssertionError("orbit ideal has the wrong colength")
    return ideal


def _vanishes_at(ideal: EquivariantIdeal, p: tuple) -> bool:
    return all(sum(c * p[0] ** e[0] * p[1] ** e[1] for e, c in t.items()) == 0 for t in ideal.groebner)


def points_ideal(points: Sequence, m: int) -> EquivariantIdeal:
    """Ideal of the union of the orbits of ``points`` (pairwise distinct orbits)."""
    pts = [_point(p) for p in points]
    orbits = [orbit_ideal(p, m) for p in pts]
    for k, ideal in enumerate(orbits):
        for p in pts[k + 1 :]:
            if _vanishes_at(ideal, p):
                raise ValueError(f"orbits of {pts[k]} and {p} coincide")
    if not orbits:
        return unit_ideal(m)
    data = [ideal_to_adhm(o) for o in orbits]
    b1 = la.block_diag([d.B1 for d in data])
    b2 = la.block_diag([d.B2 for d in data])
    start = np.concatenate([d.i[:, 0] for d in data])
    cache = {(0, 0): start}

    def vec(a, b):
        if (a, b) not in cache:
            cache[(a, b)] = b1 @ vec(a - 1, b) if a else b2 @ vec(a, b - 1)
        return cache[(a, b)]

    return ideal_of_functional(vec, m, len(start) + 1)


def witness_datum(points: Sequence, m: int, r: int = 1) -> ADHMDatum:
    """ADHM datum of the ideal of ``len(points)`` free orbits, framed to rank ``r``.

    Extra framing directions carry zero maps, matching a direct sum with
    trivial rank-one summands.
    """
    if r < 1:
        raise ValueError("framing rank must be at least 1")
    d = ideal_to_adhm(points_ideal(points, m))
    i = la.zeros(d.dim, r)
    i[:, 0] = d.i[:, 0]
    return ADHMDatum(m, d.weights, d.B1, d.B2, i, la.zeros(r, d.dim))


def witness_module(points: Sequence, group, r: int = 1) -> QuiverModule:
    g = GroupSpec.parse(group) if isinstance(group, str) else group
    if not g.is_cyclic:
        raise ValueError("witness modules are built for cyclic groups")
    return adhm_to_quiver(witness_datum(points, g.m, r), framed_quiver(g, r))
