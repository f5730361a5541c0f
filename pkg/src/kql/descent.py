"""Descent of Gamma-invariant ideals to the invariant ring of Z/m.

``C[x, y]^Gamma = C[u, v, w] / (u v - w^m)`` with ``u = x^m``, ``v = y^m``,
``w = x y``. An invariant ideal ``J`` is stored as the reduced grevlex
Groebner basis of ``J + (u v - w^m)`` in ``Q[u, v, w]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
import sympy
from sympy import QQ

from . import linalg as la
from .ideals import EquivariantIdeal, adhm_to_ideal, format_poly, ideal_to_adhm, parse_poly, poly_terms
from .pimodule import QuiverModule, quiver_to_adhm

U, V, W = sympy.symbols("u v w")
_NAMES = ("u", "v", "w")


@dataclass(frozen=True)
class InvariantRingPresentation:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("group order must be positive")

    def generators_xy(self) -> dict:
        """``u, v, w`` as exponent vectors in ``x, y``."""
        return {"u": (self.m, 0), "v": (0, self.m), "w": (1, 1)}

    @property
    def relation(self) -> dict:
        return {(1, 1, 0): Fraction(1), (0, 0, self.m): Fraction(-1)}

    def relation_holds(self) -> bool:
        x, y = sympy.symbols("x y")
        expr = (x**self.m) * (y**self.m) - (x * y) ** self.m
        return sympy.expand(expr) == 0

    def to_uvw(self, a: int, b: int) -> tuple:
        """Exponents of ``x^a y^b`` (weight 0) as ``u^p v^q w^c`` with ``c = min(a, b)``."""
        if (a - b) % self.m:
            raise ValueError(f"x^{a} y^{b} is not invariant")
        c = min(a, b)
        return ((a - c) // self.m, (b - c) // self.m, c)


def invariant_presentation(m: int) -> InvariantRingPresentation:
    return InvariantRingPresentation(m)


def _grevlex3(mono: tuple) -> tuple:
    # grevlex with u > v > w: degree, then smaller exponent of the last variable wins
    return (sum(mono), -mono[2], -mono[1])


@dataclass(frozen=True, eq=False)
class InvariantIdeal:
    m: int
    groebner: tuple  # reduced basis including the consequences of u v = w^m

    @staticmethod
    def from_generators(gens, m: int) -> "InvariantIdeal":
        pres = invariant_presentation(m)
        polys = [sympy.Poly.from_dict({k: sympy.Rational(v.numerator, v.denominator) for k, v in pres.relation.items()}, U, V, W, domain=QQ)]
        for g in gens:
            if isinstance(g, dict):
                if g:
                    polys.append(sympy.Poly.from_dict({k: sympy.Rational(c.numerator, c.denominator) for k, c in g.items()}, U, V, W, domain=QQ))
            else:
                polys.append(parse_poly(g, (U, V, W)))
        gb = sympy.groebner([p.as_expr() for p in polys], U, V, W, order="grevlex", domain=QQ)
        basis = []
        for p in gb.polys:
            terms = poly_terms(p)
            lead = max(terms, key=_grevlex3)
            c = terms[lead]
            basis.append({k: val / c for k, val in terms.items()})
        basis.sort(key=lambda t: _grevlex3(max(t, key=_grevlex3)))
        return InvariantIdeal(m, tuple(basis))

    @property
    def leading_monomials(self) -> tuple:
        return tuple(max(t, key=_grevlex3) for t in self.groebner)

    def generator_strings(self) -> list:
        return [format_poly(t, _NAMES) for t in self.groebner]

    def key(self) -> tuple:
        return (self.m, tuple(tuple(sorted(t.items())) for t in self.groebner))

    def __eq__(self, other) -> bool:
        return isinstance(other, InvariantIdeal) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self) -> str:
        return f"InvariantIdeal(m={self.m}, {self.generator_strings()})"


def colength(j: InvariantIdeal) -> int:
    """``dim Q[u, v, w] / (J + (u v - w^m))`` from the staircase."""
    leads = j.leading_monomials
    pure = [None, None, None]
    for lm in leads:
        nz = [k for k in range(3) if lm[k]]
        if len(nz) == 1:
            k = nz[0]
            pure[k] = lm[k] if pure[k] is None else min(pure[k], lm[k])
        elif not nz:
            return 0
    if any(p is None for p in pure):
        raise ValueError("invariant ideal does not have finite colength")
    count = 0
    for a in range(pure[0]):
        for b in range(pure[1]):
            for c in range(pure[2]):
                if not any(lm[0] <= a and lm[1] <= b and lm[2] <= c for lm in leads):
                    count += 1
    return count


def descend_ideal(ideal: EquivariantIdeal, degree_bound: Optional[int] = None) -> InvariantIdeal:
    """``I`` intersected with the invariant ring, rewritten in ``u, v, w``."""
    m = ideal.m
    pres = invariant_presentation(m)
    bound = ideal.colength + m if degree_bound is None else degree_bound
    d = ideal_to_adhm(ideal)
    monos = [(a, t - a) for t in range(bound + 1) for a in range(t + 1) if (2 * a - t) % m == 0]
    cache = {(0, 0): d.i[:, 0]}

    def vec(a, b):
        if (a, b) not in cache:
            cache[(a, b)] = d.B1 @ vec(a - 1, b) if a else d.B2 @ vec(a, b - 1)
        return cache[(a, b)]

    if d.dim == 0:
        gens = [{(0, 0, 0): Fraction(1)}]
    else:
        mat = np.column_stack([vec(*mo) for mo in monos])
        gens = []
        for kv in la.kernel_basis(mat):
            terms = {}
            for mo, c in zip(monos, kv):
                if c != 0:
                    key = pres.to_uvw(*mo)
                    terms[key] = terms.get(key, Fraction(0)) + Fraction(c)
            gens.append({k: v for k, v in terms.items() if v != 0})
    out = InvariantIdeal.from_generators(gens, m)
    expected = sum(1 for a, b in ideal.staircase if (a - b) % m == 0)
    try:
        got = colength(out)
    except ValueError:
        got = None
    if got != expected:
        raise ValueError(f"descent not stabilized at degree bound {bound} (colength {got}, expected {expected})")
    return out


def d_invariance_check(m1: QuiverModule, m2: QuiverModule, seed: int = 0) -> bool:
    """Both modules descend to the same invariant ideal."""
    from .stability import concentrate, r_equivalent

    for mod in (m1, m2):
        if not mod.quiver.group.is_cyclic:
            raise ValueError("descent is implemented for cyclic groups")
        if mod.quiver.r != 1:
            raise ValueError("descent needs framing rank 1")
    if not r_equivalent(m1, m2, seed=seed):
        raise ValueError("modules are not R-equivalent")
    ideals = [adhm_to_ideal(quiver_to_adhm(concentrate(mod))) for mod in (m1, m2)]
    return descend_ideal(ideals[0]) == descend_ideal(ideals[1])
