"""Seeded generators for test and benchmark corpora of cyclic-group modules."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator

import numpy as np

from . import linalg as la
from .ideals import EquivariantIdeal, ideal_to_adhm, isotypic_decomposition, orbit_ideal, witness_module
from .mckay import GroupSpec, framed_quiver
from .pimodule import (
    ADHMDatum,
    QuiverModule,
    adhm_to_quiver,
    change_basis,
    direct_sum,
    vertex_simple,
)


def _entry(rng, spread: int = 2) -> Fraction:
    return Fraction(int(rng.integers(-spread, spread + 1)))


def random_datum(rng, m: int, v, r: int = 1, density: float = 0.7) -> ADHMDatum:
    """Random ADHM datum with zero residual.

    ``B1`` and ``i`` are drawn at random (entries zeroed with probability
    ``1 - density``); ``B2`` and ``j`` are a random integer point of the
    linear space cut out by ``[B1, B2] + i j = 0``.
    """
    weights = [k for k in range(m) for _ in range(v[k])]
    n = len(weights)
    b1, i = la.zeros(n, n), la.zeros(n, r)
    for p in range(n):
        for q in range(n):
            if weights[p] == (weights[q] + 1) % m and rng.random() < density:
                b1[p, q] = _entry(rng)
        if weights[p] == 0:
            for k in range(r):
                if rng.random() < density:
                    i[p, k] = _entry(rng)
    unknowns = [("B2", p, q) for p in range(n) for q in range(n) if weights[p] == (weights[q] - 1) % m]
    unknowns += [("j", k, q) for k in range(r) for q in range(n) if weights[q] == 0]
    cols = []
    for kind, p, q in unknowns:
        if kind == "B2":
            e = la.zeros(n, n)
            e[p, q] = Fraction(1)
            effect = b1 @ e - e @ b1
        else:
            e = la.zeros(r, n)
            e[p, q] = Fraction(1)
            effect = i @ e
        cols.append(effect.reshape(-1))
    b2, j = la.zeros(n, n), la.zeros(r, n)
    if cols and n:
        basis = la.kernel_basis(np.column_stack(cols))
        sol = np.zeros(len(unknowns), dtype=object)
        sol[:] = Fraction(0)
        for vec in basis:
            c = _entry(rng)
            if c:
                sol = sol + c * vec
        for (kind, p, q), val in zip(unknowns, sol):
            (b2 if kind == "B2" else j)[p, q] = Fraction(val)
    return ADHMDatum(m, tuple(weights), b1, b2, i, j)


def random_invertible(rng, n: int) -> np.ndarray:
    while True:
        g = la.qmatrix(rng.integers(-2, 3, size=(n, n)).tolist(), (n, n)) if n else la.zeros(0, 0)
        if n == 0 or la.rank(g) == n:
            return g


def randomize_basis(rng, mod: QuiverModule) -> QuiverModule:
    g = {v: random_invertible(rng, mod.dims[v]) for v in mod.quiver.dynkin_vertices}
    return change_basis(mod, g)


def random_module(rng, group: str, v, r: int = 1, density: float = 0.7) -> QuiverModule:
    g = GroupSpec.parse(group)
    d = random_datum(rng, g.m, v, r, density)
    return adhm_to_quiver(d, framed_quiver(g, r))


def stability_corpus(count: int = 500, seed: int = 0, m: int = 2, max_dim: int = 2) -> list:
    """Framed Pi-modules over A(m) with every vertex dimension at most ``max_dim``.

    A mix of random data of varying sparsity, sums with vertex simples and
    orbit witnesses, all in random bases.
    """
    rng = np.random.default_rng(seed)
    group = f"A{m}"
    q = framed_quiver(group, 1)
    out = []
    while len(out) < count:
        kind = rng.random()
        if kind < 0.6:
            v = [int(rng.integers(0, max_dim + 1)) for _ in range(m)]
            mod = random_module(rng, group, v, 1, density=float(rng.choice([0.3, 0.6, 0.9, 1.0])))
        elif kind < 0.85:
            v = [int(rng.integers(0, max_dim)) for _ in range(m)]
            mod = random_module(rng, group, v, 1, density=float(rng.choice([0.5, 1.0])))
            for k in range(m):
                extra = int(rng.integers(0, max_dim - v[k] + 1))
                for _ in range(extra):
                    mod = direct_sum(mod, vertex_simple(q, k))
        else:
            if max_dim < 1:
                continue
            mod = witness_module([random_orbit_point(rng)], group, 1)
            if any(d > max_dim for d in mod.v):
                continue
        out.append(randomize_basis(rng, mod))
    return out


def random_orbit_point(rng, spread: int = 4) -> tuple:
    while True:
        p = (int(rng.integers(-spread, spread + 1)), int(rng.integers(-spread, spread + 1)))
        if p != (0, 0):
            return p


def distinct_orbit_points(rng, n: int, m: int, spread: int = 4) -> list:
    pts = []
    while len(pts) < n:
        p = random_orbit_point(rng, spread)
        if any(_same_orbit(p, other, m) for other in pts):
            continue
        pts.append(p)
    return pts


def _same_orbit(p, q, m: int) -> bool:
    ideal = orbit_ideal(p, m)
    return all(sum(c * Fraction(q[0]) ** e[0] * Fraction(q[1]) ** e[1] for e, c in t.items()) == 0 for t in ideal.groebner)


def staircases(size: int) -> Iterator[tuple]:
    """All partitions of ``size`` as tuples of column heights (non-increasing)."""

    def rec(remaining, cap):
        if remaining == 0:
            yield ()
            return
        for h in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - h, h):
                yield (h,) + rest

    yield from rec(size, size)


def monomial_ideal(heights: tuple, m: int) -> EquivariantIdeal:
    """Monomial ideal whose staircase has ``heights[a]`` monomials ``x^a y^b``."""
    stair = {(a, b) for a, h in enumerate(heights) for b in range(h)}
    gens = []
    for a in range(len(heights) + 1):
        h = heights[a] if a < len(heights) else 0
        corner = (a, h)
        left_ok = a == 0 or (a - 1, h) in stair
        if corner not in stair and left_ok:
            gens.append({corner: Fraction(1)})
    if not stair:
        gens = [{(0, 0): Fraction(1)}]
    return EquivariantIdeal.from_generators(gens, m)


def monomial_ideals(m: int, max_colength: int) -> list:
    return [monomial_ideal(h, m) for n in range(max_colength + 1) for h in staircases(n)]


def descent_pairs(count: int = 100, seed: int = 0, m: int = 2, max_n: int = 3) -> list:
    """Pairs ``(M, M + vertex simples)`` of theta_0-semistable rank-one modules."""
    if m < 2:
        raise ValueError("vertex simples away from 0 need m >= 2")
    rng = np.random.default_rng(seed)
    group = f"A{m}"
    q = framed_quiver(group, 1)
    pairs = []
    while len(pairs) < count:
        n = int(rng.integers(1, max_n + 1))
        if rng.random() < 0.3:
            # punctual data supported at the origin instead of free orbits
            shapes = [h for h in staircases(m * n) if isotypic_decomposition(monomial_ideal(h, m)) == (n,) * m]
            ideal = monomial_ideal(shapes[int(rng.integers(0, len(shapes)))], m)
            base = adhm_to_quiver(ideal_to_adhm(ideal), q)
        else:
            base = witness_module(distinct_orbit_points(rng, n, m), group, 1)
        extra = base
        added = 0
        for k in range(1, m):
            for _ in range(int(rng.integers(0, 3))):
                extra = direct_sum(extra, vertex_simple(q, k))
                added += 1
        if not added:
            extra = direct_sum(extra, vertex_simple(q, int(rng.integers(1, m))))
        pairs.append((randomize_basis(rng, base), randomize_basis(rng, extra)))
    return pairs
