"""Finite subgroups of SL(2, C), their character tables and McKay quivers.

Families and canonical vertex orders
------------------------------------
``A(m)``  cyclic of order m, generated by diag(z, 1/z), z = exp(2 pi i/m).
          Vertex k is the character g -> z^k, so vertex order is by weight.
``D(m)``  binary dihedral of order 4(m-2), m >= 4; McKay graph affine D_m.
``E6``, ``E7``, ``E8``  binary tetrahedral, octahedral, icosahedral.

For D and E the irreducible characters are computed from explicit SU(2)
generators (class sums, then a joint eigenvector decomposition). Vertices
are sorted by dimension; ties are broken by the rounded character values
along the canonical class order (classes sorted by element order, then
trace, then first appearance in a breadth-first enumeration of the group).
"""
from __future__ import annotations

import cmath
import functools
import math
import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

INTEGRALITY_TOL = 1e-6


class CharacterError(ValueError):
    """Character data failed an integrality or orthogonality check."""


@dataclass(frozen=True)
class GroupSpec:
    family: str
    m: Optional[int] = None

    def __post_init__(self):
        if self.family not in ("A", "D", "E"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.m is None:
            raise ValueError("order parameter required")
        if self.family == "A" and self.m < 1:
            raise ValueError("A(m) needs m >= 1")
        if self.family == "D" and self.m < 4:
            raise ValueError("D(m) needs m >= 4")
        if self.family == "E" and self.m not in (6, 7, 8):
            raise ValueError("E family is E6, E7 or E8")

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        mt = re.fullmatch(r"\s*([ADEade])\s*\(?\s*(-?\d+)\s*\)?\s*", text)
        if not mt:
            raise ValueError(f"cannot parse group {text!r}")
        return cls(mt.group(1).upper(), int(mt.group(2)))

    @property
    def order(self) -> int:
        if self.family == "A":
            return self.m
        if self.family == "D":
            return 4 * (self.m - 2)
        return {6: 24, 7: 48, 8: 120}[self.m]

    @property
    def is_cyclic(self) -> bool:
        return self.family == "A"

    def __str__(self) -> str:
        return f"{self.family}{self.m}"


@dataclass(frozen=True)
class CharacterTable:
    group: GroupSpec
    dims: tuple
    class_sizes: tuple
    # characters[i][c]: value of irrep i on class c
    characters: np.ndarray = field(compare=False)
    tautological: np.ndarray = field(compare=False)
    class_orders: tuple = ()

    @property
    def size(self) -> int:
        return len(self.dims)

    @property
    def order(self) -> int:
        return int(sum(self.class_sizes))

    def inner(self, chi: np.ndarray, psi: np.ndarray) -> complex:
        sizes = np.asarray(self.class_sizes, dtype=float)
        return complex(np.sum(sizes * np.conj(chi) * psi) / self.order)


def _round_int(value: complex, what: str) -> int:
    k = round(value.real)
    if abs(value - k) > INTEGRALITY_TOL:
        raise CharacterError(f"{what} = {value} is not within {INTEGRALITY_TOL} of an integer")
    return int(k)


def _quaternion(a, b, c, d) -> np.ndarray:
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]], dtype=complex)


def _generators(g: GroupSpec) -> list[np.ndarray]:
    if g.family == "D":
        n = g.m - 2
        z = cmath.exp(1j * math.pi / n)
        return [np.diag([z, 1 / z]), np.array([[0, 1], [-1, 0]], dtype=complex)]
    h = 0.5
    if g.m == 6:
        return [_quaternion(0, 1, 0, 0), _quaternion(h, h, h, h)]
    if g.m == 7:
        s = 1 / math.sqrt(2)
        return [_quaternion(s, s, 0, 0), _quaternion(h, h, h, h)]
    phi = (1 + math.sqrt(5)) / 2
    return [_quaternion(h, h, h, h), _quaternion(phi / 2, 1 / (2 * phi), h, 0)]


def _key(mat: np.ndarray) -> tuple:
    return tuple(int(round(v * 1e7)) for v in np.concatenate([mat.real.ravel(), mat.imag.ravel()]))


def _enumerate_group(gens: list[np.ndarray], expected: int) -> list[np.ndarray]:
    elems = [np.eye(2, dtype=complex)]
    seen = {_key(elems[0])}
    k = 0
    while k < len(elems):
        for s in gens:
            prod = elems[k] @ s
            key = _key(prod)
            if key not in seen:
                seen.add(key)
                elems.append(prod)
        k += 1
    if len(elems) != expected:
        raise CharacterError(f"generated {len(elems)} elements, expected {expected}")
    return elems


def _element_order(mat: np.ndarray) -> int:
    p = mat.copy()
    for k in range(1, 200):
        if np.allclose(p, np.eye(2), atol=1e-8):
            return k
        p = p @ mat
    raise CharacterError("element order not found")


def _burnside_table(g: GroupSpec):
    elems = _enumerate_group(_generators(g), g.order)
    index = {_key(e): n for n, e in enumerate(elems)}
    inverse = [index[_key(np.linalg.inv(e))] for e in elems]
    mult = [[index[_key(a @ b)] for b in elems] for a in elems]
    cls_of = [-1] * len(elems)
    classes: list[list[int]] = []
    for n in range(len(elems)):
        if cls_of[n] >= 0:
            continue
        members = sorted({mult[mult[h][n]][inverse[h]] for h in range(len(elems))})
        for mbr in members:
            cls_of[mbr] = len(classes)
        classes.append(members)
    reps = [elems[c[0]] for c in classes]
    orders = [_element_order(r) for r in reps]
    traces = [round(np.trace(r).real, 9) for r in reps]
    canon = sorted(range(len(classes)), key=lambda c: (orders[c], -traces[c], c))
    classes = [classes[c] for c in canon]
    reps = [reps[c] for c in canon]
    orders = [orders[c] for c in canon]
    for new, members in enumerate(classes):
        for mbr in members:
            cls_of[mbr] = new
    nc = len(classes)
    # class multiplication coefficients: K_j K_k = sum_l c[j,k,l] K_l
    coeff = np.zeros((nc, nc, nc))
    for j in range(nc):
        for k in range(nc):
            counts = np.zeros(nc)
            for a in classes[j]:
                for b in classes[k]:
                    counts[cls_of[mult[a][b]]] += 1
            coeff[j, k] = counts / np.array([len(c) for c in classes])
    rng = np.random.default_rng(20240607)
    weights = rng.standard_normal(nc)
    combo = np.einsum("j,jkl->kl", weights, coeff)
    # omega_l = |C_l| chi(g_l) / chi(1) is a right eigenvector of every K_j action
    vals, vecs = np.linalg.eig(combo)
    sizes = np.array([len(c) for c in classes], dtype=float)
    chars = []
    for col in range(nc):
        w = vecs[:, col] / vecs[0, col]
        deg2 = g.order / np.sum(np.abs(w) ** 2 / sizes)
        deg = math.sqrt(deg2.real)
        chars.append(deg * w / sizes)
    chars = np.array(chars)
    taut = np.array([np.trace(r) for r in reps])
    return chars, tuple(int(s) for s in sizes), taut, tuple(orders)


def _cyclic_table(m: int):
    z = cmath.exp(2j * math.pi / m)
    chars = np.array([[z ** (k * c) for c in range(m)] for k in range(m)])
    taut = np.array([z**c + z ** (-c) for c in range(m)])
    orders = tuple(m // math.gcd(c, m) for c in range(m))
    return chars, (1,) * m, taut, orders


@functools.lru_cache(maxsize=None)
def character_table(g: GroupSpec) -> CharacterTable:
    if g.family == "A":
        chars, sizes, taut, orders = _cyclic_table(g.m)
    else:
        chars, sizes, taut, orders = _burnside_table(g)
    dims = [_round_int(c[0], "character degree") for c in chars]
    if g.family != "A":
        order = sorted(
            range(len(dims)),
            key=lambda i: (dims[i], tuple((round(v.real, 6), round(v.imag, 6)) for v in chars[i])),
        )
        # the trivial character has degree 1 and all values 1; keep it first
        triv = [i for i in order if np.allclose(chars[i], 1)]
        order = triv + [i for i in order if i not in triv]
        chars = chars[order]
        dims = [dims[i] for i in order]
    table = CharacterTable(g, tuple(dims), sizes, chars, taut, orders)
    _validate(table)
    return table


def _validate(ct: CharacterTable) -> None:
    if sum(d * d for d in ct.dims) != ct.order:
        raise CharacterError("sum of squared degrees differs from the group order")
    for i in range(ct.size):
        for j in range(ct.size):
            val = ct.inner(ct.characters[i], ct.characters[j])
            if abs(val - (1 if i == j else 0)) > INTEGRALITY_TOL:
                raise CharacterError(f"characters {i}, {j} not orthonormal ({val})")
    if np.abs(ct.tautological.imag).max() > INTEGRALITY_TOL:
        raise CharacterError("tautological character is not real")
    if not np.allclose(ct.characters[0], 1):
        raise CharacterError("first irrep is not trivial")


@dataclass(frozen=True)
class Arrow:
    name: str
    tail: object  # vertex index, or "inf"
    head: object
    reverse: str
    eps: int


@dataclass(frozen=True)
class McKayQuiver:
    group: GroupSpec
    multiplicity: tuple  # multiplicity[i][j] = number of arrows i -> j
    arrows: tuple

    @property
    def size(self) -> int:
        return len(self.multiplicity)

    @property
    def vertices(self) -> list:
        return list(range(self.size))

    def adjacency(self) -> np.ndarray:
        """Edge-count adjacency: loops at i count a_ii / 2 edges, twice on the diagonal."""
        return np.array(self.multiplicity, dtype=int)

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)


def mckay_quiver(ct: CharacterTable) -> McKayQuiver:
    n = ct.size
    mult = [[0] * n for _ in range(n)]
    for i in range(n):
        prod = ct.characters[i] * ct.tautological
        for j in range(n):
            mult[i][j] = _round_int(ct.inner(ct.characters[j], prod), f"a[{i}][{j}]")
    for i in range(n):
        for j in range(n):
            if mult[i][j] != mult[j][i]:
                raise CharacterError("McKay multiplicities are not symmetric")
    arrows = []
    # lexicographically first orientation of every edge gets eps = +1
    for i in range(n):
        for j in range(i, n):
            edges = mult[i][j] if i != j else mult[i][i] // 2
            for k in range(edges):
                fwd, bwd = f"a{i}_{j}_{k}", f"a{j}_{i}_{k}" if i != j else f"a{i}_{i}_{k}r"
                arrows.append(Arrow(fwd, i, j, bwd, 1))
                arrows.append(Arrow(bwd, j, i, fwd, -1))
    return McKayQuiver(ct.group, tuple(tuple(r) for r in mult), tuple(arrows))


INF = "inf"


@dataclass(frozen=True)
class FramedQuiver:
    base: McKayQuiver
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("framing rank must be at least 1")

    @property
    def group(self) -> GroupSpec:
        return self.base.group

    @property
    def vertices(self) -> list:
        return [INF] + self.base.vertices

    @property
    def dynkin_vertices(self) -> list:
        return self.base.vertices

    @property
    def arrows(self) -> tuple:
        framing = []
        for k in range(self.r):
            framing.append(Arrow(f"b{k}", INF, 0, f"bb{k}", 1))
            framing.append(Arrow(f"bb{k}", 0, INF, f"b{k}", -1))
        return tuple(framing) + self.base.arrows

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)


def frame(q: McKayQuiver, r: int) -> FramedQuiver:
    return FramedQuiver(q, r)


def delta(ct: CharacterTable) -> tuple:
    return tuple(ct.dims)


def framed_quiver(group: GroupSpec | str, r: int) -> FramedQuiver:
    if isinstance(group, str):
        group = GroupSpec.parse(group)
    return _framed(group, r)


@functools.lru_cache(maxsize=None)
def _framed(group: GroupSpec, r: int) -> FramedQuiver:
    return frame(mckay_quiver(character_table(group)), r)


def cyclic_arrow_types(q: McKayQuiver) -> dict:
    """For A(m): map arrow name -> ("x" | "y", source weight).

    An "x" arrow carries multiplication by the first coordinate (weight +1),
    a "y" arrow the second (weight -1).
    """
    g = q.group
    if not g.is_cyclic:
        raise ValueError("only cyclic groups have a weight description")
    m = g.m
    types = {}
    for a in q.arrows:
        if a.eps != 1:
            continue
        i, j = a.tail, a.head
        k = int(a.name.split("_")[-1].rstrip("r"))
        if m <= 2:
            fwd_is_x = k == 0
        else:
            fwd_is_x = (j - i) % m == 1
        types[a.name] = ("x" if fwd_is_x else "y", i)
        types[a.reverse] = ("y" if fwd_is_x else "x", j)
    return types


# affine ADE edge lists used to check McKay graphs up to relabelling
def affine_dynkin_adjacency(g: GroupSpec) -> np.ndarray:
    if g.family == "A":
        m = g.m
        adj = np.zeros((m, m), dtype=int)
        if m == 1:
            adj[0, 0] = 2
        elif m == 2:
            adj[0, 1] = adj[1, 0] = 2
        else:
            for k in range(m):
                adj[k, (k + 1) % m] += 1
                adj[(k + 1) % m, k] += 1
        return adj
    if g.family == "D":
        n = g.m
        edges = [(0, 2), (1, 2)] + [(k, k + 1) for k in range(2, n - 2)] + [(n - 2, n - 1), (n - 2, n)]
        size = n + 1
    else:
        if g.m == 6:
            edges = [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)]
        elif g.m == 7:
            edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)]
        else:
            edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)]
        size = g.m + 1
    adj = np.zeros((size, size), dtype=int)
    for i, j in edges:
        adj[i, j] = adj[j, i] = 1
    return adj
