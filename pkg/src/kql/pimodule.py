"""Modules over the preprojective algebra of a framed McKay quiver.

Two presentations are supported:

* :class:`QuiverModule` -- one matrix per arrow of the framed quiver, with
  ``dim_inf`` equal to 1 (framed modules) or 0 (modules living on the
  Dynkin part, such as vertex simples).
* :class:`ADHMDatum` -- the tuple ``(W, V, B1, B2, i, j)`` for cyclic groups,
  with ``V`` graded by weights mod m. ``B1`` raises the weight by one and
  ``B2`` lowers it; ``i`` lands in weight 0 and ``j`` reads weight 0.

Converting between them needs a sign per arrow: the quiver carries the
lexicographic orientation signs, while the ADHM relation is the plain
commutator ``[B1, B2] + i j``. An arrow with sign +1 that multiplies by the
second coordinate is stored negated in quiver form.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

import numpy as np

from . import linalg as la
from .mckay import INF, FramedQuiver, GroupSpec, cyclic_arrow_types, framed_quiver


@dataclass(frozen=True, eq=False)
class QuiverModule:
    quiver: FramedQuiver
    dims: Mapping  # vertex -> dimension, INF included
    maps: Mapping  # arrow name -> (dim head) x (dim tail) matrix
    field: object = la.EXACT

    def __post_init__(self):
        q = self.quiver
        dims = {v: int(self.dims.get(v, 0)) for v in q.vertices}
        if dims[INF] not in (0, 1):
            raise ValueError("the framing vertex must carry dimension 0 or 1")
        if any(d < 0 for d in dims.values()):
            raise ValueError("negative dimension")
        maps = {}
        for a in q.arrows:
            shape = (dims[a.head], dims[a.tail])
            mat = self.maps.get(a.name)
            if mat is None:
                mat = la.zeros(*shape, self.field)
            else:
                mat = self.field.convert(mat).reshape(shape) if np.asarray(mat).size else la.zeros(*shape, self.field)
            if mat.shape != shape:
                raise ValueError(f"arrow {a.name}: expected shape {shape}, got {mat.shape}")
            maps[a.name] = mat
        unknown = set(self.maps) - set(maps)
        if unknown:
            raise ValueError(f"unknown arrows {sorted(unknown)}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "maps", maps)

    @property
    def dim_inf(self) -> int:
        return self.dims[INF]

    @property
    def v(self) -> tuple:
        return tuple(self.dims[i] for i in self.quiver.dynkin_vertices)

    def dim_vector(self) -> tuple:
        return (self.dim_inf,) + self.v

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def __repr__(self) -> str:
        return f"QuiverModule({self.quiver.group}, r={self.quiver.r}, dim={self.dim_vector()})"


@dataclass(frozen=True)
class ModuleHom:
    source: QuiverModule
    target: QuiverModule
    components: Mapping  # vertex -> matrix (target dim) x (source dim)


def vertex_simple(q: FramedQuiver, vertex, field=la.EXACT) -> QuiverModule:
    return QuiverModule(q, {vertex: 1}, {}, field)


def zero_module(q: FramedQuiver, field=la.EXACT) -> QuiverModule:
    return QuiverModule(q, {}, {}, field)


def preprojective_residual(m: QuiverModule) -> dict:
    """Per-vertex value of sum over arrows a with head i of eps(a) B_a B_abar."""
    res = {v: la.zeros(m.dims[v], m.dims[v], m.field) for v in m.quiver.vertices}
    for a in m.quiver.arrows:
        term = m.maps[a.name] @ m.maps[a.reverse]
        if term.size:
            res[a.head] = res[a.head] + a.eps * term
    return res


def is_pi_module(m: QuiverModule) -> bool:
    return all(la.is_zero(r, m.field) for r in preprojective_residual(m).values())


def direct_sum(m1: QuiverModule, m2: QuiverModule) -> QuiverModule:
    if m1.quiver != m2.quiver:
        raise ValueError("modules live on different quivers")
    if m1.dim_inf and m2.dim_inf:
        raise ValueError("at most one summand may be framed (dim_inf = 1)")
    q = m1.quiver
    dims = {v: m1.dims[v] + m2.dims[v] for v in q.vertices}
    maps = {a.name: la.block_diag([m1.maps[a.name], m2.maps[a.name]], m1.field) for a in q.arrows}
    return QuiverModule(q, dims, maps, m1.field)


def change_basis(m: QuiverModule, g: Mapping) -> QuiverModule:
    """Transport ``m`` along invertible per-vertex matrices ``g``."""
    inv = {}
    for v in m.quiver.vertices:
        n = m.dims[v]
        gv = g.get(v)
        if gv is None:
            gv = la.identity(n, m.field)
        sol = la.solve(gv, la.identity(n, m.field), m.field) if n else la.zeros(0, 0, m.field)
        if sol is None:
            raise ValueError(f"change of basis at {v} is singular")
        inv[v] = (gv, sol)
    maps = {a.name: inv[a.head][0] @ m.maps[a.name] @ inv[a.tail][1] for a in m.quiver.arrows}
    return QuiverModule(m.quiver, m.dims, maps, m.field)


def _hom_system(m: QuiverModule, n: QuiverModule):
    q = m.quiver
    offsets = {}
    total = 0
    for v in q.vertices:
        offsets[v] = total
        total += n.dims[v] * m.dims[v]
    rows = []
    for a in q.arrows:
        t, h = a.tail, a.head
        bm, bn = m.maps[a.name], n.maps[a.name]
        # g_h @ bm - bn @ g_t = 0, entry (p, q): p < n_h, q < m_t
        for p in range(n.dims[h]):
            for c in range(m.dims[t]):
                row = la.zeros(1, total, m.field)[0]
                for s in range(m.dims[h]):
                    if bm[s, c] != 0:
                        row[offsets[h] + p * m.dims[h] + s] += bm[s, c]
                for s in range(n.dims[t]):
                    if bn[p, s] != 0:
                        row[offsets[t] + s * m.dims[t] + c] -= bn[p, s]
                rows.append(row)
    mat = np.array(rows, dtype=object if isinstance(m.field, la.Exact) else complex).reshape(len(rows), total)
    return mat, offsets, total


def hom_space(m: QuiverModule, n: QuiverModule) -> list:
    if m.quiver != n.quiver:
        raise ValueError("modules live on different quivers")
    mat, offsets, total = _hom_system(m, n)
    if total == 0:
        return []
    basis = la.kernel_basis(mat, m.field)
    homs = []
    for vec in basis:
        comps = {}
        for v in m.quiver.vertices:
            size = n.dims[v] * m.dims[v]
            comps[v] = vec[offsets[v] : offsets[v] + size].reshape(n.dims[v], m.dims[v])
        homs.append(ModuleHom(m, n, comps))
    return homs


def _invertible(h: ModuleHom, field) -> bool:
    for v, comp in h.components.items():
        if comp.shape[0] != comp.shape[1]:
            return False
        if comp.shape[0] and la.rank(comp, field) != comp.shape[0]:
            return False
    return True


def is_isomorphic(m: QuiverModule, n: QuiverModule, seed: int = 0, attempts: int = 32) -> bool:
    if m.quiver != n.quiver or m.dims != n.dims:
        return False
    basis = hom_space(m, n)
    if not basis:
        return m.total_dim == 0
    if len(basis) == 1:
        return _invertible(basis[0], m.field)
    rng = np.random.default_rng(seed)
    exact = isinstance(m.field, la.Exact)
    for _ in range(attempts):
        if exact:
            coeffs = [Fraction(int(c)) for c in rng.integers(-50, 51, size=len(basis))]
        else:
            coeffs = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
        comps = {v: sum((c * h.components[v] for c, h in zip(coeffs, basis)), la.zeros(n.dims[v], m.dims[v], m.field)) for v in m.quiver.vertices}
        if _invertible(ModuleHom(m, n, comps), m.field):
            return True
    return False


def _empty(m: QuiverModule, v) -> np.ndarray:
    return la.zeros(m.dims[v], 0, m.field)


def submodule_generated(m: QuiverModule, seeds: Mapping) -> dict:
    """Smallest arrow-closed family of subspaces containing the seed vectors."""
    sub = {}
    for v in m.quiver.vertices:
        s = seeds.get(v)
        if s is None or np.asarray(s).size == 0:
            sub[v] = _empty(m, v)
        else:
            s = m.field.convert(s).reshape(m.dims[v], -1)
            sub[v] = la.column_basis(s, m.field)
    changed = True
    while changed:
        changed = False
        for a in m.quiver.arrows:
            if sub[a.tail].shape[1] == 0 or m.dims[a.head] == 0:
                continue
            grown = la.subspace_sum([sub[a.head], m.maps[a.name] @ sub[a.tail]], m.field)
            if grown.shape[1] > sub[a.head].shape[1]:
                sub[a.head] = grown
                changed = True
    return sub


def infinity_generated(m: QuiverModule) -> dict:
    if m.dim_inf == 0:
        return {v: _empty(m, v) for v in m.quiver.vertices}
    return submodule_generated(m, {INF: la.identity(1, m.field)})


def max_submodule_supported(m: QuiverModule, support: Iterable) -> dict:
    """Largest submodule whose nonzero components lie on the vertex set ``support``."""
    z = set(support)
    if INF in z:
        raise ValueError("the framing vertex cannot be in the support set")
    sub = {v: (la.identity(m.dims[v], m.field) if v in z else _empty(m, v)) for v in m.quiver.vertices}
    changed = True
    while changed:
        changed = False
        for a in m.quiver.arrows:
            t = a.tail
            if t not in z or sub[t].shape[1] == 0:
                continue
            target = sub[a.head] if a.head in z else _empty(m, a.head)
            shrunk = la.preimage(m.maps[a.name], target, sub[t], m.field)
            if shrunk.shape[1] < sub[t].shape[1]:
                sub[t] = shrunk
                changed = True
    return sub


def is_closed(m: QuiverModule, sub: Mapping) -> bool:
    for a in m.quiver.arrows:
        img = m.maps[a.name] @ sub[a.tail]
        if img.size == 0:
            continue
        if la.rank(np.concatenate([sub[a.head], img], axis=1), m.field) > sub[a.head].shape[1]:
            return False
    return True


def sub_dims(sub: Mapping) -> dict:
    return {v: b.shape[1] for v, b in sub.items()}


def restrict(m: QuiverModule, sub: Mapping) -> QuiverModule:
    """The submodule spanned by ``sub`` (columns are its basis)."""
    maps = {}
    for a in m.quiver.arrows:
        t, h = sub[a.tail], sub[a.head]
        if t.shape[1] == 0 or h.shape[1] == 0:
            continue
        x = la.solve(h, m.maps[a.name] @ t, m.field)
        if x is None:
            raise ValueError("family of subspaces is not closed under the arrows")
        maps[a.name] = x
    return QuiverModule(m.quiver, sub_dims(sub), maps, m.field)


def quotient(m: QuiverModule, sub: Mapping) -> QuiverModule:
    """``m`` modulo the submodule spanned by ``sub``."""
    frames = {}
    for v in m.quiver.vertices:
        k = sub[v]
        c = la.complete_basis(k, m.field)
        frames[v] = (k.shape[1], c, np.concatenate([k, c], axis=1))
    maps = {}
    for a in m.quiver.arrows:
        kt, ct, _ = frames[a.tail]
        kh, ch, th = frames[a.head]
        if ct.shape[1] == 0 or ch.shape[1] == 0:
            continue
        coords = la.solve(th, m.maps[a.name] @ ct, m.field)
        maps[a.name] = coords[kh:]
    dims = {v: frames[v][1].shape[1] for v in m.quiver.vertices}
    return QuiverModule(m.quiver, dims, maps, m.field)


# --------------------------------------------------------------------------
# ADHM form (cyclic groups)


@dataclass(frozen=True, eq=False)
class ADHMDatum:
    m: int  # order of the cyclic group
    weights: tuple
    B1: np.ndarray
    B2: np.ndarray
    i: np.ndarray  # dim V x r
    j: np.ndarray  # r x dim V
    field: object = la.EXACT

    def __post_init__(self):
        n = len(self.weights)
        w = tuple(int(x) % self.m for x in self.weights)
        object.__setattr__(self, "weights", w)
        iv, jv = np.asarray(self.i), np.asarray(self.j)
        r = iv.shape[1] if iv.ndim == 2 else jv.shape[0] if jv.ndim == 2 else 0
        conv = {}
        for name, shape in (("B1", (n, n)), ("B2", (n, n)), ("i", (n, r)), ("j", (r, n))):
            val = np.asarray(getattr(self, name))
            conv[name] = self.field.convert(val).reshape(shape) if val.size else la.zeros(*shape, self.field)
            object.__setattr__(self, name, conv[name])
        for p in range(n):
            for q in range(n):
                if self._nz(self.B1[p, q]) and w[p] != (w[q] + 1) % self.m:
                    raise ValueError("B1 must raise the weight by one")
                if self._nz(self.B2[p, q]) and w[p] != (w[q] - 1) % self.m:
                    raise ValueError("B2 must lower the weight by one")
            if w[p] != 0 and (any(self._nz(x) for x in self.i[p]) or any(self._nz(x) for x in self.j[:, p])):
                raise ValueError("i and j only touch the weight-0 part of V")

    def _nz(self, x) -> bool:
        if isinstance(self.field, la.Exact):
            return x != 0
        return abs(x) > self.field.tol

    @property
    def r(self) -> int:
        return self.i.shape[1]

    @property
    def dim(self) -> int:
        return len(self.weights)

    def weight_dims(self) -> tuple:
        return tuple(sum(1 for w in self.weights if w == k) for k in range(self.m))


def adhm_residual(d: ADHMDatum) -> np.ndarray:
    """``[B1, B2] + i j``; zero exactly on the moment map fibre over 0."""
    return d.B1 @ d.B2 - d.B2 @ d.B1 + d.i @ d.j


def adhm_direct_sum(d1: ADHMDatum, d2: ADHMDatum) -> ADHMDatum:
    if d1.m != d2.m:
        raise ValueError("different groups")
    f = d1.field
    return ADHMDatum(
        d1.m,
        d1.weights + d2.weights,
        la.block_diag([d1.B1, d2.B1], f),
        la.block_diag([d1.B2, d2.B2], f),
        la.block_diag([d1.i, d2.i], f),
        la.block_diag([d1.j, d2.j], f),
        f,
    )


def _arrow_sign(arrow, kind: str) -> int:
    return -1 if (arrow.eps == 1 and kind == "y") else 1


def quiver_to_adhm(mod: QuiverModule) -> ADHMDatum:
    q = mod.quiver
    g = q.group
    if not g.is_cyclic:
        raise NotImplementedError("ADHM form is only implemented for cyclic groups")
    m = g.m
    types = cyclic_arrow_types(q.base)
    offsets, total = [], 0
    for k in range(m):
        offsets.append(total)
        total += mod.dims[k]
    weights = tuple(k for k in range(m) for _ in range(mod.dims[k]))
    f = mod.field
    B = {"x": la.zeros(total, total, f), "y": la.zeros(total, total, f)}
    for a in q.base.arrows:
        kind, src = types[a.name]
        dst = (src + 1) % m if kind == "x" else (src - 1) % m
        mat = mod.maps[a.name]
        if mat.size == 0:
            continue
        rs, cs = offsets[dst], offsets[src]
        B[kind][rs : rs + mod.dims[dst], cs : cs + mod.dims[src]] += _arrow_sign(a, kind) * mat
    r = q.r if mod.dim_inf else 0
    i = la.zeros(total, r, f)
    j = la.zeros(r, total, f)
    v0 = mod.dims[0]
    for k in range(r):
        if v0:
            i[offsets[0] : offsets[0] + v0, k] = mod.maps[f"b{k}"][:, 0]
            j[k, offsets[0] : offsets[0] + v0] = mod.maps[f"bb{k}"][0, :]
    return ADHMDatum(m, weights, B["x"], B["y"], i, j, f)


def adhm_to_quiver(d: ADHMDatum, q: Optional[FramedQuiver] = None) -> QuiverModule:
    if q is None:
        q = framed_quiver(GroupSpec("A", d.m), max(d.r, 1))
    if q.group != GroupSpec("A", d.m):
        raise ValueError("quiver group does not match the datum")
    if d.r not in (0, q.r):
        raise ValueError(f"framing rank {d.r} does not match quiver rank {q.r}")
    types = cyclic_arrow_types(q.base)
    idx = {k: [p for p, w in enumerate(d.weights) if w == k] for k in range(d.m)}
    dims = {k: len(idx[k]) for k in range(d.m)}
    dims[INF] = 1 if d.r else 0
    maps = {}
    for a in q.base.arrows:
        kind, src = types[a.name]
        dst = (src + 1) % d.m if kind == "x" else (src - 1) % d.m
        if not idx[src] or not idx[dst]:
            continue
        mat = d.B1 if kind == "x" else d.B2
        maps[a.name] = _arrow_sign(a, kind) * mat[np.ix_(idx[dst], idx[src])]
    if d.r and idx[0]:
        for k in range(d.r):
            maps[f"b{k}"] = d.i[np.ix_(idx[0], [k])]
            maps[f"bb{k}"] = d.j[np.ix_([k], idx[0])]
    return QuiverModule(q, dims, maps, d.field)
