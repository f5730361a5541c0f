"""Scalar-generic dense linear algebra.

Matrices are numpy arrays. Exact matrices use ``dtype=object`` holding
:class:`fractions.Fraction` (or ``int``) entries; approximate matrices use
``complex128`` and carry a rank tolerance through a :class:`ComplexApprox`
field object. Every routine takes an optional ``field``; when omitted it is
inferred from the dtype.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Exact:
    """Arbitrary precision rationals."""

    name: str = "rational"

    def convert(self, a) -> np.ndarray:
        arr = np.array(a, dtype=object)
        if arr.size:
            flat = [Fraction(x) for x in arr.flat]
            arr = np.array(flat + [None], dtype=object)[:-1].reshape(arr.shape)
        return arr


@dataclass(frozen=True)
class ComplexApprox:
    """Double precision complex numbers with a relative rank tolerance."""

    tol: float = DEFAULT_TOL
    name: str = "complex"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")

    def convert(self, a) -> np.ndarray:
        return np.array(a, dtype=complex)


EXACT = Exact()


def field_of(a: np.ndarray, field=None):
    if field is not None:
        return field
    if np.asarray(a).dtype == object:
        return EXACT
    return ComplexApprox()


def qmatrix(rows, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Exact matrix from nested rows of ints/Fractions/"p/q" strings."""
    if shape is not None and (shape[0] == 0 or shape[1] == 0):
        return np.zeros(shape, dtype=object)
    arr = EXACT.convert(rows)
    if arr.ndim == 1:
        arr = arr.reshape(len(arr), 1) if shape is None else arr.reshape(shape)
    return arr


def zeros(rows: int, cols: int, field=EXACT) -> np.ndarray:
    if isinstance(field, Exact):
        out = np.empty((rows, cols), dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros((rows, cols), dtype=complex)


def identity(n: int, field=EXACT) -> np.ndarray:
    out = zeros(n, n, field)
    for k in range(n):
        out[k, k] = Fraction(1) if isinstance(field, Exact) else 1.0
    return out


def _rref(a: np.ndarray, field, pivot_cols: int | None = None):
    """Gauss-Jordan elimination.

    Returns ``(r, perm, rank)`` where ``r`` is the reduced matrix with its
    first ``pivot_cols`` columns permuted by ``perm``. Exact fields pivot on
    the first nonzero entry column by column (no column swaps); approximate
    fields use full pivoting and stop once the largest remaining entry drops
    below ``tol`` times the first pivot.
    """
    a = a.copy()
    rows, cols = a.shape
    k = cols if pivot_cols is None else pivot_cols
    perm = list(range(k))
    exact = isinstance(field, Exact)
    r = 0
    if exact:
        for c in range(k):
            if r == rows:
                break
            nz = [i for i in range(r, rows) if a[i, c] != 0]
            if not nz:
                continue
            p = nz[0]
            if p != r:
                a[[r, p]] = a[[p, r]]
            a[r] = a[r] / a[r, c]
            for i in range(rows):
                if i != r and a[i, c] != 0:
                    a[i] = a[i] - a[i, c] * a[r]
            # keep the pivot column aligned with its row index
            if c != r:
                perm[r], perm[c] = perm[c], perm[r]
                a[:, [r, c]] = a[:, [c, r]]
            r += 1
        return a, perm, r
    scale = 0.0
    while r < min(rows, k):
        sub = np.abs(a[r:, r:k])
        flat = int(np.argmax(sub))
        pi, pc = divmod(flat, sub.shape[1])
        big = sub[pi, pc]
        if r == 0:
            scale = big
        if big == 0 or big <= field.tol * scale:
            break
        pi += r
        pc += r
        if pi != r:
            a[[r, pi]] = a[[pi, r]]
        if pc != r:
            a[:, [r, pc]] = a[:, [pc, r]]
            perm[r], perm[pc] = perm[pc], perm[r]
        a[r] = a[r] / a[r, r]
        col = a[:, r].copy()
        col[r] = 0
        a -= np.outer(col, a[r])
        r += 1
    return a, perm, r


def rank(m: np.ndarray, field=None) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return _rref(m, field_of(m, field))[2]


def kernel_basis(m: np.ndarray, field=None) -> list[np.ndarray]:
    """Basis of the right kernel as a list of 1-d vectors."""
    m = np.asarray(m)
    field = field_of(m, field)
    rows, cols = m.shape
    if cols == 0:
        return []
    if rows == 0:
        eye = identity(cols, field)
        return [eye[:, k] for k in range(cols)]
    red, perm, rk = _rref(m, field)
    basis = []
    for f in range(rk, cols):
        vec = zeros(cols, 1, field)[:, 0]
        vec[perm[f]] = 1
        for i in range(rk):
            vec[perm[i]] = -red[i, f]
        basis.append(vec)
    return basis


def kernel_matrix(m: np.ndarray, field=None) -> np.ndarray:
    m = np.asarray(m)
    field = field_of(m, field)
    vecs = kernel_basis(m, field)
    if not vecs:
        return zeros(m.shape[1], 0, field)
    return np.column_stack(vecs)


def solve(m: np.ndarray, rhs: np.ndarray, field=None):
    """A particular solution of ``m @ x = rhs``, or ``None`` if inconsistent.

    Free variables are set to zero. ``rhs`` may be a vector or a matrix.
    """
    m = np.asarray(m)
    rhs = np.asarray(rhs)
    field = field_of(m, field)
    vector = rhs.ndim == 1
    if vector:
        rhs = rhs.reshape(-1, 1)
    if m.shape[0] != rhs.shape[0]:
        raise ValueError("row counts differ")
    rows, cols = m.shape
    nrhs = rhs.shape[1]
    aug = np.concatenate([field.convert(m).reshape(rows, cols), field.convert(rhs).reshape(rows, nrhs)], axis=1)
    x = zeros(cols, nrhs, field)
    if rows:
        red, perm, rk = _rref(aug, field, pivot_cols=cols)
        tail = red[rk:, cols:]
        if isinstance(field, Exact):
            if any(v != 0 for v in tail.flat):
                return None
        for i in range(rk):
            x[perm[i]] = red[i, cols:]
    if not isinstance(field, Exact):
        resid = m @ x - rhs if cols else -rhs
        bound = field.tol * max(1.0, float(np.abs(rhs).max(initial=0.0)), float(np.abs(m).max(initial=0.0) * np.abs(x).max(initial=0.0)))
        if np.abs(resid).max(initial=0.0) > bound * max(rows, 1):
            return None
    return x[:, 0] if vector else x


def column_basis(vectors: np.ndarray, field=None) -> np.ndarray:
    """Independent subset of the columns spanning the same space."""
    vectors = np.asarray(vectors)
    field = field_of(vectors, field)
    n, k = vectors.shape
    if k == 0 or n == 0:
        return zeros(n, 0, field)
    _, perm, rk = _rref(vectors, field)
    keep = sorted(perm[:rk])
    return vectors[:, keep]


def subspace_sum(bases: Sequence[np.ndarray], field=None) -> np.ndarray:
    """Basis (as columns) of the sum of the column spaces in ``bases``."""
    if not bases:
        raise ValueError("need at least one basis to fix the ambient dimension")
    dims = {b.shape[0] for b in bases}
    if len(dims) != 1:
        raise ValueError("ambient dimensions disagree")
    field = field_of(bases[0], field)
    stacked = np.concatenate([np.asarray(b) for b in bases], axis=1)
    return column_basis(stacked, field)


def subspace_intersect(bases: Sequence[np.ndarray], field=None) -> np.ndarray:
    """Basis of the intersection of the column spaces in ``bases``."""
    if not bases:
        raise ValueError("need at least one basis")
    dims = {b.shape[0] for b in bases}
    if len(dims) != 1:
        raise ValueError("ambient dimensions disagree")
    field = field_of(bases[0], field)
    current = column_basis(bases[0], field)
    for other in bases[1:]:
        other = column_basis(other, field)
        if current.shape[1] == 0 or other.shape[1] == 0:
            return zeros(current.shape[0], 0, field)
        ker = kernel_matrix(np.concatenate([current, -other], axis=1), field)
        if ker.shape[1] == 0:
            return zeros(current.shape[0], 0, field)
        current = column_basis(current @ ker[: current.shape[1]], field)
    return current


def preimage(m: np.ndarray, target: np.ndarray, source: np.ndarray | None = None, field=None) -> np.ndarray:
    """Basis of ``{u in span(source) : m u in span(target)}``.

    ``source`` defaults to the whole domain.
    """
    field = field_of(m, field)
    n = m.shape[1]
    if source is None:
        source = identity(n, field)
    if source.shape[1] == 0:
        return zeros(n, 0, field)
    image = m @ source
    system = np.concatenate([image, -target], axis=1) if target.shape[1] else image
    ker = kernel_matrix(system, field)
    if ker.shape[1] == 0:
        return zeros(n, 0, field)
    return column_basis(source @ ker[: source.shape[1]], field)


def complete_basis(sub: np.ndarray, field=None) -> np.ndarray:
    """Standard basis columns completing ``sub`` to a basis of the ambient space."""
    field = field_of(sub, field)
    n = sub.shape[0]
    eye = identity(n, field)
    full = np.concatenate([sub, eye], axis=1)
    _, perm, rk = _rref(full, field)
    chosen = sorted(perm[:rk])
    extra = [c - sub.shape[1] for c in chosen if c >= sub.shape[1]]
    if len(extra) != n - sub.shape[1]:
        # only reachable when sub has dependent columns
        raise ValueError("subspace basis is not independent")
    return eye[:, extra] if extra else zeros(n, 0, field)


def block_diag(blocks: Iterable[np.ndarray], field=EXACT) -> np.ndarray:
    blocks = list(blocks)
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols, field)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def is_zero(m: np.ndarray, field=None) -> bool:
    m = np.asarray(m)
    if m.size == 0:
        return True
    field = field_of(m, field)
    if isinstance(field, Exact):
        return all(v == 0 for v in m.flat)
    return float(np.abs(m).max()) <= field.tol
