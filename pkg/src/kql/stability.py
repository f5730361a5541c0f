"""Stability for the parameters used throughout: C+, theta_0 and theta_I.

All three are determined by a positivity set ``P`` of Dynkin vertices:
``theta_i > 0`` for ``i`` in ``P``, ``theta_i = 0`` on the remaining Dynkin
vertices (the zero set ``Z``), and ``theta_inf`` balances ``theta(1, v) = 0``.

For a module ``M`` of dimension ``(1, v)`` and a submodule ``U`` of dimension
``(u_inf, u)``:

* if ``u_inf = 0`` then ``theta(U) = sum_P theta_i u_i >= 0``, with equality
  iff ``U`` is supported on ``Z``;
* if ``u_inf = 1`` then ``theta(U) = -sum_P theta_i (v_i - u_i) <= 0``, with
  strict inequality iff ``U`` misses some dimension on ``P``.

Hence ``M`` is stable iff the submodule generated by the framing vertex is
all of ``M`` and no nonzero submodule is supported on ``Z``; it is
semistable iff the framing-generated submodule has full dimension on ``P``.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .mckay import character_table
from .pimodule import (
    QuiverModule,
    infinity_generated,
    is_isomorphic,
    is_pi_module,
    max_submodule_supported,
    quotient,
    restrict,
    sub_dims,
)


class StabilityError(ValueError):
    """Input outside the domain of the stability routines."""


@dataclass(frozen=True)
class StabilityParameter:
    theta_inf: Fraction
    theta: tuple  # one rational per Dynkin vertex

    def __post_init__(self):
        object.__setattr__(self, "theta_inf", Fraction(self.theta_inf))
        object.__setattr__(self, "theta", tuple(Fraction(t) for t in self.theta))
        if any(t < 0 for t in self.theta):
            raise StabilityError("only parameters with nonnegative Dynkin entries are supported")

    @property
    def positivity_set(self) -> frozenset:
        return frozenset(i for i, t in enumerate(self.theta) if t > 0)

    @property
    def zero_set(self) -> frozenset:
        return frozenset(i for i, t in enumerate(self.theta) if t == 0)

    def __call__(self, dims: Sequence[int]) -> Fraction:
        return theta_of(self, dims)


def theta_of(t: StabilityParameter, dims: Sequence[int]) -> Fraction:
    """``theta`` paired with a dimension vector ``(d_inf, d_0, ..., d_s)``."""
    if len(dims) != len(t.theta) + 1:
        raise StabilityError("dimension vector does not match the parameter")
    return t.theta_inf * dims[0] + sum(th * d for th, d in zip(t.theta, dims[1:]))


def theta_zero(n, size: Optional[int] = None) -> StabilityParameter:
    """``(-n, 1, 0, ..., 0)`` on ``size`` Dynkin vertices.

    ``n`` may also be a dimension vector ``v``; then ``n = v_0`` and the
    size is ``len(v)``.
    """
    if not isinstance(n, numbers.Integral):
        v = tuple(n)
        n, size = v[0], len(v)
    if size is None or size < 1:
        raise StabilityError("theta_zero needs the number of Dynkin vertices")
    if n < 0:
        raise StabilityError("n must be nonnegative")
    return StabilityParameter(-n, (1,) + (0,) * (size - 1))


def c_plus_representative(v: Sequence[int]) -> StabilityParameter:
    return StabilityParameter(-sum(v), (1,) * len(v))


def theta_I(positive: Iterable[int], v: Sequence[int], allow_empty: bool = False) -> StabilityParameter:
    positive = set(positive)
    if not positive and not allow_empty:
        raise StabilityError("theta_I needs a nonempty positivity set")
    if any(i < 0 or i >= len(v) for i in positive):
        raise StabilityError("positivity set refers to a missing vertex")
    theta = tuple(1 if i in positive else 0 for i in range(len(v)))
    return StabilityParameter(-sum(v[i] for i in positive), theta)


def in_c_plus(t: StabilityParameter) -> bool:
    return all(x > 0 for x in t.theta)


def _check(m: QuiverModule, t: StabilityParameter) -> None:
    if m.dim_inf != 1:
        raise StabilityError("stability is defined for framed modules (dim_inf = 1)")
    if len(t.theta) != len(m.v):
        raise StabilityError("parameter and module have different vertex counts")
    if theta_of(t, m.dim_vector()) != 0:
        raise StabilityError(f"theta(dim M) = {theta_of(t, m.dim_vector())} is not zero")
    if not is_pi_module(m):
        raise StabilityError("preprojective relations do not vanish")


def is_stable(m: QuiverModule, t: StabilityParameter) -> bool:
    _check(m, t)
    gen = sub_dims(infinity_generated(m))
    if gen != m.dims:
        return False
    bad = max_submodule_supported(m, t.zero_set)
    return all(b.shape[1] == 0 for b in bad.values())


def is_semistable(m: QuiverModule, t: StabilityParameter) -> bool:
    _check(m, t)
    gen = sub_dims(infinity_generated(m))
    return all(gen[i] == m.dims[i] for i in t.positivity_set)


def concentrate(m: QuiverModule) -> QuiverModule:
    """The framed stable summand of the theta_0-polystable representative."""
    if not is_semistable(m, theta_zero(m.v)):
        raise StabilityError("module is not theta_0-semistable")
    out = restrict(m, infinity_generated(m))
    dynkin_away_from_0 = [i for i in m.quiver.dynkin_vertices if i != 0]
    while True:
        kernel = max_submodule_supported(out, dynkin_away_from_0)
        if all(b.shape[1] == 0 for b in kernel.values()):
            return out
        out = quotient(out, kernel)


def polystable_theta0(m: QuiverModule):
    """``(concentrated module, vertex-simple multiplicities)``.

    Multiplicities are indexed like dimension vectors ``(inf, 0, ..., s)``.
    """
    con = concentrate(m)
    mult = tuple(a - b for a, b in zip(m.dim_vector(), con.dim_vector()))
    return con, mult


def r_equivalent(m: QuiverModule, n: QuiverModule, seed: int = 0) -> bool:
    return is_isomorphic(concentrate(m), concentrate(n), seed=seed)


def s_equivalent(m: QuiverModule, n: QuiverModule, seed: int = 0) -> bool:
    return m.dim_vector() == n.dim_vector() and r_equivalent(m, n, seed)


def dimension_bound_check(m: QuiverModule) -> bool:
    """``dim M <= (1, n delta)`` with ``n = dim_0 M``."""
    d = character_table(m.quiver.group).dims
    n = m.dims[0]
    return m.dim_inf <= 1 and all(m.dims[i] <= n * d[i] for i in m.quiver.dynkin_vertices)
