from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kql import linalg as la
from kql.corpus import random_datum, randomize_basis
from kql.ideals import witness_module
from kql.mckay import INF, GroupSpec, framed_quiver
from kql.pimodule import (
    ADHMDatum,
    QuiverModule,
    adhm_residual,
    adhm_to_quiver,
    change_basis,
    direct_sum,
    hom_space,
    infinity_generated,
    is_isomorphic,
    is_pi_module,
    max_submodule_supported,
    preprojective_residual,
    quotient,
    quiver_to_adhm,
    restrict,
    sub_dims,
    vertex_simple,
)


def _sym(a):
    return sympy.Matrix(a.shape[0], a.shape[1], [sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in a.flat])


def hom_dimension_oracle(m, n) -> int:
    """dim Hom via Kronecker products (column-major vec), sympy rank."""
    q = m.quiver
    sizes = [n.dims[v] * m.dims[v] for v in q.vertices]
    total = sum(sizes)
    if total == 0:
        return 0
    offs = dict(zip(q.vertices, np.cumsum([0] + sizes[:-1])))
    blocks = []
    for a in q.arrows:
        t, h = a.tail, a.head
        rows = n.dims[h] * m.dims[t]
        if rows == 0:
            continue
        blk = sympy.zeros(rows, total)
        if n.dims[h] * m.dims[h]:
            left = sympy.kronecker_product(_sym(m.maps[a.name]).T, sympy.eye(n.dims[h]))
            blk[:, offs[h] : offs[h] + n.dims[h] * m.dims[h]] += left
        if n.dims[t] * m.dims[t]:
            right = sympy.kronecker_product(sympy.eye(m.dims[t]), _sym(n.maps[a.name]))
            blk[:, offs[t] : offs[t] + n.dims[t] * m.dims[t]] -= right
        blocks.append(blk)
    if not blocks:
        return total
    return total - sympy.Matrix.vstack(*blocks).rank()


def _module(seed, group="A2", v=(1, 1), r=1, density=0.8):
    rng = np.random.default_rng(seed)
    g = GroupSpec.parse(group)
    return adhm_to_quiver(random_datum(rng, g.m, v, r, density), framed_quiver(g, r))


def test_vertex_simples_are_pi_modules():
    q = framed_quiver("E6", 1)
    for v in q.vertices:
        s = vertex_simple(q, v)
        assert is_pi_module(s)
        assert s.total_dim == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1, 2, 3, 4]), st.integers(1, 2))
def test_adhm_roundtrip(seed, m, r):
    rng = np.random.default_rng(seed)
    v = [int(x) for x in rng.integers(0, 3, size=m)]
    d = random_datum(rng, m, v, r)
    assert la.is_zero(adhm_residual(d))
    mod = adhm_to_quiver(d, framed_quiver(GroupSpec("A", m), r))
    assert is_pi_module(mod)
    back = quiver_to_adhm(mod)
    for name in ("B1", "B2", "i", "j"):
        assert np.array_equal(getattr(back, name), getattr(d, name))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_residuals_correspond_blockwise(seed, m):
    # perturbed data: residuals are nonzero in general, and must still match
    rng = np.random.default_rng(seed)
    v = [int(x) for x in rng.integers(1, 3, size=m)]
    d = random_datum(rng, m, v, 1)
    noise = d.B2.copy()
    for p in range(d.dim):
        for q in range(d.dim):
            if d.weights[p] == (d.weights[q] - 1) % m:
                noise[p, q] += Fraction(int(rng.integers(-1, 2)))
    bumped = ADHMDatum(m, d.weights, d.B1, noise, d.i, d.j)
    mod = adhm_to_quiver(bumped, framed_quiver(GroupSpec("A", m), 1))
    res_q = preprojective_residual(mod)
    res_a = adhm_residual(bumped)
    for k in range(m):
        idx = [p for p, w in enumerate(bumped.weights) if w == k]
        block = res_a[np.ix_(idx, idx)]
        assert np.array_equal(res_q[k], block)
    assert is_pi_module(mod) == la.is_zero(res_a)


@pytest.mark.parametrize("seed", range(6))
def test_hom_space_dimension_matches_kronecker_oracle(seed):
    m1 = _module(seed, v=(1, 2), density=0.5)
    m2 = randomize_basis(np.random.default_rng(seed + 100), m1)
    s = vertex_simple(m1.quiver, 1)
    for a, b in [(m1, m2), (m1, s), (s, m1), (direct_sum(m1, s), m1)]:
        assert len(hom_space(a, b)) == hom_dimension_oracle(a, b)


def test_change_of_basis_gives_isomorphic_module():
    mod = witness_module([(1, 2), (3, 1)], "A2")
    g = {0: la.qmatrix([[1, 1], [0, 1]]), 1: la.qmatrix([[2, 0], [1, 1]])}
    other = change_basis(mod, g)
    assert is_isomorphic(mod, other)
    assert is_pi_module(other)
    assert not is_isomorphic(mod, witness_module([(1, 2), (1, 1)], "A2"))


def test_stable_witness_has_scalar_endomorphisms():
    mod = witness_module([(1, 2)], "A3", 2)
    assert len(hom_space(mod, mod)) == 1


def test_submodules_and_quotients():
    mod = witness_module([(1, 2)], "A2")
    s1 = vertex_simple(mod.quiver, 1)
    big = direct_sum(mod, s1)
    gen = infinity_generated(big)
    assert sub_dims(gen) == {INF: 1, 0: 1, 1: 1}
    sub = restrict(big, gen)
    assert is_isomorphic(sub, mod)
    zs = max_submodule_supported(big, [1])
    assert sub_dims(zs) == {INF: 0, 0: 0, 1: 1}
    assert is_isomorphic(quotient(big, zs), mod)
    assert is_isomorphic(quotient(big, gen), s1)


def test_direct_sum_rejects_two_framed_summands():
    mod = witness_module([(1, 2)], "A2")
    with pytest.raises(ValueError):
        direct_sum(mod, mod)


def test_grading_validation():
    with pytest.raises(ValueError):
        ADHMDatum(2, (0, 0), [[0, 1], [0, 0]], [[0, 0], [0, 0]], [[1], [0]], [[0, 0]])
    with pytest.raises(ValueError):
        ADHMDatum(2, (0, 1), [[0, 0], [1, 0]], [[0, 0], [0, 0]], [[0], [1]], [[0, 0]])


def test_shape_validation():
    q = framed_quiver("A2", 1)
    with pytest.raises(ValueError):
        QuiverModule(q, {INF: 1, 0: 1}, {"b0": [[1, 2]]})
    with pytest.raises(ValueError):
        QuiverModule(q, {INF: 2}, {})
    with pytest.raises(ValueError):
        QuiverModule(q, {INF: 1}, {"nope": [[1]]})


def test_complex_field_modules():
    f = la.ComplexApprox(1e-9)
    mod = witness_module([(1, 2)], "A2")
    cmod = QuiverModule(mod.quiver, mod.dims, {k: v.astype(complex) * (1 + 1e-13) for k, v in mod.maps.items()}, f)
    assert is_pi_module(cmod)
    assert sub_dims(infinity_generated(cmod)) == mod.dims
