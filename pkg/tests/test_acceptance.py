"""Acceptance criteria, one test per criterion."""
from __future__ import annotations

import itertools
import json
import os
import subprocess
import sys
import time
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

from clirun import SRC
from kql import linalg as la
from kql.corpus import descent_pairs, distinct_orbit_points, monomial_ideals, stability_corpus
from kql.descent import colength, d_invariance_check, descend_ideal
from kql.ideals import adhm_to_ideal, ideal_to_adhm, isotypic_decomposition, points_ideal, witness_module
from kql.mckay import GroupSpec, _framed, character_table, mckay_quiver
from kql.monad import (
    build_monad,
    composite_vanishes,
    invariant_sections_check,
    koszul_middle_check,
    monad_fiber_check,
    sample_points,
    tangent_dimension,
)
from kql.pimodule import ADHMDatum, is_isomorphic, preprojective_residual, quiver_to_adhm
from kql.stability import c_plus_representative, concentrate, is_semistable, is_stable, theta_I, theta_zero
from oracles import brute_force_stability

pytestmark = pytest.mark.acceptance

TESTS = Path(__file__).resolve().parent


def _expected_diagram(family: str, n: int) -> nx.MultiGraph:
    """Affine Dynkin diagrams written out by hand, independent of the library."""
    g = nx.MultiGraph()
    if family == "A":
        if n == 1:
            g.add_node(0)
            g.add_edge(0, 0)
        elif n == 2:
            g.add_edges_from([(0, 1), (0, 1)])
        else:
            g.add_edges_from((k, (k + 1) % n) for k in range(n))
    elif family == "D":
        # affine D_n: a chain 2..n-2 with two leaves at each end
        k = n - 2
        chain = list(range(2, k + 1))
        g.add_edges_from(zip(chain, chain[1:]))
        g.add_edges_from([(0, 2), (1, 2), (k + 1, k), (k + 2, k)])
    else:
        arms = {6: (2, 2, 2), 7: (1, 3, 3), 8: (1, 2, 5)}[n]
        g.add_node("c")
        for a, length in enumerate(arms):
            prev = "c"
            for s in range(length):
                g.add_edge(prev, (a, s))
                prev = (a, s)
    return g


def _graph(adj) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(range(len(adj)))
    for i in range(len(adj)):
        for j in range(i, len(adj)):
            for _ in range(adj[i][j] if i != j else adj[i][i] // 2):
                g.add_edge(i, j)
    return g


def test_criterion_1_mckay(record_acceptance):
    names = ["A1", "A2", "A3", "A4", "A5", "A6", "D4", "D5", "E6", "E7", "E8"]
    character_table.cache_clear()
    _framed.cache_clear()
    start = time.perf_counter()
    failures = []
    for name in names:
        g = GroupSpec.parse(name)
        ct = character_table(g)
        adj = mckay_quiver(ct).adjacency()
        family, n = name[0], int(name[1:])
        # D(m) here is the binary dihedral group of order 4(m - 2), with diagram affine D_m
        size = {"A": n, "D": n + 1, "E": n + 1}[family]
        expected = _expected_diagram(family, n)
        cartan = 2 * np.eye(len(adj), dtype=int) - np.asarray(adj, dtype=int)
        if len(adj) != size or not nx.is_isomorphic(_graph(adj), expected) or np.any(cartan @ np.asarray(ct.dims) != 0):
            failures.append(name)
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 1.0
    record_acceptance(1, ok, f"{len(names)} groups, failures={failures}, {elapsed:.2f}s (< 1s)")
    assert ok


def test_criterion_2_moment_map(record_acceptance):
    start = time.perf_counter()
    count, bad = 0, 0
    for group, n, r in itertools.product(("A2", "A3"), (1, 2, 3), (1, 2)):
        for seed in range(3):
            pts = distinct_orbit_points(np.random.default_rng(seed), n, int(group[1:]))
            mod = witness_module(pts, group, r)
            count += 1
            if not all(la.is_zero(m) for m in preprojective_residual(mod).values()):
                bad += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 5.0
    record_acceptance(2, ok, f"{count} witnesses, {bad} with nonzero residual, {elapsed:.2f}s (< 5s)")
    assert ok


CORPUS_SIZE = 500


@pytest.fixture(scope="module")
def corpus():
    return stability_corpus(CORPUS_SIZE, seed=0)


def _thetas(mod):
    return {"cplus": c_plus_representative(mod.v), "theta0": theta_zero(mod.v), "I={0}": theta_I({0}, mod.v)}


def test_criterion_3_stability_oracle(corpus, record_acceptance):
    start = time.perf_counter()
    disagreements = []
    stable_counts = dict.fromkeys(("cplus", "theta0", "I={0}"), 0)
    for k, mod in enumerate(corpus):
        for name, t in _thetas(mod).items():
            ours = (is_stable(mod, t), is_semistable(mod, t))
            if ours != brute_force_stability(mod, t):
                disagreements.append((k, name))
            stable_counts[name] += ours[0]
    elapsed = time.perf_counter() - start
    ok = len(corpus) >= 500 and not disagreements and elapsed < 60.0
    record_acceptance(3, ok, f"{len(corpus)} modules x 3 theta, {len(disagreements)} disagreements, stable counts {stable_counts}, {elapsed:.1f}s (< 60s)")
    assert ok, disagreements[:10]


def test_criterion_4_concentrate_laws(corpus, record_acceptance):
    checked, violations = 0, []
    for k, mod in enumerate(corpus):
        if not is_semistable(mod, theta_zero(mod.v)):
            continue
        checked += 1
        con = concentrate(mod)
        n = mod.v[0]
        delta = character_table(mod.quiver.group).dims
        laws = {
            "idempotent": is_isomorphic(concentrate(con), con),
            "stable": is_stable(con, theta_zero(con.v)),
            "dim0": con.v[0] == n,
            "bound": con.dim_inf <= 1 and all(con.v[i] <= n * delta[i] for i in range(len(delta))),
        }
        violations += [(k, law) for law, good in laws.items() if not good]
    ok = not violations and checked > 0
    record_acceptance(4, ok, f"{checked} theta_0-semistable modules, {len(violations)} violations")
    assert ok, violations[:10]


def test_criterion_5_monad(corpus, record_acceptance):
    start = time.perf_counter()
    pts = sample_points(200, 0) + sample_points(20, 1, at_infinity=True)
    checked, failures = 0, []
    for k, mod in enumerate(corpus):
        if not any(is_stable(mod, t) for t in _thetas(mod).values()):
            continue
        checked += 1
        md = build_monad(quiver_to_adhm(mod))
        if not composite_vanishes(md):
            failures.append((k, "BA"))
            continue
        if not all(monad_fiber_check(md, p, 1e-9) == (True, True) for p in pts):
            failures.append((k, "fiber"))
    elapsed = time.perf_counter() - start
    ok = not failures and checked > 0 and elapsed < 30.0
    record_acceptance(5, ok, f"{checked} stable modules x 220 points, {len(failures)} failures, {elapsed:.1f}s (< 30s)")
    assert ok, failures[:10]


def _simple_datum(m, weights):
    n = len(weights)
    return ADHMDatum(m, tuple(weights), la.zeros(n, n), la.zeros(n, n), la.zeros(n, 0), la.zeros(0, n))


def test_criterion_6_koszul(record_acceptance):
    pts = sample_points(50, 6)
    cases, failures = 0, []
    for m in (2, 3):
        for size in (1, 2, 3):
            for weights in itertools.combinations_with_replacement(range(1, m), size):
                cases += 1
                if not koszul_middle_check(_simple_datum(m, weights), pts):
                    failures.append((m, weights, "koszul"))
        for k in range(1, m):
            cases += 1
            if not invariant_sections_check(_simple_datum(m, [k]), 6):
                failures.append((m, k, "sections"))
    ok = not failures
    record_acceptance(6, ok, f"{cases} simple / summed-simple cases, {len(failures)} failures")
    assert ok, failures


def test_criterion_7_roundtrip(record_acceptance):
    total, bad = 0, []
    for m in (1, 2, 3):
        for ideal in monomial_ideals(m, 6):
            total += 1
            if adhm_to_ideal(ideal_to_adhm(ideal)) != ideal:
                bad.append((m, ideal.generator_strings()))
    orbits, bad_iso = 0, []
    for m in (2, 3):
        for n in (1, 2, 3):
            for seed in range(3):
                orbits += 1
                ideal = points_ideal(distinct_orbit_points(np.random.default_rng(seed), n, m), m)
                if isotypic_decomposition(ideal) != (n,) * m:
                    bad_iso.append((m, n, seed))
    ok = not bad and not bad_iso
    record_acceptance(7, ok, f"{total} monomial ideals roundtrip ({len(bad)} bad), {orbits} orbit ideals isotypic n*delta ({len(bad_iso)} bad)")
    assert ok


def test_criterion_8_dimension_formula(record_acceptance):
    cases = [("A2", r, n) for r in (1, 2) for n in (1, 2, 3)] + [("A3", 1, 1), ("A3", 1, 2)]
    results = {}
    for group, r, n in cases:
        pts = distinct_orbit_points(np.random.default_rng(n), n, int(group[1:]))
        results[(group, r, n)] = tangent_dimension(witness_module(pts, group, r))
    wrong = {k: v for k, v in results.items() if v != 2 * k[1] * k[2]}
    ok = not wrong
    record_acceptance(8, ok, f"{len(cases)} (group, r, n) cases equal 2rn, wrong={wrong}")
    assert ok


def test_criterion_9_d_invariance(record_acceptance):
    pairs = descent_pairs(count=100, seed=0, m=2, max_n=3)
    failures = []
    for k, (a, b) in enumerate(pairs):
        n = a.v[0]
        if not d_invariance_check(a, b):
            failures.append((k, "D"))
            continue
        j = descend_ideal(adhm_to_ideal(quiver_to_adhm(concentrate(b))))
        if colength(j) != n:
            failures.append((k, "colength"))
    ok = len(pairs) >= 100 and not failures
    record_acceptance(9, ok, f"{len(pairs)} pairs over A2 with n <= 3, {len(failures)} failures")
    assert ok, failures[:10]


def _matrix_in_subprocess(workdir: Path, hashseed: str) -> dict:
    env = dict(os.environ, PYTHONHASHSEED=hashseed, PYTHONPATH=SRC)
    proc = subprocess.run([sys.executable, str(TESTS / "cli_matrix.py"), str(workdir)], capture_output=True, text=True, env=env, check=True)
    return json.loads(proc.stdout)


def test_criterion_10_cli_determinism(tmp_path, record_acceptance):
    first = _matrix_in_subprocess(tmp_path, "0")
    second = _matrix_in_subprocess(tmp_path, "4242")
    differing = sorted(k for k in first if first[k] != second.get(k))
    errors = sorted(k for k, (code, _) in first.items() if code == 2)
    ok = not differing and first.keys() == second.keys() and not errors
    record_acceptance(10, ok, f"{len(first)} commands run twice in fresh processes, {len(differing)} differ, {len(errors)} input errors")
    assert ok, (differing[:5], errors[:5])
