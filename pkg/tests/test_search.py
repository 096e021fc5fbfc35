"""The exhaustive search engines, the certificate checker, euler circuits."""

from __future__ import annotations

import random

import pytest
from conftest import brute_circuit_steps, brute_is_hamiltonian, connected_specs

from circham.certs import CircuitCert
from circham.search import (
    BUDGET_EXCEEDED,
    FOUND,
    NONE_EXHAUSTIVE,
    _count_bounds,
    _py_dfs,
    cert_failure,
    enumerate_hamiltonian,
    euler_circuit,
    feasible_counts,
    find_hamiltonian,
    verify_cert,
)
from circham.zmod import CirculantSpec, units


def test_engines_agree_on_frozen_node_counts():
    # Regression anchors: identical trees in both engines.
    for spec, nodes in [
        (CirculantSpec(12, (6, 8, 9)), 395),
        (CirculantSpec(24, (12, 14, 15)), 93_371),
    ]:
        py = find_hamiltonian(spec, engine="python")
        jit = find_hamiltonian(spec, engine="jit")
        assert py.status == jit.status == NONE_EXHAUSTIVE
        assert py.nodes == jit.nodes == nodes, f"{spec}: {py.nodes} vs {jit.nodes}"


def test_engines_agree_on_random_specs():
    rng = random.Random(41)
    for _ in range(25):
        n = rng.randrange(4, 21)
        deg = rng.randrange(1, 4)
        gens = tuple(sorted(rng.sample(range(1, n), min(deg, n - 1))))
        spec = CirculantSpec(n, gens)
        py = find_hamiltonian(spec, engine="python")
        jit = find_hamiltonian(spec, engine="jit")
        assert (py.status, py.nodes) == (jit.status, jit.nodes), f"{spec}"
        if py.status == FOUND:
            assert py.cert == jit.cert


def test_found_certs_verify():
    out = find_hamiltonian(CirculantSpec(12, (2, 3, 9)))
    assert out.status == FOUND
    assert verify_cert(CirculantSpec(12, (2, 3, 9)), out.cert)
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randrange(3, 31)
        gens = tuple(sorted(rng.sample(range(1, n), min(3, n - 1))))
        spec = CirculantSpec(n, gens)
        out = find_hamiltonian(spec)
        if out.status == FOUND:
            assert verify_cert(spec, out.cert), f"bad cert for {spec}"


def test_verdicts_match_brute_force_up_to_n10():
    for outdeg in (1, 2, 3):
        for spec in connected_specs(10, outdeg):
            got = find_hamiltonian(spec, engine="python")
            want = brute_is_hamiltonian(spec)
            assert (got.status == FOUND) == want, f"{spec}: search says {got.status}"


def test_disconnected_is_reported_not_searched():
    out = find_hamiltonian(CirculantSpec(12, (6, 8, 10)))
    assert out.status == NONE_EXHAUSTIVE
    assert out.nodes == 0
    assert "disconnected" in out.note


def test_verdict_is_unit_invariant():
    spec = CirculantSpec(12, (6, 8, 9))
    for x in units(12):
        mult = CirculantSpec(12, tuple(sorted((x * g) % 12 for g in spec.gens)))
        assert find_hamiltonian(mult).status == NONE_EXHAUSTIVE, f"unit {x}"


def test_budget_is_a_distinct_outcome():
    spec = CirculantSpec(12, (6, 8, 9))
    full = find_hamiltonian(spec, engine="python")
    assert full.status == NONE_EXHAUSTIVE and full.nodes == 395
    for engine in ("python", "jit"):
        hit = find_hamiltonian(spec, node_budget=394, engine=engine)
        assert hit.status == BUDGET_EXCEEDED
        assert hit.nodes == 395  # the increment that crossed the line
        ok = find_hamiltonian(spec, node_budget=395, engine=engine)
        assert ok.status == NONE_EXHAUSTIVE
    with pytest.raises(ValueError):
        find_hamiltonian(spec, node_budget=0)


def test_enumerate_matches_permutation_scan():
    for spec in connected_specs(8, 2) + connected_specs(7, 3):
        got = {c.steps for c in enumerate_hamiltonian(spec)}
        want = brute_circuit_steps(spec)
        assert got == want, f"{spec}: {len(got)} vs {len(want)} circuits"


def test_enumerate_respects_limit_and_order():
    spec = CirculantSpec(12, (2, 3, 9))
    all_certs = enumerate_hamiltonian(spec)
    assert len(all_certs) >= 2
    assert enumerate_hamiltonian(spec, limit=2) == all_certs[:2]
    for cert in all_certs:
        assert verify_cert(spec, cert)
    with pytest.raises(ValueError):
        enumerate_hamiltonian(CirculantSpec(12, (6, 8, 10)))


def test_pruning_does_not_change_enumeration():
    rng = random.Random(13)
    for _ in range(15):
        n = rng.randrange(4, 15)
        gens = tuple(sorted(rng.sample(range(1, n), min(rng.randrange(1, 4), n - 1))))
        lo, hi = _count_bounds(n, gens)
        _, pruned, _ = _py_dfs(n, gens, lo, hi, None, None)
        _, plain, _ = _py_dfs(
            n, gens, lo, hi, None, None, use_count_prune=False, use_degree_prune=False
        )
        assert pruned == plain, f"pruning changed circuits of Cay(Z_{n}; {gens})"


def test_feasible_counts_examples_and_law():
    fc = feasible_counts(CirculantSpec(12, (2, 3, 8)))
    assert (3, 6, 3) in fc.triples
    assert (0, 12, 0) in fc.triples
    spec = CirculantSpec(12, (2, 3, 8))
    brute = {
        (r, s, t)
        for r in range(13)
        for s in range(13 - r)
        for t in [12 - r - s]
        if (2 * r + 3 * s + 8 * t) % 12 == 0
    }
    assert fc.triples == brute
    for r, s, t in fc.triples:
        assert r + s + t == 12
    with pytest.raises(ValueError):
        feasible_counts(CirculantSpec(12, (2, 3)))


def test_found_cert_counts_are_feasible():
    rng = random.Random(77)
    checked = 0
    for _ in range(40):
        n = rng.randrange(4, 25)
        gens = tuple(sorted(rng.sample(range(1, n), min(3, n - 1))))
        spec = CirculantSpec(n, gens)
        out = find_hamiltonian(spec)
        if out.status != FOUND or spec.outdegree != 3:
            continue
        counts = tuple(out.cert.steps.count(g) for g in spec.gens)
        assert counts in feasible_counts(spec).triples
        checked += 1
    assert checked > 5


def _euler_walk_is_valid(k: int, a: int, b: int, steps: list[int]) -> bool:
    if len(steps) != 2 * k:
        return False
    multiset: dict[tuple[int, int], int] = {}
    for v in range(k):
        for lab in (a % k, b % k):
            multiset[(v, lab)] = multiset.get((v, lab), 0) + 1
    v = 0
    for s in steps:
        if multiset.get((v, s), 0) == 0:
            return False
        multiset[(v, s)] -= 1
        v = (v + s) % k
    return v == 0 and all(c == 0 for c in multiset.values())


def test_euler_circuit_examples():
    assert _euler_walk_is_valid(6, 2, 3, euler_circuit(6, 2, 3))
    assert _euler_walk_is_valid(3, 1, 2, euler_circuit(3, 1, 2))
    assert euler_circuit(1, 0, 0) == [0, 0]
    assert _euler_walk_is_valid(3, 3, 1, euler_circuit(3, 3, 1))  # loop arcs
    assert _euler_walk_is_valid(5, 2, 2, euler_circuit(5, 2, 2))  # parallel arcs
    with pytest.raises(ValueError):
        euler_circuit(6, 2, 4)
    with pytest.raises(ValueError):
        euler_circuit(6, 0, 3)


def test_euler_circuit_random():
    rng = random.Random(3)
    done = 0
    while done < 60:
        k = rng.randrange(1, 41)
        a, b = rng.randrange(k + 1), rng.randrange(k + 1)
        try:
            steps = euler_circuit(k, a, b)
        except ValueError:
            continue
        assert _euler_walk_is_valid(k, a, b, steps), f"(k,a,b)=({k},{a},{b})"
        done += 1


def test_cert_failure_reasons():
    spec = CirculantSpec(12, (2, 3, 9))
    good = find_hamiltonian(spec).cert
    assert cert_failure(spec, good) is None
    assert "steps" in cert_failure(spec, CircuitCert(0, good.steps[:-1]))
    bad_gen = CircuitCert(0, good.steps[:-1] + (5,))
    assert "not a generator" in cert_failure(spec, bad_gen)
    revisit = CircuitCert(0, (2, 3, 9, 2, 2, 2, 2, 2, 2, 2, 2, 2))
    assert "revisited" in cert_failure(spec, revisit)
    # a circuit starting anywhere is accepted; start is reduced mod n
    shifted = CircuitCert(12 + good.steps[0], good.steps[1:] + good.steps[:1])
    assert cert_failure(spec, shifted) is None
