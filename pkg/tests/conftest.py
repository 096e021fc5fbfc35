"""Shared oracles for the test suite.

The helpers here deliberately avoid the package's own search machinery:
brute-force hamiltonicity via permutations / subset DP is the independent
check that the DFS engines are measured against.
"""

from __future__ import annotations

from itertools import permutations
from math import gcd

from circham.zmod import CirculantSpec


def connected_specs(n_max: int, outdeg: int, n_min: int = 2) -> list[CirculantSpec]:
    """Every connected spec with the given outdegree and n <= n_max."""
    from itertools import combinations

    out = []
    for n in range(n_min, n_max + 1):
        for gens in combinations(range(1, n), outdeg):
            if gcd(n, *gens) == 1:
                out.append(CirculantSpec(n, gens))
    return out


def brute_circuit_steps(spec: CirculantSpec) -> set[tuple[int, ...]]:
    """All hamiltonian circuits through 0, by raw permutation scan.

    Only sane for n <= 8 or so.  Returns step tuples (generator values).
    """
    n = spec.n
    gset = set(spec.gens)
    found = set()
    for perm in permutations(range(1, n)):
        walk = (0,) + perm
        steps = []
        ok = True
        for i in range(n):
            s = (walk[(i + 1) % n] - walk[i]) % n
            if s not in gset:
                ok = False
                break
            steps.append(s)
        if ok:
            found.add(tuple(steps))
    return found


def all_one_factors(spec: CirculantSpec) -> list[tuple[int, ...]]:
    """Every one-factor of the spec, as travel tuples (generator indices).

    Vertex-by-vertex DFS with used-target pruning; fine up to n ~ 16 at
    outdegree 3.
    """
    n, gens = spec.n, spec.gens
    m = len(gens)
    travel = [0] * n
    used = bytearray(n)
    out: list[tuple[int, ...]] = []

    def rec(v: int) -> None:
        if v == n:
            out.append(tuple(travel))
            return
        for gi in range(m):
            w = (v + gens[gi]) % n
            if not used[w]:
                used[w] = 1
                travel[v] = gi
                rec(v + 1)
                used[w] = 0

    rec(0)
    return out


def random_factor(spec: CirculantSpec, rng) -> tuple[int, ...]:
    """A random one-factor via randomized augmenting-path matching.

    Kuhn's algorithm with shuffled vertex and generator orders: polynomial,
    and one always exists (v -> v + g is a permutation for any fixed g).
    """
    n, gens = spec.n, spec.gens
    m = len(gens)
    frm = [-1] * n  # frm[w] = vertex currently matched into target w

    def augment(v: int, seen: bytearray) -> bool:
        for gi in rng.sample(range(m), m):
            w = (v + gens[gi]) % n
            if seen[w]:
                continue
            seen[w] = 1
            if frm[w] == -1 or augment(frm[w], seen):
                frm[w] = v
                return True
        return False

    for v in rng.sample(range(n), n):
        if not augment(v, bytearray(n)):
            raise AssertionError(f"matching failed for {spec}")
    gi_of = {g: i for i, g in enumerate(gens)}
    travel = [0] * n
    for w, v in enumerate(frm):
        travel[v] = gi_of[(w - v) % n]
    return tuple(travel)


def brute_is_hamiltonian(spec: CirculantSpec) -> bool:
    """Subset-DP hamiltonicity, independent of the DFS engines.

    dp maps a visited-set bitmask to the set of reachable endpoints for
    paths starting at 0; a circuit exists iff some full-mask endpoint has
    an arc back to 0.  Fine up to n ~ 16.
    """
    n = spec.n
    succ = [[(v + g) % n for g in spec.gens] for v in range(n)]
    full = (1 << n) - 1
    dp: dict[int, set[int]] = {1: {0}}
    frontier = [1]
    while frontier:
        nxt_frontier: dict[int, set[int]] = {}
        for mask in frontier:
            for v in dp[mask]:
                for w in succ[v]:
                    bit = 1 << w
                    if mask & bit:
                        continue
                    nxt_frontier.setdefault(mask | bit, set()).add(w)
        for mask, ends in nxt_frontier.items():
            dp.setdefault(mask, set()).update(ends)
        frontier = list(nxt_frontier)
    if full not in dp:
        return False
    gset = set(spec.gens)
    return any((-v) % n in gset for v in dp[full])
