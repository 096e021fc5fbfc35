"""Exhaustive hamiltonian-circuit search plus the pure certificate checker.

The search is a depth-first enumeration of paths anchored at vertex 0 with
two sound prunes: per-generator step-count bounds derived from the closing
congruence (a circuit taking r_i steps by generator g_i needs sum r_i = n and
sum r_i g_i = 0 mod n), and in/out-degree availability counts that detect
stranded vertices early.  A numba-compiled core handles census-scale
instances; a pure-python twin with identical branch order backs circuit
enumeration and cross-validation of the compiled core.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .certs import CircuitCert
from .errors import ContractViolationError
from .zmod import CirculantSpec, is_connected

FOUND = "found"
NONE_EXHAUSTIVE = "none_exhaustive"
BUDGET_EXCEEDED = "budget_exceeded"

# Count-bound precomputation is worth it only when the vector enumeration is
# cheap relative to the search itself.
_BOUNDS_MAX_OUTDEG = 4
_BOUNDS_MAX_N = 600

_UNLIMITED = 1 << 62


@dataclass(frozen=True)
class SearchOutcome:
    """Result of an exhaustive search: verdict, optional cert, node count."""

    status: str
    cert: CircuitCert | None
    nodes: int
    note: str | None = None


@dataclass(frozen=True)
class FeasibleCounts:
    """All (r_1, r_2, r_3) step-count triples a circuit could use."""

    spec: CirculantSpec
    triples: frozenset[tuple[int, int, int]]


def _feasible_vectors(n: int, gens: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Nonnegative vectors r with sum r_i = n and sum r_i g_i = 0 mod n."""
    m = len(gens)
    out: list[tuple[int, ...]] = []

    def rec(i: int, left: int, wsum: int, acc: list[int]) -> None:
        if i == m - 1:
            if (wsum + left * gens[i]) % n == 0:
                out.append(tuple(acc) + (left,))
            return
        for c in range(left + 1):
            acc.append(c)
            rec(i + 1, left - c, wsum + c * gens[i], acc)
            acc.pop()

    rec(0, n, 0, [])
    return out


def feasible_counts(spec: CirculantSpec) -> FeasibleCounts:
    """Solve the closing congruence for an outdegree-3 spec."""
    if spec.outdegree != 3:
        raise ValueError(f"feasible_counts needs outdegree 3, got {spec.outdegree}")
    vecs = _feasible_vectors(spec.n, spec.gens)
    return FeasibleCounts(spec, frozenset(vecs))  # type: ignore[arg-type]


def _count_bounds(n: int, gens: tuple[int, ...]) -> tuple[list[int], list[int]]:
    """Per-generator min/max step counts over the feasible vectors.

    The vector (n, 0, ..., 0) is always feasible, so the set is never empty.
    Falls back to trivial bounds when enumeration would cost more than it
    saves.
    """
    m = len(gens)
    if m > _BOUNDS_MAX_OUTDEG or n > _BOUNDS_MAX_N:
        return [0] * m, [n] * m
    vecs = _feasible_vectors(n, gens)
    lo = [min(v[i] for v in vecs) for i in range(m)]
    hi = [max(v[i] for v in vecs) for i in range(m)]
    return lo, hi


def _close_gi(n: int, gens: tuple[int, ...]) -> list[int]:
    """close_gi[v] = index of the generator closing v -> 0, or -1."""
    gi_of = {g: i for i, g in enumerate(gens)}
    return [gi_of.get((-v) % n, -1) for v in range(n)]


def _py_dfs(
    n: int,
    gens: tuple[int, ...],
    lo: list[int],
    hi: list[int],
    budget: int | None,
    limit: int | None,
    use_count_prune: bool = True,
    use_degree_prune: bool = True,
) -> tuple[int, list[tuple[int, ...]], int]:
    """Reference DFS.  Returns (status, step tuples, nodes expanded).

    status: 1 at least one circuit recorded, 0 exhausted with none,
    -1 budget hit.  Branch order is ascending generator index at every
    depth, so output order and node counts are deterministic.  The numba
    core must stay in lockstep with this function.
    """
    m = len(gens)
    succ = [[(v + g) % n for g in gens] for v in range(n)]
    pred = [[(v - g) % n for g in gens] for v in range(n)]
    close_gi = _close_gi(n, gens)

    visited = bytearray(n)
    visited[0] = 1
    # pred_avail[w]: arcs into w from vertices that can still spend one
    # (unvisited, or the path head).  Vertex 0 keeps its counter alive for
    # the closing arc.  succ_avail[u]: arcs out of u toward unvisited
    # vertices or 0.
    pred_avail = [m] * n
    succ_avail = [m] * n
    used = [0] * m
    cur_stack = [0] * n
    applied = [0] * n
    gi_next = [0] * n
    depth = 0
    nodes = 1
    certs: list[tuple[int, ...]] = []
    if budget is not None and nodes > budget:
        return -1, certs, nodes

    while True:
        cur = cur_stack[depth]
        advanced = False
        if depth == n - 1:
            cgi = close_gi[cur]
            if cgi >= 0:
                steps = tuple(gens[applied[d]] for d in range(1, n)) + (gens[cgi],)
                certs.append(steps)
                if limit is not None and len(certs) >= limit:
                    return 1, certs, nodes
        else:
            while gi_next[depth] < m:
                gi = gi_next[depth]
                gi_next[depth] += 1
                w = succ[cur][gi]
                if visited[w]:
                    continue
                if use_count_prune and used[gi] + 1 > hi[gi]:
                    continue
                visited[w] = 1
                used[gi] += 1
                dead = False
                if use_degree_prune:
                    for j in range(m):
                        t = succ[cur][j]
                        if t != w and (not visited[t] or t == 0):
                            pred_avail[t] -= 1
                            if pred_avail[t] == 0:
                                dead = True
                    for j in range(m):
                        u = pred[w][j]
                        if u != cur and not visited[u]:
                            succ_avail[u] -= 1
                            if succ_avail[u] == 0:
                                dead = True
                if use_count_prune and not dead:
                    rem = n - (depth + 1)
                    for j in range(m):
                        if used[j] + rem < lo[j]:
                            dead = True
                            break
                if dead:
                    if use_degree_prune:
                        for j in range(m):
                            t = succ[cur][j]
                            if t != w and (not visited[t] or t == 0):
                                pred_avail[t] += 1
                        for j in range(m):
                            u = pred[w][j]
                            if u != cur and not visited[u]:
                                succ_avail[u] += 1
                    visited[w] = 0
                    used[gi] -= 1
                    continue
                nodes += 1
                if budget is not None and nodes > budget:
                    return -1, certs, nodes
                depth += 1
                cur_stack[depth] = w
                applied[depth] = gi
                gi_next[depth] = 0
                advanced = True
                break
        if advanced:
            continue
        if depth == 0:
            return (1 if certs else 0), certs, nodes
        w = cur_stack[depth]
        gi = applied[depth]
        depth -= 1
        cur = cur_stack[depth]
        if use_degree_prune:
            for j in range(m):
                t = succ[cur][j]
                if t != w and (not visited[t] or t == 0):
                    pred_avail[t] += 1
            for j in range(m):
                u = pred[w][j]
                if u != cur and not visited[u]:
                    succ_avail[u] += 1
        visited[w] = 0
        used[gi] -= 1


_JIT_CORE = None
_JIT_UNAVAILABLE = False


def _get_jit_core():
    """Build (once) the numba twin of _py_dfs, or None if numba is missing."""
    global _JIT_CORE, _JIT_UNAVAILABLE
    if _JIT_CORE is not None or _JIT_UNAVAILABLE:
        return _JIT_CORE
    try:
        import numpy as np
        from numba import njit
    except ImportError:
        _JIT_UNAVAILABLE = True
        return None

    @njit(cache=True)
    def core(n, m, succ, pred, close_gi, lo, hi, budget, out_gis):  # pragma: no cover
        visited = np.zeros(n, dtype=np.uint8)
        visited[0] = 1
        pred_avail = np.full(n, m, dtype=np.int64)
        succ_avail = np.full(n, m, dtype=np.int64)
        used = np.zeros(m, dtype=np.int64)
        cur_stack = np.zeros(n, dtype=np.int64)
        applied = np.zeros(n, dtype=np.int64)
        gi_next = np.zeros(n, dtype=np.int64)
        depth = 0
        nodes = 1
        if nodes > budget:
            return -1, nodes

        while True:
            cur = cur_stack[depth]
            advanced = False
            if depth == n - 1:
                cgi = close_gi[cur]
                if cgi >= 0:
                    for d in range(1, n):
                        out_gis[d - 1] = applied[d]
                    out_gis[n - 1] = cgi
                    return 1, nodes
            else:
                while gi_next[depth] < m:
                    gi = gi_next[depth]
                    gi_next[depth] += 1
                    w = succ[cur, gi]
                    if visited[w] == 1:
                        continue
                    if used[gi] + 1 > hi[gi]:
                        continue
                    visited[w] = 1
                    used[gi] += 1
                    dead = False
                    for j in range(m):
                        t = succ[cur, j]
                        if t != w and (visited[t] == 0 or t == 0):
                            pred_avail[t] -= 1
                            if pred_avail[t] == 0:
                                dead = True
                    for j in range(m):
                        u = pred[w, j]
                        if u != cur and visited[u] == 0:
                            succ_avail[u] -= 1
                            if succ_avail[u] == 0:
                                dead = True
                    if not dead:
                        rem = n - (depth + 1)
                        for j in range(m):
                            if used[j] + rem < lo[j]:
                                dead = True
                                break
                    if dead:
                        for j in range(m):
                            t = succ[cur, j]
                            if t != w and (visited[t] == 0 or t == 0):
                                pred_avail[t] += 1
                        for j in range(m):
                            u = pred[w, j]
                            if u != cur and visited[u] == 0:
                                succ_avail[u] += 1
                        visited[w] = 0
                        used[gi] -= 1
                        continue
                    nodes += 1
                    if nodes > budget:
                        return -1, nodes
                    depth += 1
                    cur_stack[depth] = w
                    applied[depth] = gi
                    gi_next[depth] = 0
                    advanced = True
                    break
            if advanced:
                continue
            if depth == 0:
                return 0, nodes
            w = cur_stack[depth]
            gi = applied[depth]
            depth -= 1
            cur = cur_stack[depth]
            for j in range(m):
                t = succ[cur, j]
                if t != w and (visited[t] == 0 or t == 0):
                    pred_avail[t] += 1
            for j in range(m):
                u = pred[w, j]
                if u != cur and visited[u] == 0:
                    succ_avail[u] += 1
            visited[w] = 0
            used[gi] -= 1

    _JIT_CORE = core
    return core


def _run_jit(
    n: int,
    gens: tuple[int, ...],
    lo: list[int],
    hi: list[int],
    budget: int | None,
) -> tuple[int, list[tuple[int, ...]], int]:
    import numpy as np

    core = _get_jit_core()
    if core is None:
        raise RuntimeError("numba is not available; use engine='python'")
    m = len(gens)
    succ = np.array([[(v + g) % n for g in gens] for v in range(n)], dtype=np.int64)
    pred = np.array([[(v - g) % n for g in gens] for v in range(n)], dtype=np.int64)
    close_gi = np.array(_close_gi(n, gens), dtype=np.int64)
    out_gis = np.zeros(n, dtype=np.int64)
    status, nodes = core(
        n,
        m,
        succ,
        pred,
        close_gi,
        np.array(lo, dtype=np.int64),
        np.array(hi, dtype=np.int64),
        _UNLIMITED if budget is None else budget,
        out_gis,
    )
    certs = []
    if status == 1:
        certs.append(tuple(gens[gi] for gi in out_gis))
    return int(status), certs, int(nodes)


def find_hamiltonian(
    spec: CirculantSpec,
    node_budget: int | None = None,
    engine: str = "auto",
) -> SearchOutcome:
    """Search Cay(Z_n; A) exhaustively for a hamiltonian circuit.

    Anchoring at vertex 0 loses nothing (every circuit passes through 0).
    Disconnected specs short-circuit to none_exhaustive with a note.  The
    budget bounds expanded nodes; exceeding it is a distinct outcome, never
    silently treated as a verdict.
    """
    if node_budget is not None and node_budget < 1:
        raise ValueError(f"node budget must be positive, got {node_budget}")
    if engine not in ("auto", "jit", "python"):
        raise ValueError(f"unknown engine {engine!r}")
    if not is_connected(spec):
        g = gcd(spec.n, *spec.gens)
        return SearchOutcome(
            NONE_EXHAUSTIVE, None, 0, note=f"disconnected: gcd(n, gens) = {g}"
        )
    n, gens = spec.n, spec.gens
    lo, hi = _count_bounds(n, gens)
    if engine == "auto":
        engine = "jit" if _get_jit_core() is not None else "python"
    if engine == "jit":
        status, certs, nodes = _run_jit(n, gens, lo, hi, node_budget)
    else:
        status, certs, nodes = _py_dfs(n, gens, lo, hi, node_budget, limit=1)
    if status == -1:
        return SearchOutcome(BUDGET_EXCEEDED, None, nodes)
    if status == 0:
        return SearchOutcome(NONE_EXHAUSTIVE, None, nodes)
    cert = CircuitCert(start=0, steps=certs[0])
    reason = cert_failure(spec, cert)
    if reason is not None:
        raise ContractViolationError(f"search produced an invalid cert for {spec}: {reason}")
    return SearchOutcome(FOUND, cert, nodes)


def enumerate_hamiltonian(
    spec: CirculantSpec, limit: int | None = None
) -> list[CircuitCert]:
    """All hamiltonian circuits through vertex 0, in deterministic DFS order.

    Intended for small n; the census never calls this.
    """
    if not is_connected(spec):
        raise ValueError(f"{spec} is disconnected")
    if limit is not None and limit < 1:
        raise ValueError(f"limit must be positive, got {limit}")
    lo, hi = _count_bounds(spec.n, spec.gens)
    _, steps_list, _ = _py_dfs(spec.n, spec.gens, lo, hi, None, limit)
    certs = [CircuitCert(start=0, steps=s) for s in steps_list]
    for cert in certs:
        reason = cert_failure(spec, cert)
        if reason is not None:
            raise ContractViolationError(
                f"enumeration produced an invalid cert for {spec}: {reason}"
            )
    return certs


def euler_circuit(k: int, a: int, b: int) -> list[int]:
    """Euler circuit of the multidigraph Cay(Z_k; (a, b)), as steps from 0.

    Every vertex has in- and out-degree 2, so a circuit exists exactly when
    the multigraph is connected: gcd(a, b, k) = 1.  Loops (k divides a
    generator) and parallel arcs (a = b mod k) are legal.  Returns the 2k
    step values mod k in traversal order.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    aa, bb = a % k, b % k
    if gcd(aa, bb, k) != 1:
        raise ValueError(f"Cay(Z_{k}; {a}, {b}) is disconnected")
    adj = [[((v + aa) % k, aa), ((v + bb) % k, bb)] for v in range(k)]
    ptr = [0] * k
    stack: list[tuple[int, int]] = [(0, -1)]
    out: list[int] = []
    while stack:
        v, lab_in = stack[-1]
        if ptr[v] < 2:
            tgt, lab = adj[v][ptr[v]]
            ptr[v] += 1
            stack.append((tgt, lab))
        else:
            stack.pop()
            if lab_in >= 0:
                out.append(lab_in)
    if len(out) != 2 * k:
        raise ContractViolationError(
            f"euler circuit covered {len(out)} of {2 * k} arcs in Cay(Z_{k}; {a}, {b})"
        )
    out.reverse()
    return out


def cert_failure(spec: CirculantSpec, cert: CircuitCert) -> str | None:
    """Why a cert is invalid for the spec, or None if it verifies.

    Pure modular arithmetic, independent of every construction above: this
    is the acceptance oracle for all certificate-producing code.
    """
    n = spec.n
    if len(cert.steps) != n:
        return f"expected {n} steps, got {len(cert.steps)}"
    gset = set(spec.gens)
    start = cert.start % n
    v = start
    seen = bytearray(n)
    seen[v] = 1
    for i, s in enumerate(cert.steps):
        if s not in gset:
            return f"step {i} value {s} is not a generator of {spec}"
        v = (v + s) % n
        if i < n - 1:
            if seen[v]:
                return f"vertex {v} revisited after step {i}"
            seen[v] = 1
    if v != start:
        return f"walk ends at {v}, not at start {start}"
    return None


def verify_cert(spec: CirculantSpec, cert: CircuitCert) -> bool:
    """True iff the cert is a hamiltonian circuit of Cay(Z_n; A)."""
    return cert_failure(spec, cert) is None
