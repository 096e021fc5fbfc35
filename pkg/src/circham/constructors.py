"""Explicit hamiltonian-circuit builders.

Everything here is constructive: given a spec that the criteria module
declares hamiltonian, these functions produce a concrete CircuitCert, built
by one-factor surgery rather than search.  The outdegree-3 half-spec family
splits into four cases keyed on which gcd degenerates; outdegree >= 4 is
handled by finding a decidable 3-generator subset and lifting or reusing its
circuit.

Schedules that the theory guarantees must never fail here; when one does,
that is a transcription error in this module and it raises
ContractViolationError loudly instead of falling back to search.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd
from time import perf_counter

from .certs import (
    HAMILTONIAN,
    NON_HAMILTONIAN,
    UNKNOWN,
    CircuitCert,
    Classification,
)
from .criteria import CONG_3A_2B, cor14_nonham, curran_witte_sufficient, thm46_ham_bullet
from .errors import ContractViolationError
from .factors import (
    OneFactor,
    cert_from_factor,
    components,
    is_in_class_e,
    lemma45_merge,
    rotate3,
    shift_travel,
    swap_in_arcs,
)
from .search import (
    BUDGET_EXCEEDED,
    FOUND,
    NONE_EXHAUSTIVE,
    cert_failure,
    euler_circuit,
    find_hamiltonian,
)
from .zmod import (
    CirculantSpec,
    HalfSpec,
    canonical_form,
    element_order,
    half_spec_match,
    is_connected,
)

ODD_D = "odd-d"
EVEN_D = "even-d"


@dataclass(frozen=True)
class CosetCoords:
    """Base-point coordinates v = x*a + y*b (+ z*k), one triple per vertex.

    Odd d (the order of a mod 2k): x < d, y < k/d, z in {0,1}.  Even d:
    x < d, y < 2k/d, no z.  Built by enumeration with the bijectivity of the
    representation asserted at construction time.
    """

    case_tag: str
    d: int
    x: tuple[int, ...]
    y: tuple[int, ...]
    z: tuple[int, ...] | None


def h0_build(h: HalfSpec) -> tuple[OneFactor, CosetCoords]:
    """The base one-factor that every amalgamation schedule starts from.

    The travel rule reads off the coordinates: odd d sends v by a when
    z_v = 0, by b when z_v = 1 = z_{v+b}, else by b+k; even d sends v by a
    when x_v < d/2, by b+k when x_v >= d/2 and 1 <= x_{v+b} <= d/2, else by
    b.  The result is always in class E.
    """
    if gcd(h.a, h.b, h.k) != 1:
        raise ValueError(f"gcd(a, b, k) != 1 for {h}: disconnected")
    n, k, a, b = h.n, h.k, h.a, h.b
    d = element_order(n, a)
    rep: dict[int, tuple[int, int, int]] = {}
    if d % 2:
        for x in range(d):
            for y in range(k // d):
                for z in (0, 1):
                    v = (x * a + y * b + z * k) % n
                    if v in rep:
                        raise ContractViolationError(
                            f"coordinate collision at vertex {v} for {h}"
                        )
                    rep[v] = (x, y, z)
    else:
        for x in range(d):
            for y in range(2 * k // d):
                v = (x * a + y * b) % n
                if v in rep:
                    raise ContractViolationError(
                        f"coordinate collision at vertex {v} for {h}"
                    )
                rep[v] = (x, y, 0)
    if len(rep) != n:
        raise ContractViolationError(f"coordinates cover {len(rep)} of {n} vertices")
    xs = tuple(rep[v][0] for v in range(n))
    ys = tuple(rep[v][1] for v in range(n))
    gi_of = {g: i for i, g in enumerate(h.spec.gens)}
    travel = [0] * n
    if d % 2:
        zs = tuple(rep[v][2] for v in range(n))
        coords = CosetCoords(case_tag=ODD_D, d=d, x=xs, y=ys, z=zs)
        for v in range(n):
            if zs[v] == 0:
                travel[v] = gi_of[a]
            elif zs[(v + b) % n] == 1:
                travel[v] = gi_of[b]
            else:
                travel[v] = gi_of[h.b_partner]
    else:
        coords = CosetCoords(case_tag=EVEN_D, d=d, x=xs, y=ys, z=None)
        half = d // 2
        for v in range(n):
            if xs[v] < half:
                travel[v] = gi_of[a]
            elif 1 <= xs[(v + b) % n] <= half:
                travel[v] = gi_of[h.b_partner]
            else:
                travel[v] = gi_of[b]
    H = OneFactor(h.spec, tuple(travel))
    if not is_in_class_e(H, h):
        raise ContractViolationError(f"base factor for {h} left class E")
    return H, coords


def lemma44_parity(h: HalfSpec) -> bool:
    """True exactly when the base factor has an odd number of components."""
    if gcd(h.a, h.b, h.k) != 1:
        raise ValueError(f"gcd(a, b, k) != 1 for {h}: disconnected")
    a_even, b_even, k_even = h.a % 2 == 0, h.b % 2 == 0, h.k % 2 == 0
    return (a_even and k_even) or (not a_even and not (b_even and k_even))


def build_cyclic(n: int, g: int) -> CircuitCert:
    """n steps by a unit generator."""
    if n < 2:
        raise ValueError(f"modulus must be at least 2, got {n}")
    g %= n
    if gcd(g, n) != 1:
        raise ValueError(f"gcd({g}, {n}) = {gcd(g, n)} != 1: not a unit")
    return CircuitCert(start=0, steps=(g,) * n)


# Case 3: gcd(a - b, k) = e != 1.  Work in the family where the a-travelers
# form a transversal of the k-pairs inside S = <e> in Z_2k and every vertex
# outside S travels by b or b+k; rewire until one component remains.


def _case3_initial(h: HalfSpec) -> OneFactor:
    n, k, a, b = h.n, h.k, h.a, h.b
    e = gcd(a - b, k)
    gi_of = {g: i for i, g in enumerate(h.spec.gens)}
    travel: list[int | None] = [None] * n
    # one a-traveler per S-pair {s, s+k}: the representative below k
    a_land: dict[int, int] = {}
    for s in range(0, k, e):
        travel[s] = gi_of[a]
        t = (s + a) % n
        a_land[t % k] = t
    for c in range(k):
        if c % e == 0:
            # the pair's other member sends the forced b-type arc
            u = c + k
            tc = (c + b) % k
            target = tc + k if a_land[tc] == tc else tc
            travel[u] = gi_of[(target - u) % n]
        else:
            # both members travel b-type, low half to low half
            tc = (c + b) % k
            travel[c] = gi_of[(tc - c) % n]
            travel[c + k] = gi_of[(tc + k - (c + k)) % n]
    assert all(t is not None for t in travel)
    return OneFactor(h.spec, tuple(travel))  # type: ignore[arg-type]


def _case3_pass(h: HalfSpec, H: OneFactor, label: list[int]) -> OneFactor:
    """One descent step: pick u in S whose pair or (a-b)-shift is split
    across components, then swap and/or rotate so the count strictly drops."""
    n, k, a, b = h.n, h.k, h.a, h.b
    e = gcd(a - b, k)
    u_sel = None
    for s in range(0, n, e):
        if label[s] != label[(s + k) % n]:
            u_sel = s
            break
    if u_sel is None:
        diff = (a - b) % n
        for s in range(0, n, e):
            if label[s] != label[(s + diff) % n]:
                u_sel = s
                break
    if u_sel is None:
        raise ContractViolationError(
            f"descent stalled for {h}: no split pair or split (a-b)-shift in S"
        )
    p = u_sel % k
    a_members = [v for v in (p, p + k) if H.gen_value(v) == a]
    if len(a_members) != 1:
        raise ContractViolationError(f"pair {{{p}, {p + k}}} lost its a-traveler")
    u1 = a_members[0]
    u2 = (u1 + k) % n
    v3 = (u1 + a + k) % n
    pred = H.pred_list()
    u3 = pred[v3]
    if len({label[u1], label[u2], label[u3]}) == 3:
        return rotate3(H, u1, u2, u3)[0]
    if len({label[u1], label[u2], label[u3]}) == 1:
        raise ContractViolationError(f"rotation triple at {u1} on a single component")
    # two components: exchange the in-arcs of u1 and u2 first
    w1, w2 = pred[u1], pred[u2]
    if w2 != (w1 + k) % n:
        if w1 == (w2 + k) % n:
            w1, w2 = w2, w1
        else:
            raise ContractViolationError(f"in-arcs of pair at {u1} are not a k-pair")
    H = swap_in_arcs(H, w1, w2)
    _, lab2 = components(H)
    spread = len({lab2[u1], lab2[u2], lab2[u3]})
    if spread == 3:
        return rotate3(H, u1, u2, u3)[0]
    if spread == 1:
        return H  # the swap alone merged the split pair
    raise ContractViolationError(f"swap at {w1} left the triple on two components")


def build_case3(h: HalfSpec) -> CircuitCert:
    """Descent construction for gcd(a-b, k) != 1."""
    if gcd(h.a, h.b, h.k) != 1:
        raise ValueError(f"gcd(a, b, k) != 1 for {h}: disconnected")
    if gcd(h.a - h.b, h.k) == 1:
        raise ValueError(f"gcd(a-b, k) = 1 for {h}: not the descent case")
    H = _case3_initial(h)
    count, label = components(H)
    for _ in range(count):
        if count == 1:
            break
        H = _case3_pass(h, H, label)
        new_count, label = components(H)
        if new_count >= count:
            raise ContractViolationError(
                f"descent pass did not reduce components ({count} -> {new_count})"
            )
        count = new_count
    if count != 1:
        raise ContractViolationError(f"descent for {h} stopped at {count} components")
    return cert_from_factor(H)


# Case 4: gcd(a, 2k) != 1, gcd(b, k) = g >= 3 odd, gcd(a - b, k) = 1, odd
# base parity.  The base factor is amalgamated by scheduled merges (and, for
# odd d, an explicit six-arc rewiring table) until one component remains.


def _scheduled_merge(h: HalfSpec, H: OneFactor, u: int) -> OneFactor:
    try:
        return lemma45_merge(H, h, u)
    except ValueError as exc:
        raise ContractViolationError(
            f"scheduled merge at u = {u} for {h} is illegal: {exc}"
        ) from exc


def _table_step(h: HalfSpec, H: OneFactor, i: int) -> OneFactor:
    """Absorb the two a-circuits at coordinate rows y = 2i-2 and y = 2i-1.

    One travel shift per row, at the row representative u = y*b.  Each
    shift replaces three arcs (u's a-arc, the arc leaving u + k, and the
    arc entering u + a + k, wherever it currently starts); the two shifts
    together are the six-arc rewiring that hooks both circuits onto the
    growing component.  Addressing the entering arc by its endpoint
    matters at i = 2: the opening merge already moved the arc into
    a + 2b + k so its source is a + b, one short of the generic pattern.
    """
    n, k, b = h.n, h.k, h.b
    d = n // gcd(h.a, n)
    count, _ = components(H)
    # the arc freed at (2i-1)b + k must land on the next row's pair
    v = H.succ(((2 * i - 1) * b + k) % n)
    if i < k // (2 * d):
        allowed = ((2 * i * b + k) % n,)
    else:
        allowed = ((2 * i * b) % n, (2 * i * b + k) % n)
    if v not in allowed:
        raise ContractViolationError(
            f"table step {i} for {h}: freed landing {v} not in {allowed}"
        )
    for u in (((2 * i - 2) * b) % n, ((2 * i - 1) * b) % n):
        try:
            H = shift_travel(H, h, u)
        except ValueError as exc:
            raise ContractViolationError(
                f"table step {i} for {h}: {exc}"
            ) from exc
    new_count, _ = components(H)
    if new_count != count - 2:
        raise ContractViolationError(
            f"table step {i} for {h} changed components {count} -> {new_count}"
        )
    return H


def build_case4(h: HalfSpec) -> CircuitCert:
    """Amalgamation schedule for the doubly degenerate hamiltonian case."""
    n, k, a, b = h.n, h.k, h.a, h.b
    g = gcd(b, k)
    if gcd(a, b, k) != 1:
        raise ValueError(f"gcd(a, b, k) != 1 for {h}: disconnected")
    if not lemma44_parity(h):
        raise ValueError(f"{h} has an even base parity: not hamiltonian this way")
    if gcd(a, n) == 1:
        raise ValueError(f"gcd(a, 2k) = 1 for {h}: the cyclic case applies")
    if g == 1:
        raise ValueError(f"gcd(b, k) = 1 for {h}: the cyclic case applies")
    if gcd(a - b, k) != 1:
        raise ValueError(f"gcd(a-b, k) != 1 for {h}: the descent case applies")
    if g % 2 == 0 or g < 3:
        raise ContractViolationError(f"gcd(b, k) = {g} for {h}: expected odd >= 3")
    H, coords = h0_build(h)
    if coords.case_tag == ODD_D:
        d = coords.d
        # the two opening merges are the i = 1 base of the arc table
        H = _scheduled_merge(h, H, 0)
        H = _scheduled_merge(h, H, (a + b) % n)
        for i in range(2, k // (2 * d) + 1):
            H = _table_step(h, H, i)
        for i in range(2, (g - 1) // 2 + 1):
            H = _scheduled_merge(h, H, ((2 * i - 1) * a) % n)
    else:
        for i in range(1, (g - 1) // 2 + 1):
            H = _scheduled_merge(h, H, ((2 * i - 1) * a) % n)
    count, _ = components(H)
    if count != 1:
        raise ContractViolationError(
            f"schedule for {h} ended with {count} components, not 1"
        )
    return cert_from_factor(H)


def thm46_case(h: HalfSpec) -> int:
    """Which constructive case (1-4) handles this hamiltonian half-spec."""
    if thm46_ham_bullet(h) is None:
        raise ValueError(f"{h} is not hamiltonian (or not connected)")
    if gcd(h.a, h.n) == 1:
        return 1
    if gcd(h.b, h.k) == 1:
        return 2
    if gcd(h.a - h.b, h.k) != 1:
        return 3
    return 4


def build_thm46(h: HalfSpec) -> CircuitCert:
    """Dispatch a hamiltonian half-spec to its constructive case."""
    case = thm46_case(h)
    if case == 1:
        return build_cyclic(h.n, h.a)
    if case == 2:
        # gcd(b, k) = 1 makes one of b, b+k a unit mod 2k
        if gcd(h.b, h.n) == 1:
            return build_cyclic(h.n, h.b)
        if gcd(h.b_partner, h.n) == 1:
            return build_cyclic(h.n, h.b_partner)
        raise ContractViolationError(f"neither {h.b} nor {h.b_partner} is a unit mod {h.n}")
    if case == 3:
        return build_case3(h)
    return build_case4(h)


def prop51_case1_circuit(k: int, gens) -> CircuitCert:
    """The explicit circuit on Z_12k through {2, 6k, 6k+2, 6k+3}.

    Every vertex travels by 2 except: vertex 2 by 6k, vertex 6k by 6k+2, and
    vertices 0 and 6k+1 by 6k+3.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    n = 12 * k
    gset = {g % n for g in gens}
    required = (2, 6 * k, 6 * k + 2, 6 * k + 3)
    missing = [g for g in required if g not in gset]
    if missing:
        raise ValueError(f"generators {missing} required mod {n} but absent")
    special = {2: 6 * k, 6 * k: 6 * k + 2, 0: 6 * k + 3, 6 * k + 1: 6 * k + 3}
    steps = []
    seen = bytearray(n)
    v = 0
    for _ in range(n):
        seen[v] = 1
        s = special.get(v, 2)
        steps.append(s)
        v = (v + s) % n
        if seen[v] and v != 0:
            raise ContractViolationError(f"trace revisited vertex {v} on Z_{n}")
    if v != 0:
        raise ContractViolationError(f"trace ended at {v}, not at the start")
    return CircuitCert(start=0, steps=tuple(steps))


def euler_lift(k: int, a: int, b: int, gens) -> CircuitCert:
    """Lift an Euler circuit of Cay(Z_k; a, b) to a hamiltonian circuit mod 2k.

    The quotient circuit passes each residue class twice; the lift lands each
    step on the not-yet-visited vertex of the target class, which forces the
    second entries and the final return to the start.
    """
    n = 2 * k
    gset = {g % n for g in gens}
    required = sorted({a % n, (a + k) % n, b % n, (b + k) % n})
    missing = [g for g in required if g not in gset]
    if missing:
        raise ValueError(f"lift generators {missing} required mod {n} but absent")
    labels = euler_circuit(k, a, b)
    visited = bytearray(n)
    visited[0] = 1
    v = 0
    steps = []
    for j, lab in enumerate(labels):
        tc = (v + lab) % k
        free = [t for t in (tc, tc + k) if not visited[t]]
        if free:
            t = free[0]
        elif j == n - 1 and tc == 0:
            t = 0  # closing arc back to the start
        else:
            raise ContractViolationError(
                f"lift stranded at step {j}: class {tc} already full"
            )
        step = (t - v) % n
        if step not in gset:
            raise ContractViolationError(f"lift step {step} is not a generator")
        steps.append(step)
        visited[t] = 1
        v = t
    if v != 0:
        raise ContractViolationError(f"lift closed at {v}, not at the start")
    return CircuitCert(start=0, steps=tuple(steps))


def _deg4_subset_cert(
    spec: CirculantSpec, sub: tuple[int, ...]
) -> tuple[str, CircuitCert] | None:
    """Try to settle the whole spec from one connected 3-generator subset."""
    n = spec.n
    unit = next((g for g in sub if gcd(g, n) == 1), None)
    if unit is not None:
        return "cyclic", build_cyclic(n, unit)
    sub_spec = CirculantSpec(n, sub)
    h = half_spec_match(sub_spec)
    if h is not None:
        if thm46_ham_bullet(h) is not None:
            return f"thm46-case{thm46_case(h)}", build_thm46(h)
        # non-hamiltonian subset: a fourth generator a + k doubles the
        # a-class arcs and the quotient walk lifts
        c = (h.a + h.k) % n
        if c in spec.gens and c not in sub:
            return "prop51-case2", euler_lift(h.k, h.a, h.b, spec.gens)
        return None
    witness = cor14_nonham(sub_spec)
    if witness is None:
        return None
    # map the matched pair onto {6k+2, 6k+3} by a unit multiplier; the
    # extra generator landing on 2 completes the explicit circuit
    pa, pb = witness.pair
    if witness.matched_congruence == CONG_3A_2B:
        x = (-pow(pa - pb, -1, n)) % n
    else:
        x = pow(pa - pb, -1, n)
    c = next(
        (g for g in spec.gens if g not in sub and (x * g) % n == 2), None
    )
    if c is None:
        return None
    mapped = prop51_case1_circuit(witness.k, tuple((x * g) % n for g in spec.gens))
    x_inv = pow(x, -1, n)
    cert = CircuitCert(start=0, steps=tuple((x_inv * s) % n for s in mapped.steps))
    return "prop51-case1", cert


def prove_deg4(spec: CirculantSpec, node_budget: int | None = None) -> Classification:
    """Classify a connected spec of outdegree >= 4.

    Scans connected 3-generator subsets in lexicographic order for one that
    decides the spec; falls back to the sufficient product criterion and
    then to exhaustive search.
    """
    t0 = perf_counter()
    if spec.outdegree < 4:
        raise ValueError(f"{spec} has outdegree {spec.outdegree}, need >= 4")
    if not is_connected(spec):
        raise ValueError(f"{spec} is disconnected")
    n = spec.n
    canon = canonical_form(spec)

    def done(status, method, cert=None, witness=None):
        return Classification(
            spec=spec,
            canonical=canon,
            connected=True,
            status=status,
            method=method,
            cert=cert,
            witness=witness,
            elapsed=perf_counter() - t0,
        )

    saw_connected_subset = False
    for sub in combinations(spec.gens, 3):
        if gcd(n, *sub) != 1:
            continue
        saw_connected_subset = True
        settled = _deg4_subset_cert(spec, sub)
        if settled is None:
            continue
        method, cert = settled
        reason = cert_failure(spec, cert)
        if reason is not None:
            raise ContractViolationError(
                f"subset {sub} produced a bad cert for {spec}: {reason}"
            )
        return done(HAMILTONIAN, method, cert=cert)

    method = "search"
    if not saw_connected_subset and curran_witte_sufficient(spec):
        method = "thm13"
    outcome = find_hamiltonian(spec, node_budget=node_budget)
    if outcome.status == FOUND:
        return done(HAMILTONIAN, method, cert=outcome.cert)
    if outcome.status == BUDGET_EXCEEDED:
        return done(UNKNOWN, "search", witness="budget")
    if method == "thm13":
        raise ContractViolationError(
            f"{spec} satisfies the product criterion but search exhausted"
        )
    return done(NON_HAMILTONIAN, "search", witness="exhaustive")
