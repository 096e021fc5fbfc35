"""One-factor machinery: spanning unions of cycles and their rewiring moves.

A one-factor of Cay(Z_n; A) picks one out-arc per vertex so that every vertex
also has in-degree one; it is a disjoint union of cycles, and a hamiltonian
circuit is exactly a one-factor with a single component.  The moves here
(rotate3, swap_in_arcs, shift_travel, lemma45_merge) rewire factors while
tracking exactly how the component count changes; the constructors module
chains them until one cycle remains.

Class E lives on a HalfSpec {a, b, b+k} mod 2k: the factors in which every
coset {c, c+k} has exactly one vertex traveling by a and the other traveling
by b or b+k.  An E-member is determined by its a-transversal (k bits): the
a-arc into each coset lands on a forced vertex, which in turn forces the
b-type arc onto the coset's other vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

from .certs import CircuitCert
from .errors import ContractViolationError
from .search import cert_failure
from .zmod import CirculantSpec, HalfSpec


@dataclass(frozen=True)
class OneFactor:
    """travel[v] = index into spec.gens of the generator vertex v leaves by."""

    spec: CirculantSpec
    travel: tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.spec.n
        m = self.spec.outdegree
        if len(self.travel) != n:
            raise ValueError(f"travel array has length {len(self.travel)}, expected {n}")
        seen = bytearray(n)
        for v, ti in enumerate(self.travel):
            if not 0 <= ti < m:
                raise ValueError(f"travel[{v}] = {ti} is not a generator index")
            w = (v + self.spec.gens[ti]) % n
            if seen[w]:
                raise ValueError(f"vertex {w} has in-degree > 1; not a one-factor")
            seen[w] = 1

    @property
    def n(self) -> int:
        return self.spec.n

    def gen_value(self, v: int) -> int:
        return self.spec.gens[self.travel[v]]

    def succ(self, v: int) -> int:
        return (v + self.gen_value(v)) % self.n

    def succ_list(self) -> list[int]:
        return [self.succ(v) for v in range(self.n)]

    def pred_list(self) -> list[int]:
        out = [0] * self.n
        for v in range(self.n):
            out[self.succ(v)] = v
        return out


def constant_factor(spec: CirculantSpec, gen_value: int) -> OneFactor:
    """The factor in which every vertex travels by the same generator."""
    if gen_value not in spec.gens:
        raise ValueError(f"{gen_value} is not a generator of {spec}")
    idx = spec.gens.index(gen_value)
    return OneFactor(spec, (idx,) * spec.n)


def one_factor_from_cert(spec: CirculantSpec, cert: CircuitCert) -> OneFactor:
    """Reinterpret a verified circuit as the one-factor it traces."""
    reason = cert_failure(spec, cert)
    if reason is not None:
        raise ValueError(f"cert does not verify: {reason}")
    gi_of = {g: i for i, g in enumerate(spec.gens)}
    travel = [0] * spec.n
    v = cert.start % spec.n
    for s in cert.steps:
        travel[v] = gi_of[s]
        v = (v + s) % spec.n
    return OneFactor(spec, tuple(travel))


def components(H: OneFactor) -> tuple[int, list[int]]:
    """Cycle decomposition: (count, label per vertex).

    Component ids are assigned in order of each cycle's least vertex, so the
    labeling is deterministic.
    """
    n = H.n
    label = [-1] * n
    count = 0
    for v in range(n):
        if label[v] >= 0:
            continue
        w = v
        while label[w] < 0:
            label[w] = count
            w = H.succ(w)
        count += 1
    return count, label


def cert_from_factor(H: OneFactor, start: int = 0) -> CircuitCert:
    """Read a single-cycle factor off as a circuit certificate."""
    count, _ = components(H)
    if count != 1:
        raise ValueError(f"factor has {count} components; not a circuit")
    steps = []
    v = start % H.n
    for _ in range(H.n):
        steps.append(H.gen_value(v))
        v = H.succ(v)
    return CircuitCert(start=start % H.n, steps=tuple(steps))


@dataclass(frozen=True)
class RewireTriple:
    """The data of one rotate3 application.

    sigma is 1-based: sigma[i-1] = j means u_j is the first of the triple
    reached after u_i by following the input factor.  The rotation replaces
    sigma by sigma_prime = sigma composed with the cycle (1 2 3), which
    preserves the parity of the factor's component count.
    """

    u: tuple[int, int, int]
    v: tuple[int, int, int]
    sigma: tuple[int, int, int]

    @property
    def sigma_prime(self) -> tuple[int, int, int]:
        s = self.sigma
        return (s[1], s[2], s[0])


def reentry_permutation(H: OneFactor, u1: int, u2: int, u3: int) -> tuple[int, int, int]:
    """sigma[i-1] = index (1-based) of the first triple vertex after u_i."""
    triple = (u1, u2, u3)
    out = []
    for u in triple:
        w = H.succ(u)
        while w not in triple:
            w = H.succ(w)
        out.append(triple.index(w) + 1)
    return tuple(out)  # type: ignore[return-value]


def rotate3(
    H: OneFactor, u1: int, u2: int, u3: int
) -> tuple[OneFactor, RewireTriple]:
    """Rotate the targets of three vertices: u1->v2, u2->v3, u3->v1.

    All three replacement arcs must be legal (target minus source a
    generator); nothing is modified otherwise.  The component count of the
    result has the same parity as the input's.
    """
    n = H.n
    if len({u1 % n, u2 % n, u3 % n}) != 3:
        raise ValueError(f"rotation vertices must be distinct, got {(u1, u2, u3)}")
    u1, u2, u3 = u1 % n, u2 % n, u3 % n
    v1, v2, v3 = H.succ(u1), H.succ(u2), H.succ(u3)
    gi_of = {g: i for i, g in enumerate(H.spec.gens)}
    new_travel = list(H.travel)
    for src, tgt in ((u1, v2), (u2, v3), (u3, v1)):
        diff = (tgt - src) % n
        if diff not in gi_of:
            raise ValueError(
                f"replacement arc {src} -> {tgt} needs generator {diff}, not in {H.spec}"
            )
        new_travel[src] = gi_of[diff]
    sigma = reentry_permutation(H, u1, u2, u3)
    triple = RewireTriple(u=(u1, u2, u3), v=(v1, v2, v3), sigma=sigma)
    return OneFactor(H.spec, tuple(new_travel)), triple


def swap_in_arcs(H: OneFactor, w1: int, w2: int) -> OneFactor:
    """Exchange the targets of w1 and w2 = w1 + n/2; component count moves by 1.

    Each vertex's travel generator is toggled by +n/2, so both original
    generators g must have g + n/2 also a generator.  The successor
    permutation is composed with a transposition, which is what pins the
    component-count change to exactly plus or minus one.
    """
    n = H.n
    if n % 2:
        raise ValueError(f"swap_in_arcs needs an even modulus, got n = {n}")
    k = n // 2
    w1, w2 = w1 % n, w2 % n
    if w2 != (w1 + k) % n:
        raise ValueError(f"w2 must be w1 + {k} mod {n}, got {(w1, w2)}")
    gi_of = {g: i for i, g in enumerate(H.spec.gens)}
    g1, g2 = H.gen_value(w1), H.gen_value(w2)
    for g in (g1, g2):
        if (g + k) % n not in gi_of:
            raise ValueError(f"generator {g} has no partner {g} + {k} in {H.spec}")
    new_travel = list(H.travel)
    new_travel[w1] = gi_of[(g2 + k) % n]
    new_travel[w2] = gi_of[(g1 + k) % n]
    return OneFactor(H.spec, tuple(new_travel))


@dataclass(frozen=True)
class TransversalBits:
    """bits[c] = True selects c (not c + k) as the a-traveler of coset c."""

    bits: tuple[bool, ...]


def is_in_class_e(H: OneFactor, h: HalfSpec) -> bool:
    """Per coset {c, c+k}: exactly one a-traveler, the other on b or b+k."""
    if H.spec != h.spec:
        raise ValueError(f"factor over {H.spec} does not match half-spec {h.spec}")
    a, btype = h.a, (h.b, h.b_partner)
    for c in range(h.k):
        lo, hi = H.gen_value(c), H.gen_value(c + h.k)
        if not (
            (lo == a and hi in btype) or (hi == a and lo in btype)
        ):
            return False
    return True


def e_from_transversal(h: HalfSpec, bits: TransversalBits) -> OneFactor:
    """The unique class-E factor whose a-travelers are chosen by bits.

    The a-arc from coset c - a lands on a forced vertex of coset c; the
    b-type arc from coset c - b must land on the other vertex, which decides
    b versus b + k.  Both forcings are unconditional, so any bit vector
    yields exactly one factor.
    """
    if len(bits.bits) != h.k:
        raise ValueError(f"need {h.k} transversal bits, got {len(bits.bits)}")
    n, k, a, b = h.n, h.k, h.a, h.b
    spec = h.spec
    gi_of = {g: i for i, g in enumerate(spec.gens)}
    a_traveler = [c if bits.bits[c] else c + k for c in range(k)]
    # a_land[c] = the vertex of coset c that the incoming a-arc occupies
    a_land = [0] * k
    for c in range(k):
        src = a_traveler[c]
        a_land[(c + a) % k] = (src + a) % n
    travel = [0] * n
    for c in range(k):
        travel[a_traveler[c]] = gi_of[a]
        t = c + k if bits.bits[c] else c  # the coset's b-type traveler
        target_coset = (c + b) % k
        cand = (t + b) % n
        landing = cand if cand != a_land[target_coset] else (cand + k) % n
        travel[t] = gi_of[(landing - t) % n]
    H = OneFactor(spec, tuple(travel))
    if not is_in_class_e(H, h):
        raise ContractViolationError(f"transversal factor left class E for {h}")
    return H


def transversal_of(H: OneFactor, h: HalfSpec) -> TransversalBits:
    """Recover the bit vector of a class-E factor (inverse of the above)."""
    if not is_in_class_e(H, h):
        raise ValueError("factor is not in class E")
    return TransversalBits(tuple(H.gen_value(c) == h.a for c in range(h.k)))


def _shift_triple(H: OneFactor, h: HalfSpec, u1: int) -> tuple[int, int, int]:
    """The rotation triple (u1, u1+k, pred of u1+a+k) used by the E moves."""
    if H.spec != h.spec:
        raise ValueError(f"factor over {H.spec} does not match half-spec {h.spec}")
    u1 %= H.n
    if H.gen_value(u1) != h.a:
        raise ValueError(f"vertex {u1} travels by {H.gen_value(u1)}, not by a = {h.a}")
    u2 = (u1 + h.k) % H.n
    v3 = (u1 + h.a + h.k) % H.n
    u3 = H.pred_list()[v3]
    return u1, u2, u3


def shift_travel(H: OneFactor, h: HalfSpec, u1: int) -> OneFactor:
    """Move the a-arc of u1's coset to the other vertex, staying in class E.

    A rotate3 at (u1, u1+k, pred(u1+a+k)); flips exactly one transversal
    bit, so applying it twice at the same coset is the identity.  Component
    parity is preserved (rotate3's guarantee).
    """
    if not is_in_class_e(H, h):
        raise ValueError("shift_travel needs a class-E factor")
    u1, u2, u3 = _shift_triple(H, h, u1)
    out, _ = rotate3(H, u1, u2, u3)
    if not is_in_class_e(out, h):
        raise ContractViolationError("shift_travel left class E")
    return out


def lemma45_merge(H: OneFactor, h: HalfSpec, u: int) -> OneFactor:
    """Merge three components into one: count drops by exactly 2.

    Requires u traveling by a with u, u+k, u+a+k on three distinct
    components.  Same rewiring as shift_travel; the precondition is what
    turns parity preservation into a guaranteed merge.
    """
    if not is_in_class_e(H, h):
        raise ValueError("lemma45_merge needs a class-E factor")
    n = H.n
    u %= n
    count, label = components(H)
    u1, u2, u3 = _shift_triple(H, h, u)
    v3 = (u + h.a + h.k) % n
    if label[u] == label[u2]:
        raise ValueError(f"u = {u} and u + k = {u2} share a component")
    if label[u] == label[v3]:
        raise ValueError(f"u = {u} and u + a + k = {v3} share a component")
    if label[u2] == label[v3]:
        raise ValueError(f"u + k = {u2} and u + a + k = {v3} share a component")
    out, _ = rotate3(H, u1, u2, u3)
    new_count, _ = components(out)
    if new_count != count - 2:
        raise ContractViolationError(
            f"merge changed components {count} -> {new_count}, expected -2"
        )
    if not is_in_class_e(out, h):
        raise ContractViolationError("lemma45_merge left class E")
    return out
