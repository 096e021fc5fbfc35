"""Arithmetic hamiltonicity criteria.

Four pure predicates, each cheap enough to run on every census class:

- `rankin_hamiltonian`: the complete outdegree-2 decision via the witness
  equation s + t = gcd(sa + tb, n) = gcd(a - b, n).
- `curran_witte_sufficient`: a density condition that forces a circuit for
  outdegree >= 3 (no construction; certificates come from search).
- `cor14_nonham`: the obstruction for n = 12k with n/2 a generator.
- `thm46_nonham` / `thm46_ham_bullet`: the two faces of the complete
  dichotomy for specs {a, b, b+k} mod 2k.

None of these build circuits; the constructors module turns the positive
thm46 bullets into certificates.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Any

from .zmod import CirculantSpec, HalfSpec, is_connected

CONG_2A_3B = "2a-3b"
CONG_3A_2B = "3a-2b"

# thm46_ham_bullet return values, in scan order.
BULLET_DIFF = "gcd(a-b,k) != 1"
BULLET_A_UNIT = "gcd(a,2k) = 1"
BULLET_B_COPRIME = "gcd(b,k) = 1"
BULLET_BOTH_EVEN = "both a and k even"
BULLET_A_ODD = "a odd and (b or k odd)"
HAM_BULLETS = (BULLET_DIFF, BULLET_A_UNIT, BULLET_B_COPRIME, BULLET_BOTH_EVEN, BULLET_A_ODD)


@dataclass(frozen=True)
class RankinWitness:
    """Nonnegative s, t with s + t = gcd(s*a + t*b, n) = gcd(a - b, n)."""

    s: int
    t: int
    g: int

    def __post_init__(self) -> None:
        if self.s < 0 or self.t < 0 or self.s + self.t != self.g:
            raise ValueError(f"witness shape broken: s={self.s}, t={self.t}, g={self.g}")


def rankin_hamiltonian(n: int, a: int, b: int) -> RankinWitness | None:
    """Decide hamiltonicity of the connected outdegree-2 digraph Cay(Z_n; a, b).

    Scans the witness line s + t = g from (s, t) = (g, 0) toward (0, g) and
    returns the first (s, t) with gcd(s*a + t*b, n) = g, else None.  For
    b = a + 1-style unit differences this yields the witness (g, 0).
    """
    a %= n
    b %= n
    if a == b or a == 0 or b == 0:
        raise ValueError(f"need two distinct nonzero residues, got {a}, {b} mod {n}")
    if gcd(a, b, n) != 1:
        raise ValueError(f"Cay(Z_{n}; {a}, {b}) is disconnected")
    g = gcd(a - b, n)
    for t in range(g + 1):
        s = g - t
        if gcd(s * a + t * b, n) == g:
            w = RankinWitness(s=s, t=t, g=g)
            assert gcd(w.s * a + w.t * b, n) == w.g
            return w
    return None


def curran_witte_sufficient(spec: CirculantSpec) -> bool:
    """True iff gcd(a, n) * gcd(A \\ {a}) >= n for every generator a.

    A sufficient condition for a hamiltonian circuit at outdegree >= 3.  The
    quantified form over all proper sub-tuples collapses to the full
    complement, since gcd only shrinks on supersets.
    """
    if spec.outdegree < 3:
        raise ValueError(f"need outdegree >= 3, got {spec.outdegree}")
    if not is_connected(spec):
        raise ValueError(f"{spec} is disconnected")
    n = spec.n
    for i, a in enumerate(spec.gens):
        others = spec.gens[:i] + spec.gens[i + 1 :]
        if gcd(a, n) * gcd(*others) < n:
            return False
    return True


@dataclass(frozen=True)
class Cor14Witness:
    """The n = 12k obstruction data: which congruence the pair satisfies.

    `pair` is sorted ascending and `matched_congruence` is evaluated with
    a = pair[0], b = pair[1]; swapping the pair swaps the two congruences
    (mod 12k, -6k = 6k), so one orientation suffices.
    """

    k: int
    pair: tuple[int, int]
    matched_congruence: str

    def __post_init__(self) -> None:
        n = 12 * self.k
        a, b = self.pair
        if not (0 < a < b < n):
            raise ValueError(f"pair must be sorted nonzero residues mod {n}, got {self.pair}")
        if gcd(a - b, n) != 1:
            raise ValueError(f"gcd(a - b, {n}) = {gcd(a - b, n)} != 1 for pair {self.pair}")
        if self.matched_congruence == CONG_2A_3B:
            value = 2 * a - 3 * b
        elif self.matched_congruence == CONG_3A_2B:
            value = 3 * a - 2 * b
        else:
            raise ValueError(f"unknown congruence tag {self.matched_congruence!r}")
        if value % n != 6 * self.k:
            raise ValueError(
                f"congruence {self.matched_congruence} fails for pair {self.pair} mod {n}"
            )

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "type": "cor14",
            "k": self.k,
            "pair": list(self.pair),
            "matched_congruence": self.matched_congruence,
        }


def cor14_nonham(spec: CirculantSpec) -> Cor14Witness | None:
    """Match the non-hamiltonian family with n = 12k and n/2 a generator.

    Requires outdegree 3: n divisible by 12, n/2 among the generators, and
    the remaining pair {a, b} (a < b) satisfying gcd(a - b, n) = 1 and
    2a - 3b = 6k or 3a - 2b = 6k (mod n).  Returns the witness or None.
    """
    if spec.outdegree != 3:
        raise ValueError(f"cor14_nonham needs outdegree 3, got {spec.outdegree}")
    n = spec.n
    if n % 12:
        return None
    k = n // 12
    half = 6 * k
    if half not in spec.gens:
        return None
    a, b = sorted(g for g in spec.gens if g != half)
    if gcd(a - b, n) != 1:
        return None
    for tag, value in ((CONG_2A_3B, 2 * a - 3 * b), (CONG_3A_2B, 3 * a - 2 * b)):
        if value % n == half:
            return Cor14Witness(k=k, pair=(a, b), matched_congruence=tag)
    return None


@dataclass(frozen=True)
class Thm46Breakdown:
    """Per-bullet truth values behind a thm46 non-hamiltonian verdict."""

    a: int
    b: int
    k: int
    gcd_abk: int
    diff_coprime_k: bool       # gcd(a-b, k) = 1
    a_not_unit: bool           # gcd(a, 2k) != 1
    b_not_coprime_k: bool      # gcd(b, k) != 1
    a_or_k_odd: bool
    a_even_or_b_k_even: bool   # a even, or (b even and k even)

    @property
    def non_hamiltonian(self) -> bool:
        return self.gcd_abk != 1 or (
            self.diff_coprime_k
            and self.a_not_unit
            and self.b_not_coprime_k
            and self.a_or_k_odd
            and self.a_even_or_b_k_even
        )

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "type": "thm46",
            "a": self.a,
            "b": self.b,
            "k": self.k,
            "gcd_abk": self.gcd_abk,
            "bullets": {
                "diff_coprime_k": self.diff_coprime_k,
                "a_not_unit": self.a_not_unit,
                "b_not_coprime_k": self.b_not_coprime_k,
                "a_or_k_odd": self.a_or_k_odd,
                "a_even_or_b_k_even": self.a_even_or_b_k_even,
            },
        }


def _breakdown(h: HalfSpec) -> Thm46Breakdown:
    a, b, k = h.a, h.b, h.k
    return Thm46Breakdown(
        a=a,
        b=b,
        k=k,
        gcd_abk=gcd(a, b, k),
        diff_coprime_k=gcd(a - b, k) == 1,
        a_not_unit=gcd(a, 2 * k) != 1,
        b_not_coprime_k=gcd(b, k) != 1,
        a_or_k_odd=(a % 2 == 1) or (k % 2 == 1),
        a_even_or_b_k_even=(a % 2 == 0) or (b % 2 == 0 and k % 2 == 0),
    )


def thm46_nonham(h: HalfSpec) -> Thm46Breakdown | None:
    """The complete non-hamiltonicity test for Cay(Z_2k; a, b, b+k).

    Non-hamiltonian iff gcd(a, b, k) != 1 (the digraph is disconnected) or
    all five bullets hold.  Returns the per-bullet breakdown on a match,
    None when the digraph is hamiltonian.
    """
    bd = _breakdown(h)
    return bd if bd.non_hamiltonian else None


def thm46_ham_bullet(h: HalfSpec) -> str | None:
    """First satisfied hamiltonicity bullet for Cay(Z_2k; a, b, b+k), or None.

    The scan order matches the constructive dispatch.  gcd(a, b, k) != 1
    reports non-hamiltonian (None) rather than raising: the digraph is then
    disconnected and certainly has no circuit.
    """
    a, b, k = h.a, h.b, h.k
    if gcd(a, b, k) != 1:
        return None
    if gcd(a - b, k) != 1:
        return BULLET_DIFF
    if gcd(a, 2 * k) == 1:
        return BULLET_A_UNIT
    if gcd(b, k) == 1:
        return BULLET_B_COPRIME
    if a % 2 == 0 and k % 2 == 0:
        return BULLET_BOTH_EVEN
    if a % 2 == 1 and (b % 2 == 1 or k % 2 == 1):
        return BULLET_A_ODD
    return None
