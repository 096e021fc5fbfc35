"""Residue arithmetic and the two core spec types.

A circulant digraph Cay(Z_n; A) has vertex set Z_n and an arc v -> v+a for
every vertex v and generator a in A.  Everything downstream (criteria,
constructions, search) operates on the `CirculantSpec` defined here and on
`HalfSpec`, the decomposition used when n = 2k and two generators differ by k.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


@dataclass(frozen=True, order=True)
class CirculantSpec:
    """A validated spec: modulus n and a sorted tuple of distinct generators.

    Construction is strict; use `validate_spec` to normalize raw input
    (reduction mod n, sorting, duplicate rejection).
    """

    n: int
    gens: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"modulus must be at least 2, got {self.n}")
        if not isinstance(self.gens, tuple) or not self.gens:
            raise ValueError("generators must be a non-empty tuple")
        for g in self.gens:
            if not 1 <= g < self.n:
                raise ValueError(f"generator {g} is not a nonzero residue mod {self.n}")
        if list(self.gens) != sorted(set(self.gens)):
            raise ValueError(f"generators must be sorted and distinct, got {self.gens}")

    @property
    def outdegree(self) -> int:
        return len(self.gens)

    def __str__(self) -> str:
        return f"Cay(Z_{self.n}; {', '.join(str(g) for g in self.gens)})"


def validate_spec(n: int, gens: list[int] | tuple[int, ...]) -> CirculantSpec:
    """Normalize raw generators into a CirculantSpec.

    Reduces mod n, sorts, and rejects empty sets, residues that reduce to 0
    (loops), and duplicates after reduction.
    """
    if n < 2:
        raise ValueError(f"modulus must be at least 2, got {n}")
    if not gens:
        raise ValueError("generator set must be non-empty")
    reduced = sorted({g % n for g in gens})
    if 0 in reduced:
        raise ValueError("a generator reduces to 0 mod n (self-loop)")
    if len(reduced) != len(list(gens)):
        raise ValueError("duplicate generators after reduction mod n")
    return CirculantSpec(n, tuple(reduced))


def is_connected(spec: CirculantSpec) -> bool:
    """Cay(Z_n; A) is strongly connected iff gcd(n, A) = 1."""
    return gcd(spec.n, *spec.gens) == 1


def element_order(n: int, a: int) -> int:
    """Order of the residue a in the additive group Z_n."""
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    return n // gcd(a % n, n)


def units(n: int) -> list[int]:
    """The multiplicative units of Z_n, ascending."""
    return [x for x in range(1, n) if gcd(x, n) == 1]


def canonical_form(spec: CirculantSpec) -> CirculantSpec:
    """Lex-least representative of the spec's multiplier equivalence class.

    Multiplying the generator set by a unit of Z_n gives an isomorphic
    digraph; the canonical form is the lexicographically smallest sorted
    generator tuple over all unit multiples.
    """
    n = spec.n
    best = min(tuple(sorted((x * g) % n for g in spec.gens)) for x in units(n))
    return CirculantSpec(n, best)


@dataclass(frozen=True)
class HalfSpec:
    """The decomposition {a, b, b+k} of an outdegree-3 spec with n = 2k.

    Exactly the shape where two generators differ by half the modulus.  By
    convention b is the smaller of the pair {b, b+k}; a is the third
    generator.  All the structural machinery (one-factor surgery, the
    hamiltonicity dichotomy) lives on this type.
    """

    a: int
    b: int
    k: int

    def __post_init__(self) -> None:
        n = 2 * self.k
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        for name, g in (("a", self.a), ("b", self.b)):
            if not 1 <= g < n:
                raise ValueError(f"{name}={g} is not a nonzero residue mod {n}")
        if self.b == self.k:
            raise ValueError("b = k would make b and b+k coincide mod 2k")
        if self.a in (self.b, (self.b + self.k) % n):
            raise ValueError("a must differ from both b and b+k")

    @property
    def n(self) -> int:
        return 2 * self.k

    @property
    def b_partner(self) -> int:
        return (self.b + self.k) % self.n

    @property
    def spec(self) -> CirculantSpec:
        return CirculantSpec(self.n, tuple(sorted((self.a, self.b, self.b_partner))))


def half_spec_match(spec: CirculantSpec) -> HalfSpec | None:
    """Find the {a, b, b+k} decomposition of an outdegree-3 spec, if any.

    Returns None when n is odd or no generator pair differs by n/2.  At most
    one pair can match (two matching pairs would force a repeated generator),
    and the returned b is the smaller element of the pair.
    """
    if spec.outdegree != 3:
        raise ValueError(f"half_spec_match needs outdegree 3, got {spec.outdegree}")
    if spec.n % 2:
        return None
    k = spec.n // 2
    gens = spec.gens
    pairs = [
        (gens[i], gens[j])
        for i in range(3)
        for j in range(i + 1, 3)
        if (gens[j] - gens[i]) % spec.n == k
    ]
    if not pairs:
        return None
    assert len(pairs) == 1, f"distinct generators admit at most one half-pair: {spec}"
    lo, hi = pairs[0]
    (a,) = [g for g in gens if g not in (lo, hi)]
    return HalfSpec(a=a, b=min(lo, hi), k=k)
