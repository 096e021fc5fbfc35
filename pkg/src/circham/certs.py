"""Hamiltonian-circuit certificates and classification results.

A certificate is checkable with modular addition only: start vertex plus the
sequence of generator values taken.  `Classification` bundles one spec's
verdict with whatever witness or certificate justifies it; it is the unit of
census output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .zmod import CirculantSpec

# Verdict strings, also used (abbreviated) in census records.
HAMILTONIAN = "hamiltonian"
NON_HAMILTONIAN = "non_hamiltonian"
DISCONNECTED = "disconnected"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class CircuitCert:
    """A hamiltonian circuit: start vertex and the generator value per step.

    Intentionally carries no modulus; the spec it certifies is supplied at
    verification time, so a cert cannot drift out of sync with its spec.
    """

    start: int
    steps: tuple[int, ...]

    def to_json_dict(self) -> dict[str, Any]:
        return {"start": self.start, "steps": list(self.steps)}

    @classmethod
    def from_json_dict(cls, d: dict[str, Any]) -> CircuitCert:
        try:
            start = int(d["start"])
            steps = tuple(int(s) for s in d["steps"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed certificate object: {d!r}") from exc
        return cls(start=start, steps=steps)

    def vertices(self, n: int) -> list[int]:
        """The visited vertices in order, excluding the closing return."""
        out = [self.start % n]
        for s in self.steps[:-1]:
            out.append((out[-1] + s) % n)
        return out


@dataclass(frozen=True)
class Classification:
    """One spec's verdict plus the evidence for it.

    method names the deciding rule: rankin, thm13, cor14, thm46, a
    constructive case tag (thm46-case1 .. thm46-case4, prop51-case1,
    prop51-case2, cyclic), search, or connectivity for disconnected specs.
    witness is the rule-specific object (serialized as a dict); cert is a
    circuit when the verdict is hamiltonian and one was produced.
    """

    spec: CirculantSpec
    canonical: CirculantSpec
    connected: bool
    status: str
    method: str
    cert: CircuitCert | None = None
    witness: Any = None
    elapsed: float = field(default=0.0, compare=False)

    def __post_init__(self) -> None:
        if self.status not in (HAMILTONIAN, NON_HAMILTONIAN, DISCONNECTED, UNKNOWN):
            raise ValueError(f"unknown status {self.status!r}")
