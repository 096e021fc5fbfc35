"""Classification census over multiplier classes of circulant digraphs.

The pipeline enumerates one canonical representative per equivalence class,
classifies each by the cheapest deciding rule (arithmetic criteria, then
explicit construction, then exhaustive search), and persists one JSONL record
per class.  Under the verify-search policy every verdict carries oracle-grade
evidence: hamiltonian records hold a circuit that re-verifies, and
non-hamiltonian criterion verdicts are re-proved by exhaustive search; any
disagreement aborts the run, because it would mean the criteria and the
oracle cannot both be right.
"""

from __future__ import annotations

import json
import multiprocessing
from dataclasses import is_dataclass, asdict
from itertools import combinations
from math import gcd
from pathlib import Path
from time import perf_counter
from typing import Any, Iterable, Iterator

from .certs import (
    DISCONNECTED,
    HAMILTONIAN,
    NON_HAMILTONIAN,
    UNKNOWN,
    CircuitCert,
    Classification,
)
from .constructors import build_cyclic, build_thm46, prove_deg4, thm46_case
from .criteria import (
    cor14_nonham,
    curran_witte_sufficient,
    rankin_hamiltonian,
    thm46_ham_bullet,
    thm46_nonham,
)
from .errors import CensusSoundnessError, ContractViolationError, SearchBudgetError
from .search import (
    BUDGET_EXCEEDED,
    FOUND,
    NONE_EXHAUSTIVE,
    cert_failure,
    find_hamiltonian,
)
from .zmod import CirculantSpec, canonical_form, half_spec_match, is_connected

SCHEMA = 1
VERIFY_SEARCH = "verify-search"
VERIFY_NONE = "verify-none"
POLICIES = (VERIFY_SEARCH, VERIFY_NONE)

_SHORT_STATUS = {
    HAMILTONIAN: "ham",
    NON_HAMILTONIAN: "nonham",
    DISCONNECTED: "disconnected",
    UNKNOWN: "unknown",
}

# The published record set: every non-hamiltonian connected class of
# outdegree 3 on fewer than 48 vertices, by its stated representative.
FIGURE1_NONHAM: tuple[tuple[int, tuple[int, int, int]], ...] = (
    (12, (2, 3, 8)),
    (12, (3, 4, 6)),
    (18, (2, 3, 12)),
    (18, (2, 6, 15)),
    (20, (2, 5, 12)),
    (24, (2, 3, 14)),
    (24, (2, 9, 12)),
    (24, (3, 4, 16)),
    (28, (2, 7, 16)),
    (30, (2, 3, 18)),
    (30, (2, 6, 21)),
    (30, (2, 9, 24)),
    (30, (2, 10, 25)),
    (30, (3, 10, 18)),
    (30, (5, 6, 20)),
    (36, (2, 3, 20)),
    (36, (2, 9, 20)),
    (36, (2, 15, 20)),
    (36, (3, 8, 18)),
    (40, (2, 5, 22)),
    (40, (4, 5, 24)),
    (42, (2, 3, 24)),
    (42, (2, 6, 27)),
    (42, (2, 7, 28)),
    (42, (2, 12, 33)),
    (42, (2, 15, 36)),
    (42, (2, 18, 39)),
    (42, (3, 14, 24)),
    (42, (6, 7, 28)),
    (44, (2, 11, 24)),
)


def enumerate_classes(
    n_min: int, n_max: int, outdegree: int
) -> Iterator[CirculantSpec]:
    """One canonical representative per connected multiplier class, lex order.

    Scanning generator tuples in lexicographic order means the first member
    of each orbit encountered is its lexicographic minimum, which is exactly
    the canonical form; later orbit members are skipped via the seen set.
    """
    if outdegree not in (2, 3, 4):
        raise ValueError(f"outdegree must be 2, 3, or 4, got {outdegree}")
    for n in range(max(n_min, 2), n_max + 1):
        seen: set[tuple[int, ...]] = set()
        units = [x for x in range(1, n) if gcd(x, n) == 1]
        for gens in combinations(range(1, n), outdegree):
            if gens in seen:
                continue
            if gcd(n, *gens) != 1:
                continue
            for x in units:
                seen.add(tuple(sorted((x * g) % n for g in gens)))
            yield CirculantSpec(n, gens)


def _search_cert(spec: CirculantSpec, node_budget: int | None) -> CircuitCert:
    """A circuit that must exist; budget exhaustion or absence is fatal."""
    outcome = find_hamiltonian(spec, node_budget=node_budget)
    if outcome.status == BUDGET_EXCEEDED:
        raise SearchBudgetError(f"budget exhausted finding a circuit for {spec}")
    if outcome.status != FOUND:
        raise ContractViolationError(
            f"{spec} satisfies a hamiltonicity criterion but search exhausted"
        )
    return outcome.cert


def _confirm_nonham(spec: CirculantSpec, method: str, node_budget: int | None) -> None:
    outcome = find_hamiltonian(spec, node_budget=node_budget)
    if outcome.status == BUDGET_EXCEEDED:
        raise SearchBudgetError(
            f"budget exhausted while verifying the {method} verdict on {spec}"
        )
    if outcome.status == FOUND:
        raise CensusSoundnessError(
            f"{method} declared {spec} non-hamiltonian but search found "
            f"a circuit: {outcome.cert.to_json_dict()}"
        )


def _confirm_ham(spec: CirculantSpec, cls: Classification) -> None:
    if cls.cert is None:
        raise CensusSoundnessError(f"hamiltonian verdict on {spec} carries no cert")
    reason = cert_failure(spec, cls.cert)
    if reason is not None:
        raise CensusSoundnessError(f"cert for {spec} does not verify: {reason}")


def classify3(
    spec: CirculantSpec,
    policy: str = VERIFY_NONE,
    node_budget: int | None = None,
) -> Classification:
    """Decide one outdegree-3 spec, cheapest rule first.

    Order: connectivity, the n = 12k congruence obstruction, the half-spec
    non-hamiltonicity test, the half-spec constructive cases, the product
    sufficiency criterion (cert supplied by search), and finally exhaustive
    search.  Under verify-search each criterion verdict is re-proved.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    if spec.outdegree != 3:
        raise ValueError(f"classify3 needs outdegree 3, got {spec.outdegree}")
    t0 = perf_counter()
    canon = canonical_form(spec)

    def done(status, method, cert=None, witness=None, connected=True):
        return Classification(
            spec=spec,
            canonical=canon,
            connected=connected,
            status=status,
            method=method,
            cert=cert,
            witness=witness,
            elapsed=perf_counter() - t0,
        )

    verify = policy == VERIFY_SEARCH
    if not is_connected(spec):
        return done(DISCONNECTED, "connectivity", connected=False)
    witness = cor14_nonham(spec)
    if witness is not None:
        if verify:
            _confirm_nonham(spec, "cor14", node_budget)
        return done(NON_HAMILTONIAN, "cor14", witness=witness)
    h = half_spec_match(spec)
    if h is not None:
        breakdown = thm46_nonham(h)
        if breakdown is not None:
            if verify:
                _confirm_nonham(spec, "thm46", node_budget)
            return done(NON_HAMILTONIAN, "thm46", witness=breakdown)
        cert = build_thm46(h)
        reason = cert_failure(spec, cert)
        if reason is not None:
            raise ContractViolationError(f"cert for {spec} does not verify: {reason}")
        out = done(HAMILTONIAN, f"thm46-case{thm46_case(h)}", cert=cert)
        if verify:
            _confirm_ham(spec, out)
        return out
    if curran_witte_sufficient(spec):
        out = done(HAMILTONIAN, "thm13", cert=_search_cert(spec, node_budget))
        if verify:
            _confirm_ham(spec, out)
        return out
    outcome = find_hamiltonian(spec, node_budget=node_budget)
    if outcome.status == FOUND:
        out = done(HAMILTONIAN, "search", cert=outcome.cert)
        if verify:
            _confirm_ham(spec, out)
        return out
    if outcome.status == BUDGET_EXCEEDED:
        if verify:
            raise SearchBudgetError(
                f"budget exhausted searching {spec} under {VERIFY_SEARCH}"
            )
        return done(UNKNOWN, "search", witness="budget")
    return done(NON_HAMILTONIAN, "search", witness="exhaustive")


def classify_any(
    spec: CirculantSpec,
    policy: str = VERIFY_NONE,
    node_budget: int | None = None,
) -> Classification:
    """Dispatch on outdegree: cyclic, Rankin, the 3-generator chain, or >= 4."""
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    t0 = perf_counter()
    canon = canonical_form(spec)

    def done(status, method, cert=None, witness=None, connected=True):
        return Classification(
            spec=spec,
            canonical=canon,
            connected=connected,
            status=status,
            method=method,
            cert=cert,
            witness=witness,
            elapsed=perf_counter() - t0,
        )

    verify = policy == VERIFY_SEARCH
    if not is_connected(spec):
        return done(DISCONNECTED, "connectivity", connected=False)
    deg = spec.outdegree
    if deg == 1:
        # connected single generator is a unit: the circuit is the whole orbit
        return done(HAMILTONIAN, "cyclic", cert=build_cyclic(spec.n, spec.gens[0]))
    if deg == 2:
        a, b = spec.gens
        witness = rankin_hamiltonian(spec.n, a, b)
        if witness is None:
            if verify:
                _confirm_nonham(spec, "rankin", node_budget)
            return done(NON_HAMILTONIAN, "rankin")
        out = done(
            HAMILTONIAN, "rankin", cert=_search_cert(spec, node_budget), witness=witness
        )
        if verify:
            _confirm_ham(spec, out)
        return out
    if deg == 3:
        return classify3(spec, policy=policy, node_budget=node_budget)
    out = prove_deg4(spec, node_budget=node_budget)
    if out.status == UNKNOWN and verify:
        raise SearchBudgetError(f"budget exhausted on {spec} under {VERIFY_SEARCH}")
    if verify and out.status == HAMILTONIAN:
        _confirm_ham(spec, out)
    return out


def _jsonify(obj: Any) -> Any:
    if isinstance(obj, (list, tuple)):
        return [_jsonify(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    return obj


def record_of(cls: Classification) -> dict[str, Any]:
    """The JSONL payload for one classification (fixed key order)."""
    witness: Any = cls.witness
    if is_dataclass(witness):
        witness = _jsonify(asdict(witness))
    return {
        "n": cls.spec.n,
        "gens": list(cls.spec.gens),
        "canonical": list(cls.canonical.gens),
        "connected": cls.connected,
        "status": _SHORT_STATUS[cls.status],
        "method": cls.method,
        "witness": witness,
        "cert": cls.cert.to_json_dict() if cls.cert is not None else None,
        "millis": int(round(cls.elapsed * 1000)),
    }


def record_line(record: dict[str, Any]) -> str:
    return json.dumps(record, separators=(",", ":"))


def load_census(path: str | Path) -> tuple[dict[str, Any] | None, list[dict[str, Any]]]:
    """Parse a census file into (manifest, records); tolerates a partial tail.

    A final line truncated by an interrupted run is dropped; everything
    before it is kept, which is what makes resume safe.
    """
    manifest: dict[str, Any] | None = None
    records: list[dict[str, Any]] = []
    text = Path(path).read_text()
    for i, line in enumerate(text.splitlines()):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            if i == text.count("\n"):
                break  # interrupted final write
            raise
        if "schema" in obj:
            manifest = obj
        else:
            records.append(obj)
    return manifest, records


def _classify_args(args: tuple[int, tuple[int, ...], str, int | None]) -> dict[str, Any]:
    n, gens, policy, node_budget = args
    spec = CirculantSpec(n, gens)
    return record_of(classify_any(spec, policy=policy, node_budget=node_budget))


def _effective_policy(policy: str, n: int, verify_threshold: int) -> str:
    if policy == "auto":
        return VERIFY_SEARCH if n < verify_threshold else VERIFY_NONE
    return policy


def run_census(
    n_min: int,
    n_max: int,
    outdegree: int = 3,
    policy: str = VERIFY_SEARCH,
    jobs: int = 1,
    out: str | Path | None = None,
    node_budget: int | None = None,
    verify_threshold: int = 48,
) -> dict[str, Any]:
    """Classify every class in range; persist sorted JSONL; return a summary.

    Records are written append-only while the run progresses (so an
    interrupted run resumes by skipping already-classified classes) and the
    file is rewritten in (n, canonical) order at the end, making output
    byte-identical across worker counts except for the timing field.
    """
    if policy not in POLICIES and policy != "auto":
        raise ValueError(f"unknown policy {policy!r}")
    if n_min > n_max:
        raise ValueError(f"empty range {n_min}..{n_max}")
    if jobs < 1:
        raise ValueError(f"jobs must be positive, got {jobs}")
    t0 = perf_counter()
    manifest = {
        "schema": SCHEMA,
        "range": [n_min, n_max],
        "outdegree": outdegree,
        "policy": policy,
    }
    done_records: list[dict[str, Any]] = []
    out_path = Path(out) if out is not None else None
    if out_path is not None and out_path.exists():
        old_manifest, done_records = load_census(out_path)
        if old_manifest is not None and any(
            old_manifest.get(key) != manifest[key] for key in manifest
        ):
            raise ValueError(
                f"existing census {out_path} was produced with different "
                f"parameters: {old_manifest}"
            )
    done_keys = {(r["n"], tuple(r["canonical"])) for r in done_records}
    pending = [
        spec
        for spec in enumerate_classes(n_min, n_max, outdegree)
        if (spec.n, spec.gens) not in done_keys
    ]

    work = [
        (
            spec.n,
            spec.gens,
            _effective_policy(policy, spec.n, verify_threshold),
            node_budget,
        )
        for spec in pending
    ]
    journal = out_path.open("a") if out_path is not None else None
    new_records: list[dict[str, Any]] = []
    try:
        if jobs > 1 and len(work) > 1:
            # warm the jit in the parent so forked workers inherit it
            find_hamiltonian(CirculantSpec(4, (1, 2)))
            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(jobs) as pool:
                for record in pool.imap_unordered(_classify_args, work, chunksize=8):
                    new_records.append(record)
                    if journal is not None:
                        journal.write(record_line(record) + "\n")
                        journal.flush()
        else:
            for args in work:
                record = _classify_args(args)
                new_records.append(record)
                if journal is not None:
                    journal.write(record_line(record) + "\n")
                    journal.flush()
    finally:
        if journal is not None:
            journal.close()

    records = done_records + new_records
    records.sort(key=lambda r: (r["n"], r["canonical"]))
    if out_path is not None:
        tmp = out_path.with_suffix(out_path.suffix + ".tmp")
        with tmp.open("w") as fh:
            fh.write(record_line(manifest) + "\n")
            for record in records:
                fh.write(record_line(record) + "\n")
        tmp.replace(out_path)

    by_status: dict[str, int] = {}
    by_method: dict[str, int] = {}
    for record in records:
        by_status[record["status"]] = by_status.get(record["status"], 0) + 1
        by_method[record["method"]] = by_method.get(record["method"], 0) + 1
    unexplained = sum(
        1 for r in records if r["status"] == "nonham" and r["method"] == "search"
    )
    return {
        "classes": len(records),
        "by_status": by_status,
        "by_method": by_method,
        "unexplained_nonham": unexplained,
        "elapsed": perf_counter() - t0,
        "records": records,
    }


def figure1_check(records: Iterable[dict[str, Any]]) -> dict[str, Any]:
    """Compare census output for n < 48 against the published record set.

    Comparison is class-wise: each published representative is mapped to its
    canonical form first, so the table's choice of representative does not
    matter.  Reports matched count, missing entries, and extra classes.
    """
    rows = list(records)
    manifest = next((r for r in rows if "schema" in r), None)
    rows = [r for r in rows if "schema" not in r]
    if manifest is not None:
        lo, hi = manifest.get("range", (99, 0))
        if lo > 3 or hi < 47 or manifest.get("outdegree") != 3:
            raise ValueError(
                f"census range {lo}..{hi} outdegree {manifest.get('outdegree')} "
                "does not cover 3..47 at outdegree 3"
            )
    else:
        ns = {r["n"] for r in rows}
        if not ns.issuperset(range(4, 48)):
            raise ValueError("census records do not cover 3..47")

    expected = set()
    for n, gens in FIGURE1_NONHAM:
        canon = canonical_form(CirculantSpec(n, gens))
        expected.add((n, canon.gens))
    if len(expected) != len(FIGURE1_NONHAM):
        raise ContractViolationError("published entries collapsed onto one class")
    got = {
        (r["n"], tuple(r["canonical"]))
        for r in rows
        if r["n"] < 48 and r["status"] == "nonham"
    }
    missing = sorted(expected - got)
    extra = sorted(got - expected)
    return {
        "matched": len(expected & got),
        "expected": len(expected),
        "missing": [[n, list(gens)] for n, gens in missing],
        "extra": [[n, list(gens)] for n, gens in extra],
        "ok": not missing and not extra,
    }
