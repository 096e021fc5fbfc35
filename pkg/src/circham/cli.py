"""Command-line surface: check, construct, verify, census, figure1.

Standard output carries JSON only; all diagnostics go to standard error.
Exit codes: 0 success, 1 invalid input (including malformed flags and a
failed figure1 comparison), 2 broken internal invariant, 3 search budget
exhausted.  CIRCHAM_SEARCH_NODE_BUDGET bounds every search these commands
trigger.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from .census import (
    POLICIES,
    VERIFY_NONE,
    VERIFY_SEARCH,
    classify_any,
    figure1_check,
    load_census,
    record_line,
    record_of,
    run_census,
)
from .certs import HAMILTONIAN, UNKNOWN, CircuitCert
from .errors import ContractViolationError, SearchBudgetError
from .search import cert_failure
from .zmod import CirculantSpec, validate_spec

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CONTRACT = 2
EXIT_BUDGET = 3


class _UsageError(Exception):
    """Raised instead of argparse's sys.exit so main controls the code."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> Any:  # argparse would exit(2)
        raise _UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _env_budget() -> int | None:
    raw = os.environ.get("CIRCHAM_SEARCH_NODE_BUDGET", "").strip()
    if not raw:
        return None
    try:
        budget = int(raw)
    except ValueError as exc:
        raise ValueError(
            f"CIRCHAM_SEARCH_NODE_BUDGET must be an integer, got {raw!r}"
        ) from exc
    if budget < 1:
        raise ValueError(f"CIRCHAM_SEARCH_NODE_BUDGET must be positive, got {budget}")
    return budget


def _parse_spec(n: int, gens_text: str) -> CirculantSpec:
    try:
        raw = [int(tok) for tok in gens_text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValueError(
            f"generators must be comma-separated integers, got {gens_text!r}"
        ) from exc
    if not raw:
        raise ValueError("no generators given")
    reduced = [g % n for g in raw]
    if reduced != raw:
        print(f"note: generators reduced mod {n}: {raw} -> {reduced}", file=sys.stderr)
    return validate_spec(n, reduced)


def _cmd_check(args: argparse.Namespace) -> int:
    spec = _parse_spec(args.n, args.gens)
    policy = VERIFY_SEARCH if args.verify == "search" else VERIFY_NONE
    cls = classify_any(spec, policy=policy, node_budget=_env_budget())
    print(record_line(record_of(cls)))
    return EXIT_BUDGET if cls.status == UNKNOWN else EXIT_OK


def _cmd_construct(args: argparse.Namespace) -> int:
    spec = _parse_spec(args.n, args.gens)
    cls = classify_any(spec, policy=VERIFY_NONE, node_budget=_env_budget())
    if cls.status == HAMILTONIAN:
        print(json.dumps(cls.cert.to_json_dict(), separators=(",", ":")))
        return EXIT_OK
    print(record_line(record_of(cls)))
    return EXIT_BUDGET if cls.status == UNKNOWN else EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    spec = _parse_spec(args.n, args.gens)
    try:
        payload = json.loads(open(args.cert).read())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read certificate {args.cert}: {exc}") from exc
    cert = CircuitCert.from_json_dict(payload)
    reason = cert_failure(spec, cert)
    if reason is not None:
        print(f"note: {reason}", file=sys.stderr)
    print("true" if reason is None else "false")
    return EXIT_OK


def _cmd_census(args: argparse.Namespace) -> int:
    summary = run_census(
        args.min,
        args.max,
        outdegree=args.outdegree,
        policy=args.policy,
        jobs=args.jobs,
        out=args.out,
        node_budget=_env_budget(),
        verify_threshold=args.verify_threshold,
    )
    summary.pop("records")
    print(json.dumps(summary, separators=(",", ":")))
    if summary["by_status"].get("unknown", 0):
        return EXIT_BUDGET
    return EXIT_OK


def _cmd_figure1(args: argparse.Namespace) -> int:
    manifest, records = load_census(args.census)
    rows = ([manifest] if manifest is not None else []) + records
    report = figure1_check(rows)
    print(json.dumps(report, separators=(",", ":")))
    return EXIT_OK if report["ok"] else EXIT_INVALID


def _build_parser() -> _Parser:
    parser = _Parser(prog="circham", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def spec_flags(p: _Parser) -> None:
        p.add_argument("--n", type=int, required=True, help="modulus")
        p.add_argument(
            "--gens", required=True, help="comma-separated generator residues"
        )

    p = sub.add_parser("check", help="classify one spec, print the record")
    spec_flags(p)
    p.add_argument(
        "--verify",
        choices=("none", "search"),
        default="none",
        help="re-prove the verdict with the exhaustive oracle (default none)",
    )
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("construct", help="print a circuit cert or the obstruction")
    spec_flags(p)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("verify", help="check a certificate file against a spec")
    spec_flags(p)
    p.add_argument("--cert", required=True, help="JSON file with start and steps")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("census", help="classify every class in a range")
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--outdegree", type=int, default=3)
    p.add_argument(
        "--policy",
        choices=POLICIES + ("auto",),
        default="auto",
        help="auto = verify-search below the threshold, verify-none above",
    )
    p.add_argument("--verify-threshold", type=int, default=48)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="JSONL output path (resumable)")
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("figure1", help="diff a census file against the record set")
    p.add_argument("--census", required=True, help="census JSONL file covering 3..47")
    p.set_defaults(func=_cmd_figure1)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SearchBudgetError as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ContractViolationError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
