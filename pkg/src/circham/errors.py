"""Exception types shared across the package.

ValueError is reserved for caller mistakes (bad residues, violated
preconditions).  The types below mark the two failure modes that are not the
caller's fault: a broken internal invariant, and an exhausted search budget.
"""

from __future__ import annotations


class ContractViolationError(RuntimeError):
    """An internal invariant failed; the computation cannot be trusted."""


class SearchBudgetError(RuntimeError):
    """An exhaustive search hit its node budget before reaching a verdict."""


class CensusSoundnessError(ContractViolationError):
    """A criterion verdict disagreed with the exhaustive oracle.

    Raised only under the verify-search policy; it means either the
    criterion or the search is wrong, so the whole run is untrustworthy.
    """
