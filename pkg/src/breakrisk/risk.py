"""Risk scoring for breaking-change sets over a snapshot.

Two modes are offered:

* ``literal`` walks every (path, breaking operation, branch) triple and,
  whenever the branch's key contains the operation, adds the branch's
  request-weighted chain share. A branch is counted once per matching
  operation and chain prefixes recur across sibling branches, so the raw
  sum can exceed 1; the total is clamped to 1.0 and flagged.

* ``affected-paths`` (the default) scores the fraction of observed requests
  that belong to paths containing at least one breaking operation. It is
  structurally confined to [0, 1] and reaches exactly 1.0 when every path
  is affected.

All scores are exact integer-count ratios evaluated in double precision:
numerators are summed as integers and divided by the grand total once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .errors import EmptySnapshotError, UnknownBranchError
from .model import BranchKey, OperationId, Snapshot, caller_of, coefficient


class RiskMode(str, enum.Enum):
    LITERAL = "literal"
    AFFECTED_PATHS = "affected-paths"


DEFAULT_MODE = RiskMode.AFFECTED_PATHS


def parse_mode(value: "str | RiskMode") -> RiskMode:
    """Normalize a mode name; raises ValueError for anything unknown."""
    if isinstance(value, RiskMode):
        return value
    try:
        return RiskMode(value)
    except ValueError:
        choices = ", ".join(mode.value for mode in RiskMode)
        raise ValueError(f"unknown risk mode {value!r} (choose from: {choices})") from None


class BreakingSet:
    """Operations declared breaking; duplicates collapse, matching is by label."""

    __slots__ = ("labels",)

    def __init__(self, ops: Iterable["OperationId | str"] = ()) -> None:
        self.labels: frozenset[str] = frozenset(
            op.label if isinstance(op, OperationId) else str(op) for op in ops
        )

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def __iter__(self):
        return iter(sorted(self.labels))

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BreakingSet) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"BreakingSet({sorted(self.labels)!r})"


@dataclass(frozen=True)
class BranchHit:
    """One branch's share of the score; ``op`` is set in literal mode only."""

    branch: str
    op: str | None
    contribution: float


@dataclass(frozen=True)
class RiskReport:
    """Mode-tagged risk score with per-path and per-branch attribution."""

    mode: RiskMode
    total: float
    raw_total: float
    clamped: bool
    per_path: tuple[tuple[int, float], ...]
    per_branch: tuple[BranchHit, ...]
    unmatched: tuple[str, ...]


def branch_contains(key: BranchKey, op: "OperationId | str") -> bool:
    """True when the operation's label occurs at any position of the key."""
    label = op.label if isinstance(op, OperationId) else op
    return label in key.labels


def _require_traffic(snapshot: Snapshot) -> None:
    if snapshot.grand_total == 0:
        raise EmptySnapshotError(
            "risk is undefined over an empty snapshot: no observed requests"
        )


def _chain_numerator(snapshot: Snapshot, key: BranchKey) -> int:
    """Sum of the stored counts of every prefix of ``key`` (integers, exact)."""
    counts = snapshot.branch_counts
    total = 0
    for length in range(1, len(key) + 1):
        rendered = key.prefix(length).render()
        if rendered not in counts:
            raise UnknownBranchError(f"branch {rendered!r} is not stored in the snapshot")
        total += counts[rendered]
    return total


def risk_branch_literal(snapshot: Snapshot, key: BranchKey) -> float:
    """Request-weighted share of one branch: its prefix counts over the grand total."""
    _require_traffic(snapshot)
    return _chain_numerator(snapshot, key) / snapshot.grand_total


def risk_branch_literal_weighted(snapshot: Snapshot, key: BranchKey) -> float:
    """The same branch share via per-caller fractions times caller coefficients.

    Algebraically identical to :func:`risk_branch_literal`; kept as a second
    route so tests can assert the simplification holds numerically.
    """
    _require_traffic(snapshot)
    counts = snapshot.branch_counts
    share = 0.0
    for length in range(1, len(key) + 1):
        prefix = key.prefix(length)
        rendered = prefix.render()
        if rendered not in counts:
            raise UnknownBranchError(f"branch {rendered!r} is not stored in the snapshot")
        caller = caller_of(prefix, snapshot.entry_label)
        caller_total = snapshot.caller_totals.get(caller, 0)
        if caller_total == 0:
            # a materialized zero-count edge whose caller issues no requests
            continue
        share += (counts[rendered] / caller_total) * coefficient(snapshot, caller)
    return share


def _unmatched(snapshot: Snapshot, s: BreakingSet) -> tuple[str, ...]:
    return tuple(sorted(label for label in s.labels if label not in snapshot.operations))


def risk_literal(snapshot: Snapshot, s: BreakingSet) -> RiskReport:
    """Scan every (path, breaking op, branch) triple and sum matching branch shares."""
    _require_traffic(snapshot)
    grand_total = snapshot.grand_total
    hits: list[BranchHit] = []
    per_path: list[tuple[int, float]] = []
    total_numerator = 0
    for path in snapshot.paths:
        path_numerator = 0
        path_hit = False
        for label in sorted(s.labels):
            for entry in path.branches:
                if label in entry.key.labels:
                    numerator = _chain_numerator(snapshot, entry.key)
                    path_numerator += numerator
                    path_hit = True
                    hits.append(
                        BranchHit(entry.key.render(), label, numerator / grand_total)
                    )
        if path_hit:
            per_path.append((path.id, min(path_numerator / grand_total, 1.0)))
        total_numerator += path_numerator
    raw_total = total_numerator / grand_total
    clamped = raw_total > 1.0
    return RiskReport(
        mode=RiskMode.LITERAL,
        total=1.0 if clamped else raw_total,
        raw_total=raw_total,
        clamped=clamped,
        per_path=tuple(per_path),
        per_branch=tuple(hits),
        unmatched=_unmatched(snapshot, s),
    )


def affected_paths(snapshot: Snapshot, s: BreakingSet) -> set[int]:
    """Ids of paths whose branch keys mention at least one breaking operation."""
    return {path.id for path in snapshot.paths if path.op_labels & s.labels}


def risk_affected_paths(snapshot: Snapshot, s: BreakingSet) -> RiskReport:
    """Fraction of observed requests on paths touched by the breaking set."""
    _require_traffic(snapshot)
    grand_total = snapshot.grand_total
    affected = [path for path in snapshot.paths if path.op_labels & s.labels]
    # integer weight sum, single division: saturates at exactly 1.0
    total = sum(path.weight for path in affected) / grand_total
    per_path = tuple((path.id, path.weight / grand_total) for path in affected)
    hits = tuple(
        BranchHit(entry.key.render(), None, entry.count / grand_total)
        for path in affected
        for entry in path.branches
    )
    return RiskReport(
        mode=RiskMode.AFFECTED_PATHS,
        total=total,
        raw_total=total,
        clamped=False,
        per_path=per_path,
        per_branch=hits,
        unmatched=_unmatched(snapshot, s),
    )


def risk(
    snapshot: Snapshot, s: BreakingSet, mode: "str | RiskMode" = DEFAULT_MODE
) -> RiskReport:
    """Score a breaking set in the selected mode."""
    mode = parse_mode(mode)
    if mode is RiskMode.LITERAL:
        return risk_literal(snapshot, s)
    return risk_affected_paths(snapshot, s)


def sweep_single_ops(
    snapshot: Snapshot, mode: "str | RiskMode" = DEFAULT_MODE
) -> list[tuple[OperationId, float]]:
    """Risk of breaking each observed operation alone, highest score first.

    Ties break by ascending label so output is stable. An empty snapshot
    yields an empty sweep.
    """
    mode = parse_mode(mode)
    if snapshot.grand_total == 0:
        return []
    results = [
        (op, risk(snapshot, BreakingSet([label]), mode).total)
        for label, op in snapshot.operations.items()
    ]
    results.sort(key=lambda item: (-item[1], item[0].label))
    return results
