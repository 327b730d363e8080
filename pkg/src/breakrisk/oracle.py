"""Brute-force risk computation used to cross-check the engine.

Everything here is written directly against the scoring definitions and
shares no arithmetic with the engine module: caller totals are recomputed
from raw rows, the chain share keeps its per-caller-fraction times
caller-coefficient structure with no algebraic simplification, and the
affected fraction is taken over individually enumerated requests whenever
the window is small enough to enumerate.
"""

from __future__ import annotations

from .errors import EmptySnapshotError
from .model import BranchKey, Snapshot
from .risk import BreakingSet, RiskMode, parse_mode

# beyond this many requests, per-request enumeration degrades to row
# arithmetic (count * indicator), which is the same sum taken in bulk
ENUMERATION_LIMIT = 200_000


def oracle_risk(
    snapshot: Snapshot, s: BreakingSet, mode: "str | RiskMode" = RiskMode.AFFECTED_PATHS
) -> float:
    """Independently computed risk score for cross-checking."""
    mode = parse_mode(mode)
    if _window_total(snapshot) == 0:
        raise EmptySnapshotError("risk is undefined over an empty snapshot")
    if mode is RiskMode.LITERAL:
        return _literal_score(snapshot, s)
    return _affected_score(snapshot, s)


def _window_total(snapshot: Snapshot) -> int:
    return sum(entry.count for path in snapshot.paths for entry in path.branches)


def _caller_requests(snapshot: Snapshot) -> dict[str, int]:
    totals: dict[str, int] = {}
    for path in snapshot.paths:
        for entry in path.branches:
            ops = entry.key.ops
            caller = ops[-2].service if len(ops) > 1 else snapshot.entry_label
            totals[caller] = totals.get(caller, 0) + entry.count
    return totals


def _row_count(snapshot: Snapshot, labels: tuple[str, ...]) -> int:
    for path in snapshot.paths:
        for entry in path.branches:
            if entry.key.labels == labels:
                return entry.count
    return 0


def _chain_share(
    snapshot: Snapshot,
    key: BranchKey,
    caller_requests: dict[str, int],
    request_total: int,
) -> float:
    share = 0.0
    for i in range(1, len(key.ops) + 1):
        prefix = key.ops[:i]
        caller = prefix[-2].service if i > 1 else snapshot.entry_label
        issued = caller_requests.get(caller, 0)
        if issued == 0:
            continue
        step_fraction = _row_count(snapshot, tuple(op.label for op in prefix)) / issued
        caller_coefficient = issued / request_total
        share += step_fraction * caller_coefficient
    return share


def _literal_score(snapshot: Snapshot, s: BreakingSet) -> float:
    caller_requests = _caller_requests(snapshot)
    request_total = sum(caller_requests.values())
    score = 0.0
    for path in snapshot.paths:
        for label in sorted(s.labels):
            for entry in path.branches:
                if label in entry.key.labels:
                    score += _chain_share(snapshot, entry.key, caller_requests, request_total)
    return min(score, 1.0)


def _affected_score(snapshot: Snapshot, s: BreakingSet) -> float:
    total = _window_total(snapshot)
    broken_paths = set()
    for path in snapshot.paths:
        if any(label in entry.key.labels for entry in path.branches for label in s.labels):
            broken_paths.add(path.id)
    affected = 0
    if total <= ENUMERATION_LIMIT:
        seen = 0
        for path in snapshot.paths:
            hit = path.id in broken_paths
            for entry in path.branches:
                for _ in range(entry.count):
                    seen += 1
                    if hit:
                        affected += 1
        assert seen == total
    else:
        for path in snapshot.paths:
            if path.id in broken_paths:
                affected += sum(entry.count for entry in path.branches)
    return affected / total
