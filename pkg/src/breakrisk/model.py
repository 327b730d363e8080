"""Call-path data model: operations, branch keys, paths, snapshots.

A snapshot captures one observation window of a microservice system as a
key-value table. Each key is an ordered chain of operations starting at the
entry point (a *branch*), and its value is the number of requests observed
on the chain's final edge. Branches sharing a root operation form a *path*
(one kind of user activity); the paths plus precomputed caller totals and
the grand request total make up an immutable snapshot.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, MutableMapping

from .errors import BranchKeyError, EmptySnapshotError, SnapshotBuildError

DEFAULT_ENTRY_LABEL = "ENTRY"

# ";" is the canonical separator; ":" is accepted on input only.
CANONICAL_SEPARATOR = ";"
_SPLIT_RE = re.compile(r"[;:]")

# Compact label form: "OP" + supplier service + operation number, e.g. "OPB2".
_COMPACT_LABEL_RE = re.compile(r"OP([A-Za-z]+)([0-9]+)")

MAX_COUNT = 2**63 - 1


class SnapshotWarning(UserWarning):
    """Non-fatal irregularity noticed while building or checking a snapshot."""


@dataclass(frozen=True)
class OperationId:
    """One API operation, identified by the supplier service and a name."""

    service: str
    name: str

    def __post_init__(self) -> None:
        if not self.service:
            raise BranchKeyError("operation service must be nonempty")
        if not self.name:
            raise BranchKeyError("operation name must be nonempty")
        if "." in self.service:
            # "." delimits service from name in generic labels
            raise BranchKeyError(f"service name may not contain '.': {self.service!r}")
        label = self.label
        if ";" in label or ":" in label:
            raise BranchKeyError(f"operation label may not contain a separator: {label!r}")

    @property
    def label(self) -> str:
        """Rendering used inside branch keys, e.g. ``OPB2`` or ``cart.get``."""
        if self.service.isalpha() and self.name.isdigit():
            return f"OP{self.service}{self.name}"
        return f"{self.service}.{self.name}"

    def __str__(self) -> str:
        return self.label


def infer_operation(label: str) -> OperationId:
    """Recover an operation from its label; inverse of ``OperationId.label``."""
    if "." in label:
        service, _, name = label.partition(".")
        if service and name:
            return OperationId(service, name)
        raise BranchKeyError(f"cannot infer an operation from label {label!r}")
    match = _COMPACT_LABEL_RE.fullmatch(label)
    if match:
        return OperationId(match.group(1), match.group(2))
    raise BranchKeyError(f"cannot infer an operation from label {label!r}")


def resolve_label(
    label: str,
    registry: MutableMapping[str, OperationId] | None = None,
    auto_register: bool = True,
) -> OperationId:
    """Resolve a label through ``registry``, inferring unknown ones when allowed."""
    if registry is not None and label in registry:
        return registry[label]
    if not auto_register:
        raise BranchKeyError(f"unknown operation label {label!r} (auto-register disabled)")
    op = infer_operation(label)
    if registry is not None:
        registry[label] = op
    return op


@dataclass(frozen=True)
class BranchKey:
    """Ordered operation chain; position 0 is the operation the entry point calls."""

    ops: tuple[OperationId, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ops", tuple(self.ops))
        if not self.ops:
            raise BranchKeyError("branch key must contain at least one operation")
        labels = [op.label for op in self.ops]
        if len(set(labels)) != len(labels):
            rendered = CANONICAL_SEPARATOR.join(labels)
            raise BranchKeyError(f"operation repeats within branch key {rendered!r} (call loop)")

    @cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(op.label for op in self.ops)

    @property
    def root(self) -> OperationId:
        return self.ops[0]

    def prefix(self, length: int) -> "BranchKey":
        """The chain truncated to its first ``length`` operations."""
        if not 1 <= length <= len(self.ops):
            raise BranchKeyError(f"prefix length {length} out of range for {self.render()!r}")
        return BranchKey(self.ops[:length])

    def render(self) -> str:
        """Canonical string form, always ";"-separated."""
        return CANONICAL_SEPARATOR.join(self.labels)

    def __len__(self) -> int:
        return len(self.ops)

    def __str__(self) -> str:
        return self.render()


def parse_branch_key(
    text: str,
    registry: MutableMapping[str, OperationId] | None = None,
    auto_register: bool = True,
) -> BranchKey:
    """Parse ``"OPD1;OPB2"`` (":" also accepted) into an operation chain."""
    if not text or not text.strip():
        raise BranchKeyError("branch key text must be nonempty")
    ops = []
    for segment in _SPLIT_RE.split(text):
        label = segment.strip()
        if not label:
            raise BranchKeyError(f"empty segment in branch key {text!r}")
        ops.append(resolve_label(label, registry, auto_register))
    return BranchKey(tuple(ops))


def caller_of(key: BranchKey, entry_label: str = DEFAULT_ENTRY_LABEL) -> str:
    """Service issuing the final call of ``key``; the entry pseudo-service for roots."""
    if len(key.ops) == 1:
        return entry_label
    return key.ops[-2].service


@dataclass(frozen=True)
class BranchEntry:
    """A branch key plus the request count observed on its final edge."""

    key: BranchKey
    count: int

    def __post_init__(self) -> None:
        if isinstance(self.count, bool) or not isinstance(self.count, int):
            raise SnapshotBuildError(f"branch count must be an integer, got {self.count!r}")
        if not 0 <= self.count <= MAX_COUNT:
            raise SnapshotBuildError(f"branch count out of range: {self.count}")


@dataclass(frozen=True)
class CallPath:
    """All branches sharing one root operation: one kind of user activity."""

    id: int
    root: OperationId
    branches: tuple[BranchEntry, ...]

    @cached_property
    def counts(self) -> dict[str, int]:
        """Rendered branch key -> count."""
        return {entry.key.render(): entry.count for entry in self.branches}

    @cached_property
    def op_labels(self) -> frozenset[str]:
        """Labels of every operation occurring anywhere in this path's keys."""
        return frozenset(label for entry in self.branches for label in entry.key.labels)

    @cached_property
    def weight(self) -> int:
        """Total requests observed on this path (sum of all branch counts)."""
        return sum(entry.count for entry in self.branches)


@dataclass(frozen=True)
class Snapshot:
    """Immutable aggregate of all observed call paths in one time window.

    Safe to share across concurrent readers; all derived tables are computed
    once and never mutated.
    """

    paths: tuple[CallPath, ...]
    entry_label: str = DEFAULT_ENTRY_LABEL

    @cached_property
    def grand_total(self) -> int:
        """Total number of requests stored in the window."""
        return sum(path.weight for path in self.paths)

    @cached_property
    def caller_totals(self) -> dict[str, int]:
        """Requests issued per caller service (entry pseudo-service included)."""
        totals: dict[str, int] = {}
        for path in self.paths:
            for entry in path.branches:
                caller = caller_of(entry.key, self.entry_label)
                totals[caller] = totals.get(caller, 0) + entry.count
        return totals

    @cached_property
    def branch_counts(self) -> dict[str, int]:
        """Rendered branch key -> count, across all paths."""
        counts: dict[str, int] = {}
        for path in self.paths:
            counts.update(path.counts)
        return counts

    @cached_property
    def operations(self) -> dict[str, OperationId]:
        """Label -> operation, over every operation appearing in any key."""
        ops: dict[str, OperationId] = {}
        for path in self.paths:
            for entry in path.branches:
                for op in entry.key.ops:
                    ops.setdefault(op.label, op)
        return ops

    @cached_property
    def services(self) -> tuple[str, ...]:
        """Sorted supplier services (the entry pseudo-service is not listed)."""
        return tuple(sorted({op.service for op in self.operations.values()}))

    def path_by_id(self, path_id: int) -> CallPath | None:
        for path in self.paths:
            if path.id == path_id:
                return path
        return None


def coefficient(snapshot: Snapshot, caller: str) -> float:
    """The caller's share of all requests in the window; 0 for unknown callers."""
    if snapshot.grand_total == 0:
        raise EmptySnapshotError("caller coefficients are undefined for an empty snapshot")
    return snapshot.caller_totals.get(caller, 0) / snapshot.grand_total


def build_snapshot(
    rows: Iterable[tuple[int, BranchKey, int]],
    entry_label: str = DEFAULT_ENTRY_LABEL,
) -> Snapshot:
    """Group ``(path id, branch key, count)`` rows into an immutable snapshot.

    Rows may arrive in any order. Missing chain prefixes are materialized
    with count 0 (and a ``SnapshotWarning``) so every stored branch can be
    decomposed edge by edge.
    """
    grouped: dict[int, dict[str, BranchEntry]] = {}
    roots: dict[int, OperationId] = {}
    for path_id, key, count in rows:
        if isinstance(path_id, bool) or not isinstance(path_id, int) or path_id < 1:
            raise SnapshotBuildError(f"path id must be a positive integer, got {path_id!r}")
        entry = BranchEntry(key=key, count=count)
        branches = grouped.setdefault(path_id, {})
        root = roots.setdefault(path_id, key.root)
        if key.root.label != root.label:
            raise SnapshotBuildError(
                f"path {path_id} mixes roots {root.label!r} and {key.root.label!r}"
            )
        rendered = key.render()
        if rendered in branches:
            raise SnapshotBuildError(f"branch {rendered!r} listed twice in path {path_id}")
        branches[rendered] = entry

    seen_roots: dict[str, int] = {}
    for path_id, root in roots.items():
        other = seen_roots.setdefault(root.label, path_id)
        if other != path_id:
            raise SnapshotBuildError(
                f"paths {other} and {path_id} share the same root operation {root.label!r}"
            )

    paths = []
    for path_id in sorted(grouped):
        branches = grouped[path_id]
        for rendered in list(branches):
            key = branches[rendered].key
            for length in range(1, len(key)):
                prefix = key.prefix(length)
                prefix_rendered = prefix.render()
                if prefix_rendered not in branches:
                    warnings.warn(
                        f"path {path_id}: materializing missing prefix "
                        f"{prefix_rendered!r} with count 0",
                        SnapshotWarning,
                        stacklevel=2,
                    )
                    branches[prefix_rendered] = BranchEntry(key=prefix, count=0)
        for entry in branches.values():
            for op in entry.key.ops:
                if op.service == entry_label:
                    raise SnapshotBuildError(
                        f"service name collides with entry label {entry_label!r}"
                    )
        ordered = tuple(branches[rendered] for rendered in sorted(branches))
        paths.append(CallPath(id=path_id, root=roots[path_id], branches=ordered))

    return Snapshot(paths=tuple(paths), entry_label=entry_label)


def snapshot_warnings(snapshot: Snapshot) -> list[str]:
    """Advisory oddities: child edges busier than their parent edge.

    Fan-out multiplicity makes this legitimate, so it is never an error.
    """
    notes = []
    for path in snapshot.paths:
        for entry in path.branches:
            if len(entry.key) < 2:
                continue
            parent = entry.key.prefix(len(entry.key) - 1)
            parent_count = path.counts[parent.render()]
            if entry.count > parent_count:
                notes.append(
                    f"path {path.id}: {entry.key.render()} count {entry.count} exceeds "
                    f"parent count {parent_count}"
                )
    return notes


def merge_snapshots(a: Snapshot, b: Snapshot) -> Snapshot:
    """Combine two windows by summing counts of equal branch keys.

    Paths with equal roots merge. When the two windows disagree on path ids,
    all merged paths are re-numbered 1..n by root label order.
    """
    if a.entry_label != b.entry_label:
        raise SnapshotBuildError(
            f"cannot merge snapshots with entry labels {a.entry_label!r} and {b.entry_label!r}"
        )
    merged: dict[str, dict[str, tuple[BranchKey, int]]] = {}
    ids: dict[str, set[int]] = {}
    id_roots: dict[int, set[str]] = {}
    for snapshot in (a, b):
        for path in snapshot.paths:
            root_label = path.root.label
            branches = merged.setdefault(root_label, {})
            ids.setdefault(root_label, set()).add(path.id)
            id_roots.setdefault(path.id, set()).add(root_label)
            for entry in path.branches:
                rendered = entry.key.render()
                key, count = branches.get(rendered, (entry.key, 0))
                branches[rendered] = (key, count + entry.count)

    conflict = any(len(v) > 1 for v in ids.values()) or any(
        len(v) > 1 for v in id_roots.values()
    )
    if conflict:
        assigned = {root: i for i, root in enumerate(sorted(merged), start=1)}
    else:
        assigned = {root: next(iter(ids[root])) for root in merged}

    rows = [
        (assigned[root], key, count)
        for root, branches in merged.items()
        for key, count in branches.values()
    ]
    return build_snapshot(rows, entry_label=a.entry_label)
