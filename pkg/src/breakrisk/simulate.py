"""Synthetic workloads: topology specs, deterministic trace generation,
span exporters, and random snapshots for property tests.

Exact-count templates replay a wanted per-branch multiplicity precisely:
every call instance of a child branch is attached round-robin to the call
instances of its parent branch, so reassembling the emitted spans yields
the template counts bit for bit. Weighted templates draw call fan-out from
a seeded RNG instead.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .errors import TopologySpecError
from .ingest import SpanKind, SpanRecord
from .model import (
    DEFAULT_ENTRY_LABEL,
    BranchKey,
    OperationId,
    Snapshot,
    build_snapshot,
    parse_branch_key,
)

_TRACE_NS = 1_000_000  # nominal duration budget per generated trace


def _canonical_branch_map(path_id: int, raw: dict) -> dict:
    """Re-key a template's branch map by canonical rendering (";" separated)."""
    canonical: dict = {}
    for text, value in raw.items():
        rendered = parse_branch_key(text).render()
        if rendered in canonical:
            raise TopologySpecError(f"path {path_id}: branch {rendered!r} listed twice")
        canonical[rendered] = value
    return canonical


@dataclass(frozen=True)
class PathTemplate:
    """One path's branch keys with exact target counts or per-call weights."""

    id: int
    branches: dict[str, int] | None = None
    branch_weights: dict[str, float] | None = None

    def __post_init__(self) -> None:
        if (self.branches is None) == (self.branch_weights is None):
            raise TopologySpecError(
                f"path {self.id}: exactly one of branches / branch_weights must be set"
            )
        if self.branches is not None:
            object.__setattr__(self, "branches", _canonical_branch_map(self.id, self.branches))
        else:
            object.__setattr__(
                self, "branch_weights", _canonical_branch_map(self.id, self.branch_weights)
            )

    @property
    def keys(self) -> list[str]:
        source = self.branches if self.branches is not None else self.branch_weights
        return list(source)


@dataclass(frozen=True)
class TopologySpec:
    """A generatable system shape: paths over declared services and operations."""

    paths: tuple[PathTemplate, ...]
    seed: int = 0
    entry_label: str = DEFAULT_ENTRY_LABEL
    services: tuple[str, ...] = ()
    operations: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "paths", tuple(self.paths))
        object.__setattr__(self, "services", tuple(self.services))
        object.__setattr__(self, "operations", tuple(self.operations))
        self._validate()

    def _validate(self) -> None:
        seen_ids: set[int] = set()
        seen_roots: set[str] = set()
        for template in self.paths:
            if template.id in seen_ids:
                raise TopologySpecError(f"duplicate path id {template.id}")
            seen_ids.add(template.id)
            keys = [parse_branch_key(text) for text in template.keys]
            if not keys:
                raise TopologySpecError(f"path {template.id}: no branches")
            roots = {key.root.label for key in keys}
            if len(roots) != 1:
                raise TopologySpecError(f"path {template.id}: branches mix roots {roots}")
            root = roots.pop()
            if root in seen_roots:
                raise TopologySpecError(f"root {root!r} appears in more than one path")
            seen_roots.add(root)
            rendered = {key.render() for key in keys}
            for key in keys:
                for length in range(1, len(key)):
                    prefix = key.prefix(length).render()
                    if prefix not in rendered:
                        raise TopologySpecError(
                            f"path {template.id}: missing prefix {prefix!r} "
                            f"(templates must be prefix-closed)"
                        )
            if self.operations:
                for key in keys:
                    for label in key.labels:
                        if label not in self.operations:
                            raise TopologySpecError(
                                f"path {template.id}: operation {label!r} not declared"
                            )
            if self.services:
                for key in keys:
                    for op in key.ops:
                        if op.service not in self.services:
                            raise TopologySpecError(
                                f"path {template.id}: service {op.service!r} not declared"
                            )

    @property
    def exact(self) -> bool:
        return all(template.branches is not None for template in self.paths)


def spec_from_snapshot(snapshot: Snapshot, seed: int = 0) -> TopologySpec:
    """Exact-count template matching a snapshot's stored rows."""
    return TopologySpec(
        paths=tuple(
            PathTemplate(id=path.id, branches=dict(path.counts)) for path in snapshot.paths
        ),
        seed=seed,
        entry_label=snapshot.entry_label,
    )


def snapshot_from_spec(spec: TopologySpec) -> Snapshot:
    """The snapshot an exact-count spec describes (without generating spans)."""
    if not spec.exact:
        raise TopologySpecError("only exact-count specs map directly to a snapshot")
    rows = []
    for template in spec.paths:
        assert template.branches is not None
        for text, count in template.branches.items():
            rows.append((template.id, parse_branch_key(text), count))
    return build_snapshot(rows, entry_label=spec.entry_label)


def load_topology_spec(path: "str | Path") -> TopologySpec:
    return topology_spec_from_doc(json.loads(Path(path).read_text(encoding="utf-8")))


def topology_spec_from_doc(doc: dict) -> TopologySpec:
    if not isinstance(doc, dict):
        raise TopologySpecError("topology spec must be a JSON object")
    templates = []
    for item in doc.get("paths", []):
        templates.append(
            PathTemplate(
                id=item["id"],
                branches=item.get("branches"),
                branch_weights=item.get("branch_weights"),
            )
        )
    return TopologySpec(
        paths=tuple(templates),
        seed=int(doc.get("seed", 0)),
        entry_label=doc.get("entry_label", DEFAULT_ENTRY_LABEL),
        services=tuple(doc.get("services", ())),
        operations=tuple(doc.get("operations", ())),
    )


def topology_spec_to_doc(spec: TopologySpec) -> dict:
    doc: dict = {"seed": spec.seed, "entry_label": spec.entry_label, "paths": []}
    if spec.services:
        doc["services"] = list(spec.services)
    if spec.operations:
        doc["operations"] = list(spec.operations)
    for template in spec.paths:
        item: dict = {"id": template.id}
        if template.branches is not None:
            item["branches"] = dict(template.branches)
        else:
            item["branch_weights"] = dict(template.branch_weights or {})
        doc["paths"].append(item)
    return doc


@dataclass
class _TraceBuilder:
    """Accumulates the spans of one synthetic trace."""

    trace_id: str
    base_ns: int
    spans: list[SpanRecord] = field(default_factory=list)
    next_span: int = 0

    def add(
        self,
        parent: str | None,
        service: str,
        op_name: str,
        kind: SpanKind,
        depth: int,
    ) -> str:
        span_id = f"s{self.next_span:04d}"
        self.next_span += 1
        start = self.base_ns + depth * 1000 + len(self.spans) * 10
        self.spans.append(
            SpanRecord(
                trace_id=self.trace_id,
                span_id=span_id,
                parent_span_id=parent,
                service=service,
                op_name=op_name,
                kind=kind,
                start_ns=start,
                end_ns=start + 5,
            )
        )
        return span_id


def _emit_call(builder: _TraceBuilder, parent_span: str, op: OperationId, depth: int) -> str:
    """A client/server span pair for one call; returns the server span id."""
    parent_service = next(s.service for s in builder.spans if s.span_id == parent_span)
    client = builder.add(parent_span, parent_service, op.label, SpanKind.CLIENT, depth)
    server = builder.add(client, op.service, op.name, SpanKind.SERVER, depth)
    return server


def generate_traces(spec: TopologySpec, n_requests: int | None = None) -> list[SpanRecord]:
    """Emit spans whose reassembly reproduces the spec's multiplicities.

    Exact-count specs ignore ``n_requests`` unless it disagrees with the
    templates' root counts, which is an error. Weighted specs require it.
    Output is fully deterministic for a fixed seed.
    """
    if n_requests is not None and n_requests < 0:
        raise TopologySpecError("n_requests must be nonnegative")
    if spec.exact:
        total_roots = 0
        for template in spec.paths:
            assert template.branches is not None
            root = _ordered_keys(template)[0]  # prefix closure guarantees the root row
            total_roots += template.branches[root.render()]
        if n_requests is not None and n_requests != total_roots:
            raise TopologySpecError(
                f"n_requests={n_requests} disagrees with template root counts ({total_roots})"
            )
        return _generate_exact(spec)
    if n_requests is None:
        raise TopologySpecError("weighted specs need an explicit n_requests")
    return _generate_weighted(spec, n_requests)


def _ordered_keys(template: PathTemplate) -> list[BranchKey]:
    keys = [parse_branch_key(text) for text in template.keys]
    keys.sort(key=lambda key: (len(key), key.render()))
    return keys


def _generate_exact(spec: TopologySpec) -> list[SpanRecord]:
    spans: list[SpanRecord] = []
    trace_index = 0
    for template in spec.paths:
        assert template.branches is not None
        keys = _ordered_keys(template)
        counts = {key.render(): template.branches[key.render()] for key in keys}
        root = keys[0]
        if len(root) != 1:
            raise TopologySpecError(f"path {template.id}: root key missing")
        root_count = counts[root.render()]
        deeper = [key for key in keys if len(key) > 1]
        if root_count == 0 and any(counts[key.render()] > 0 for key in deeper):
            raise TopologySpecError(
                f"path {template.id}: child calls requested but root count is 0"
            )
        builders = []
        # server span instances hosting child calls, per branch key
        instances: dict[str, list[tuple[int, str]]] = {root.render(): []}
        for i in range(root_count):
            builder = _TraceBuilder(
                trace_id=f"t{trace_index:08d}", base_ns=trace_index * _TRACE_NS
            )
            trace_index += 1
            root_span = builder.add(
                None, root.root.service, root.root.name, SpanKind.SERVER, depth=0
            )
            instances[root.render()].append((i, root_span))
            builders.append(builder)
        for key in deeper:
            count = counts[key.render()]
            parents = instances[key.prefix(len(key) - 1).render()]
            if count > 0 and not parents:
                raise TopologySpecError(
                    f"path {template.id}: no parent calls to host {key.render()!r}"
                )
            own: list[tuple[int, str]] = []
            for j in range(count):
                builder_index, parent_span = parents[j % len(parents)]
                server = _emit_call(
                    builders[builder_index], parent_span, key.ops[-1], depth=len(key) - 1
                )
                own.append((builder_index, server))
            instances[key.render()] = own
        for builder in builders:
            spans.extend(builder.spans)
    return spans


def _generate_weighted(spec: TopologySpec, n_requests: int) -> list[SpanRecord]:
    rng = random.Random(spec.seed)
    spans: list[SpanRecord] = []
    templates = list(spec.paths)
    roots = [_ordered_keys(t)[0] for t in templates]
    weights = []
    for template, root in zip(templates, roots):
        assert template.branch_weights is not None
        weights.append(max(template.branch_weights.get(root.render(), 0.0), 0.0))
    if n_requests and sum(weights) <= 0:
        raise TopologySpecError("weighted spec has no positive root weight")
    for trace_index in range(n_requests):
        pick = rng.choices(range(len(templates)), weights=weights, k=1)[0]
        template, root = templates[pick], roots[pick]
        assert template.branch_weights is not None
        builder = _TraceBuilder(trace_id=f"t{trace_index:08d}", base_ns=trace_index * _TRACE_NS)
        root_span = builder.add(None, root.root.service, root.root.name, SpanKind.SERVER, 0)
        instances = {root.render(): [root_span]}
        for key in _ordered_keys(template)[1:]:
            probability = min(max(template.branch_weights.get(key.render(), 0.0), 0.0), 1.0)
            own = []
            for parent_span in instances[key.prefix(len(key) - 1).render()]:
                if rng.random() < probability:
                    own.append(_emit_call(builder, parent_span, key.ops[-1], len(key) - 1))
            instances[key.render()] = own
        spans.extend(builder.spans)
    return spans


def spans_to_jsonl(records: list[SpanRecord]) -> str:
    """Serialize spans to the newline-delimited export format."""
    lines = []
    for record in records:
        lines.append(
            json.dumps(
                {
                    "trace_id": record.trace_id,
                    "span_id": record.span_id,
                    "parent_span_id": record.parent_span_id,
                    "service": record.service,
                    "name": record.op_name,
                    "kind": record.kind.value,
                    "start_ns": record.start_ns,
                    "end_ns": record.end_ns,
                },
                separators=(",", ":"),
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


_OTLP_KIND_OUT = {
    SpanKind.CLIENT: "SPAN_KIND_CLIENT",
    SpanKind.SERVER: "SPAN_KIND_SERVER",
    SpanKind.INTERNAL: "SPAN_KIND_INTERNAL",
    SpanKind.OTHER: "SPAN_KIND_UNSPECIFIED",
}


def spans_to_otlp_json(records: list[SpanRecord]) -> str:
    """Serialize spans to the OTLP JSON export subset, grouped by service."""
    by_service: dict[str, list[SpanRecord]] = {}
    for record in records:
        by_service.setdefault(record.service, []).append(record)
    resource_spans = []
    for service in sorted(by_service):
        spans = []
        for record in by_service[service]:
            span: dict = {
                "traceId": record.trace_id,
                "spanId": record.span_id,
                "name": record.op_name,
                "kind": _OTLP_KIND_OUT[record.kind],
                "startTimeUnixNano": str(record.start_ns),
                "endTimeUnixNano": str(record.end_ns),
            }
            if record.parent_span_id is not None:
                span["parentSpanId"] = record.parent_span_id
            spans.append(span)
        resource_spans.append(
            {
                "resource": {
                    "attributes": [
                        {"key": "service.name", "value": {"stringValue": service}}
                    ]
                },
                "scopeSpans": [{"scope": {"name": "breakrisk-sim"}, "spans": spans}],
            }
        )
    return json.dumps({"resourceSpans": resource_spans}, separators=(",", ":")) + "\n"


_SERVICE_POOL = ("A", "B", "C", "D", "E", "F", "G", "H")


def random_snapshot(
    rng: random.Random,
    max_services: int = 8,
    max_depth: int = 5,
    max_count: int = 1_000_000,
    ensure_traffic: bool = True,
) -> Snapshot:
    """A small random snapshot: fan-out, zero counts, and mixed magnitudes.

    Bounded to at most ``max_services`` services and ``max_depth`` chain
    levels so brute-force checking stays tractable.
    """
    n_services = rng.randint(1, max_services)
    services = _SERVICE_POOL[:n_services]
    operations = [
        OperationId(service, str(number))
        for service in services
        for number in range(1, rng.randint(1, 3) + 1)
    ]
    rng.shuffle(operations)
    n_paths = rng.randint(1, min(4, len(operations)))
    roots = operations[:n_paths]

    def draw_count() -> int:
        scale = rng.choice((10, 1000, max_count))
        return rng.randint(0, scale)

    rows = []
    for path_id, root in enumerate(roots, start=1):
        chains = [(root,)]
        frontier = [(root,)]
        target = rng.randint(1, 6)
        while frontier and len(chains) < target:
            parent = frontier.pop(rng.randrange(len(frontier)))
            if len(parent) >= max_depth:
                continue
            used = {op.label for op in parent}
            candidates = [op for op in operations if op.label not in used]
            rng.shuffle(candidates)
            for op in candidates[: rng.randint(0, 2)]:
                chain = parent + (op,)
                chains.append(chain)
                frontier.append(chain)
        for chain in chains:
            rows.append((path_id, BranchKey(chain), draw_count()))
    snapshot = build_snapshot(rows)
    if ensure_traffic and snapshot.grand_total == 0:
        path_id, key, _ = rows[0]
        rows[0] = (path_id, key, 1)
        snapshot = build_snapshot(rows)
    return snapshot


def random_breaking_set(rng: random.Random, snapshot: Snapshot, allow_unknown: bool = True):
    """1..4 labels drawn from the snapshot, occasionally plus an unknown one."""
    from .risk import BreakingSet

    labels = sorted(snapshot.operations)
    chosen = rng.sample(labels, k=min(len(labels), rng.randint(1, 4)))
    if allow_unknown and rng.random() < 0.2:
        chosen.append("OPZ9")
    return BreakingSet(chosen)
