"""Span-export ingestion: parse spans, reassemble traces, accumulate chains.

Call chains are recovered from span kinds: server-kind spans mark the hops
a request has taken into a service, and every client-kind span records one
outbound call whose callee is named by its paired server child (or, for
uninstrumented callees, by the client span's own operation name). Each
observed call becomes a +1 increment for its branch key; the increments of
all accepted traces add up to a snapshot.
"""

from __future__ import annotations

import enum
import json
import re
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .errors import BranchKeyError, SpanParseError, TraceAssemblyError
from .model import (
    DEFAULT_ENTRY_LABEL,
    BranchKey,
    OperationId,
    Snapshot,
    _COMPACT_LABEL_RE,
    build_snapshot,
)


class IngestWarning(UserWarning):
    """Non-fatal irregularity met while extracting chains from a trace."""


class SpanKind(str, enum.Enum):
    CLIENT = "client"
    SERVER = "server"
    INTERNAL = "internal"
    OTHER = "other"


_OTLP_KIND_NAMES = {
    "SPAN_KIND_CLIENT": SpanKind.CLIENT,
    "SPAN_KIND_SERVER": SpanKind.SERVER,
    "SPAN_KIND_INTERNAL": SpanKind.INTERNAL,
}
_OTLP_KIND_CODES = {3: SpanKind.CLIENT, 2: SpanKind.SERVER, 1: SpanKind.INTERNAL}

_SANITIZE_RE = re.compile(r"[;:]")


@dataclass(frozen=True)
class SpanRecord:
    """One unit of work inside a trace."""

    trace_id: str
    span_id: str
    parent_span_id: str | None
    service: str
    op_name: str
    kind: SpanKind
    start_ns: int
    end_ns: int

    def __post_init__(self) -> None:
        if not self.trace_id:
            raise SpanParseError("span is missing its trace id")
        if not self.span_id:
            raise SpanParseError("span is missing its span id")
        if not self.service:
            raise SpanParseError(f"span {self.span_id!r} has no service name")
        if not self.op_name:
            raise SpanParseError(f"span {self.span_id!r} has no operation name")
        if self.end_ns < self.start_ns:
            raise SpanParseError(f"span {self.span_id!r} ends before it starts")


@dataclass(frozen=True)
class TraceTree:
    """One reassembled trace: a single root span plus parent->children adjacency."""

    trace_id: str
    root: SpanRecord
    children: Mapping[str, tuple[SpanRecord, ...]]


def default_operation_mapping(service: str, op_name: str) -> OperationId:
    """Map a span's (service, operation name) onto an operation identity.

    Operation names carrying a full compact label (e.g. ``OPB2``) keep their
    embedded supplier service; anything else is attributed to the span's own
    service with separators sanitized out.
    """
    match = _COMPACT_LABEL_RE.fullmatch(op_name)
    if match:
        return OperationId(match.group(1), match.group(2))
    clean_service = _SANITIZE_RE.sub("_", service.replace(".", "_"))
    clean_name = _SANITIZE_RE.sub("_", op_name)
    return OperationId(clean_service, clean_name)


@dataclass(frozen=True)
class IngestConfig:
    """Knobs for trace reassembly and operation mapping."""

    entry_label: str = DEFAULT_ENTRY_LABEL
    window: tuple[int, int] | None = None  # [start_ns, end_ns) on the root span
    on_orphan: str = "drop"  # or "reject": abort on the first malformed trace
    map_operation: Callable[[str, str], OperationId | None] = default_operation_mapping
    client_fallback_prefix: str = ""  # prepended to op names taken from client spans

    def __post_init__(self) -> None:
        if self.on_orphan not in ("drop", "reject"):
            raise ValueError(f"on_orphan must be 'drop' or 'reject', got {self.on_orphan!r}")


@dataclass
class IngestReport:
    """Counters describing one ingestion run."""

    accepted: int = 0
    dropped: int = 0
    unmappable_spans: int = 0
    loops_skipped: int = 0
    filtered_out: int = 0
    drop_reasons: dict[str, int] = field(default_factory=dict)

    def note_drop(self, reason: str) -> None:
        self.dropped += 1
        self.drop_reasons[reason] = self.drop_reasons.get(reason, 0) + 1

    def merge(self, other: "IngestReport") -> None:
        self.accepted += other.accepted
        self.dropped += other.dropped
        self.unmappable_spans += other.unmappable_spans
        self.loops_skipped += other.loops_skipped
        self.filtered_out += other.filtered_out
        for reason, count in other.drop_reasons.items():
            self.drop_reasons[reason] = self.drop_reasons.get(reason, 0) + count

    def as_doc(self) -> dict:
        return {
            "accepted": self.accepted,
            "dropped": self.dropped,
            "unmappable": self.unmappable_spans,
            "loops_skipped": self.loops_skipped,
            "filtered_out": self.filtered_out,
            "drop_reasons": {k: self.drop_reasons[k] for k in sorted(self.drop_reasons)},
        }


def parse_spans(data: "bytes | str", format: str) -> list[SpanRecord]:
    """Parse a span export in the declared format ("otlp-json" or "jsonl")."""
    if format == "otlp-json":
        return parse_otlp_json(data)
    if format == "jsonl":
        return parse_jsonl(data)
    raise SpanParseError(f"unknown span export format {format!r}")


def _decode(data: "bytes | str") -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SpanParseError(f"input is not valid UTF-8: {exc}") from exc
    return data


def _otlp_kind(raw: object) -> SpanKind:
    if isinstance(raw, str) and raw in _OTLP_KIND_NAMES:
        return _OTLP_KIND_NAMES[raw]
    if isinstance(raw, int) and raw in _OTLP_KIND_CODES:
        return _OTLP_KIND_CODES[raw]
    return SpanKind.OTHER


def _otlp_nanos(raw: object, what: str) -> int:
    # OTLP JSON encodes uint64 timestamps as strings; ints also appear
    if raw is None:
        return 0
    try:
        return int(raw)
    except (TypeError, ValueError) as exc:
        raise SpanParseError(f"bad {what} value {raw!r}") from exc


def _resource_service(resource_spans: dict) -> str:
    resource = resource_spans.get("resource", {})
    if isinstance(resource, dict):
        for attr in resource.get("attributes", []) or []:
            if isinstance(attr, dict) and attr.get("key") == "service.name":
                value = attr.get("value", {})
                if isinstance(value, dict):
                    name = value.get("stringValue", "")
                    if isinstance(name, str):
                        return name
    return ""


def parse_otlp_json(data: "bytes | str") -> list[SpanRecord]:
    """Parse the resourceSpans/scopeSpans/spans subset of an OTLP JSON export."""
    try:
        doc = json.loads(_decode(data))
    except json.JSONDecodeError as exc:
        raise SpanParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SpanParseError("OTLP export must be a JSON object")
    records = []
    for resource_spans in doc.get("resourceSpans", []) or []:
        if not isinstance(resource_spans, dict):
            raise SpanParseError("resourceSpans entries must be objects")
        service = _resource_service(resource_spans)
        if not service:
            raise SpanParseError("resource has no service.name attribute")
        for scope_spans in resource_spans.get("scopeSpans", []) or []:
            if not isinstance(scope_spans, dict):
                raise SpanParseError("scopeSpans entries must be objects")
            for span in scope_spans.get("spans", []) or []:
                if not isinstance(span, dict):
                    raise SpanParseError("span entries must be objects")
                records.append(
                    SpanRecord(
                        trace_id=str(span.get("traceId", "") or ""),
                        span_id=str(span.get("spanId", "") or ""),
                        parent_span_id=str(span.get("parentSpanId", "") or "") or None,
                        service=service,
                        op_name=str(span.get("name", "") or ""),
                        kind=_otlp_kind(span.get("kind")),
                        start_ns=_otlp_nanos(span.get("startTimeUnixNano"), "startTimeUnixNano"),
                        end_ns=_otlp_nanos(span.get("endTimeUnixNano"), "endTimeUnixNano"),
                    )
                )
    return records


_JSONL_KINDS = {kind.value: kind for kind in SpanKind}


def parse_jsonl(data: "bytes | str") -> list[SpanRecord]:
    """Parse newline-delimited span objects (one JSON object per line)."""
    records = []
    for lineno, line in enumerate(_decode(data).splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SpanParseError(f"line {lineno}: not valid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise SpanParseError(f"line {lineno}: span must be a JSON object")
        kind = _JSONL_KINDS.get(str(obj.get("kind", "")).lower(), SpanKind.OTHER)
        try:
            records.append(
                SpanRecord(
                    trace_id=str(obj.get("trace_id", "") or ""),
                    span_id=str(obj.get("span_id", "") or ""),
                    parent_span_id=str(obj.get("parent_span_id", "") or "") or None,
                    service=str(obj.get("service", "") or ""),
                    op_name=str(obj.get("name", "") or ""),
                    kind=kind,
                    start_ns=int(obj.get("start_ns", 0) or 0),
                    end_ns=int(obj.get("end_ns", 0) or 0),
                )
            )
        except SpanParseError as exc:
            raise SpanParseError(f"line {lineno}: {exc}") from None
    return records


def _trace_problem(spans: list[SpanRecord]) -> str | None:
    ids = [span.span_id for span in spans]
    id_set = set(ids)
    if len(id_set) != len(ids):
        return "duplicate span id"
    roots = [span for span in spans if span.parent_span_id is None]
    orphans = [
        span
        for span in spans
        if span.parent_span_id is not None and span.parent_span_id not in id_set
    ]
    if orphans:
        return "missing parent"
    if not roots:
        return "no root"
    if len(roots) > 1:
        return "multiple roots"
    children: dict[str, list[SpanRecord]] = {}
    for span in spans:
        if span.parent_span_id is not None:
            children.setdefault(span.parent_span_id, []).append(span)
    reached = 0
    stack = [roots[0]]
    while stack:
        span = stack.pop()
        reached += 1
        stack.extend(children.get(span.span_id, ()))
    if reached != len(spans):
        return "cycle"
    return None


def assemble_traces(
    records: Iterable[SpanRecord], cfg: IngestConfig = IngestConfig()
) -> tuple[list[TraceTree], IngestReport]:
    """Group spans by trace id and build one tree per structurally valid trace.

    Traces are processed in sorted trace-id order and spans in start-time
    order, so the result does not depend on input ordering.
    """
    report = IngestReport()
    by_trace: dict[str, list[SpanRecord]] = {}
    for record in records:
        by_trace.setdefault(record.trace_id, []).append(record)

    trees = []
    for trace_id in sorted(by_trace):
        spans = sorted(by_trace[trace_id], key=lambda s: (s.start_ns, s.span_id))
        problem = _trace_problem(spans)
        if problem:
            if cfg.on_orphan == "reject":
                raise TraceAssemblyError(f"trace {trace_id!r}: {problem}")
            report.note_drop(problem)
            continue
        root = next(span for span in spans if span.parent_span_id is None)
        if cfg.window is not None:
            start, end = cfg.window
            if not start <= root.start_ns < end:
                report.filtered_out += 1
                continue
        children: dict[str, tuple[SpanRecord, ...]] = {}
        for span in spans:
            if span.parent_span_id is not None:
                children[span.parent_span_id] = children.get(span.parent_span_id, ()) + (span,)
        trees.append(TraceTree(trace_id=trace_id, root=root, children=children))
        report.accepted += 1
    return trees, report


@dataclass
class ChainExtraction:
    """Branch-key increments recovered from one trace, plus skip counters."""

    increments: list[BranchKey]
    loops_skipped: int = 0
    unmappable_spans: int = 0


def chains_from_trace(tree: TraceTree, cfg: IngestConfig = IngestConfig()) -> ChainExtraction:
    """One +1 increment per observed call: the root call plus every client span.

    Server-kind spans extend the hop chain their descendants inherit;
    internal and other kinds are transparent. Chains that would repeat an
    operation are skipped with a loop warning.
    """
    result = ChainExtraction(increments=[])

    def callee_operation(span: SpanRecord) -> OperationId | None:
        for child in tree.children.get(span.span_id, ()):
            if child.kind is SpanKind.SERVER:
                return cfg.map_operation(child.service, child.op_name)
        # uninstrumented callee: fall back to the client span's own op name
        return cfg.map_operation(span.service, cfg.client_fallback_prefix + span.op_name)

    def record(ops: tuple[OperationId, ...]) -> None:
        try:
            result.increments.append(BranchKey(ops))
        except BranchKeyError:
            result.loops_skipped += 1
            rendered = ";".join(op.label for op in ops)
            warnings.warn(
                f"trace {tree.trace_id!r}: skipping looping chain {rendered!r}",
                IngestWarning,
                stacklevel=2,
            )

    stack: list[tuple[SpanRecord, tuple[OperationId, ...]]] = [(tree.root, ())]
    while stack:
        span, inherited = stack.pop()
        chain = inherited
        if span.kind is SpanKind.SERVER:
            op = cfg.map_operation(span.service, span.op_name)
            if op is None:
                result.unmappable_spans += 1
            else:
                chain = inherited + (op,)
                if span is tree.root:
                    record(chain)
        elif span.kind is SpanKind.CLIENT:
            callee = callee_operation(span)
            if callee is None:
                result.unmappable_spans += 1
            else:
                record(inherited + (callee,))
        for child in reversed(tree.children.get(span.span_id, ())):
            stack.append((child, chain))
    return result


def snapshot_from_traces(
    trees: Iterable[TraceTree],
    cfg: IngestConfig = IngestConfig(),
    report: IngestReport | None = None,
) -> tuple[Snapshot, IngestReport]:
    """Accumulate chain increments from every tree into one snapshot.

    Path ids follow first-seen root order over the (already canonically
    ordered) tree sequence.
    """
    trees = list(trees)
    if report is None:
        report = IngestReport(accepted=len(trees))
    counts: dict[BranchKey, int] = {}
    path_ids: dict[str, int] = {}
    for tree in trees:
        extraction = chains_from_trace(tree, cfg)
        report.unmappable_spans += extraction.unmappable_spans
        report.loops_skipped += extraction.loops_skipped
        for key in extraction.increments:
            root_label = key.root.label
            if root_label not in path_ids:
                path_ids[root_label] = len(path_ids) + 1
            counts[key] = counts.get(key, 0) + 1
    rows = [(path_ids[key.root.label], key, count) for key, count in counts.items()]
    snapshot = build_snapshot(rows, entry_label=cfg.entry_label)
    return snapshot, report


def ingest_spans(
    records: Iterable[SpanRecord], cfg: IngestConfig = IngestConfig()
) -> tuple[Snapshot, IngestReport]:
    """End to end: reassemble traces and accumulate them into a snapshot."""
    trees, report = assemble_traces(records, cfg)
    snapshot, report = snapshot_from_traces(trees, cfg, report)
    return snapshot, report
