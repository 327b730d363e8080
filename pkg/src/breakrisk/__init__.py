"""Change-risk scoring for microservice systems from distributed-trace call paths."""

from .errors import (
    BranchKeyError,
    BreakRiskError,
    EmptySnapshotError,
    MspFormatError,
    SnapshotBuildError,
    SpanParseError,
    TopologySpecError,
    TraceAssemblyError,
    UnknownBranchError,
    UnknownFixtureError,
)
from .fixtures import FIXTURE_IDS, builtin_fixture
from .ingest import (
    IngestConfig,
    IngestReport,
    SpanKind,
    SpanRecord,
    TraceTree,
    assemble_traces,
    chains_from_trace,
    ingest_spans,
    parse_spans,
    snapshot_from_traces,
)
from .model import (
    DEFAULT_ENTRY_LABEL,
    BranchEntry,
    BranchKey,
    CallPath,
    OperationId,
    Snapshot,
    SnapshotWarning,
    build_snapshot,
    caller_of,
    coefficient,
    infer_operation,
    merge_snapshots,
    parse_branch_key,
)
from .oracle import oracle_risk
from .risk import (
    DEFAULT_MODE,
    BranchHit,
    BreakingSet,
    RiskMode,
    RiskReport,
    affected_paths,
    branch_contains,
    risk,
    risk_affected_paths,
    risk_branch_literal,
    risk_branch_literal_weighted,
    risk_literal,
    sweep_single_ops,
)
from .simulate import (
    PathTemplate,
    TopologySpec,
    generate_traces,
    random_breaking_set,
    random_snapshot,
    spec_from_snapshot,
)
from .store import dumps_msp, load_msp, loads_msp, save_msp

__version__ = "0.1.0"

__all__ = [
    "BranchEntry",
    "BranchHit",
    "BranchKey",
    "BranchKeyError",
    "BreakRiskError",
    "BreakingSet",
    "CallPath",
    "DEFAULT_ENTRY_LABEL",
    "DEFAULT_MODE",
    "EmptySnapshotError",
    "FIXTURE_IDS",
    "IngestConfig",
    "IngestReport",
    "MspFormatError",
    "OperationId",
    "PathTemplate",
    "RiskMode",
    "RiskReport",
    "Snapshot",
    "SnapshotBuildError",
    "SnapshotWarning",
    "SpanKind",
    "SpanParseError",
    "SpanRecord",
    "TopologySpec",
    "TopologySpecError",
    "TraceAssemblyError",
    "TraceTree",
    "UnknownBranchError",
    "UnknownFixtureError",
    "affected_paths",
    "assemble_traces",
    "branch_contains",
    "build_snapshot",
    "builtin_fixture",
    "caller_of",
    "chains_from_trace",
    "coefficient",
    "dumps_msp",
    "generate_traces",
    "infer_operation",
    "ingest_spans",
    "load_msp",
    "loads_msp",
    "merge_snapshots",
    "oracle_risk",
    "parse_branch_key",
    "parse_spans",
    "random_breaking_set",
    "random_snapshot",
    "risk",
    "risk_affected_paths",
    "risk_branch_literal",
    "risk_branch_literal_weighted",
    "risk_literal",
    "save_msp",
    "snapshot_from_traces",
    "spec_from_snapshot",
    "sweep_single_ops",
    "__version__",
]
