"""Exception types shared across the package."""


class BreakRiskError(Exception):
    """Base class for all errors raised by this package."""


class BranchKeyError(BreakRiskError):
    """A branch key string or operation chain is malformed."""


class SnapshotBuildError(BreakRiskError):
    """Input rows cannot be assembled into a consistent snapshot."""


class EmptySnapshotError(BreakRiskError):
    """A query needs traffic data but the snapshot holds zero requests."""


class UnknownBranchError(BreakRiskError):
    """A branch key is not stored in the snapshot."""


class MspFormatError(BreakRiskError):
    """An MSP document cannot be parsed or carries an unsupported version."""


class UnknownFixtureError(BreakRiskError):
    """Requested built-in fixture id does not exist."""


class SpanParseError(BreakRiskError):
    """A span export document is malformed."""


class TraceAssemblyError(BreakRiskError):
    """A structurally invalid trace was met while ingesting in reject mode."""


class TopologySpecError(BreakRiskError):
    """A topology spec is inconsistent or cannot generate the requested traces."""
