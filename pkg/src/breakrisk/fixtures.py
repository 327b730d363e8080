"""Built-in example snapshots used by tests, the CLI, and the service."""

from __future__ import annotations

from functools import lru_cache

from .errors import UnknownFixtureError
from .model import Snapshot, build_snapshot, parse_branch_key

# rows: (path id, branch key, count) on a seven-service topology (A..G)
# behind one entry point. mce0/mce1 carry comparable traffic; mce2 puts an
# order of magnitude more traffic on path 1. "p3-prose" is a small
# single-path variant of path 3 with its own counts.
_FIXTURE_ROWS: dict[str, tuple[tuple[int, str, int], ...]] = {
    "mce0": (
        (1, "OPA1", 32),
        (1, "OPA1;OPB1", 20),
        (1, "OPA1;OPB1;OPC1", 18),
        (2, "OPD2", 65),
        (2, "OPD2;OPB1", 44),
        (2, "OPD2;OPB1;OPC1", 41),
        (3, "OPD1", 23),
        (3, "OPD1;OPB2", 20),
        (3, "OPD1;OPG1", 12),
        (3, "OPD1;OPB2;OPE1", 15),
        (4, "OPF1", 52),
        (4, "OPF1;OPE1", 43),
    ),
    "mce1": (
        (1, "OPA1", 60),
        (1, "OPA1;OPB1", 42),
        (1, "OPA1;OPB1;OPC1", 42),
        (2, "OPD2", 23),
        (2, "OPD2;OPB1", 18),
        (2, "OPD2;OPB1;OPC1", 14),
        (3, "OPD1", 59),
        (3, "OPD1;OPB2", 48),
        (3, "OPD1;OPG1", 44),
        (3, "OPD1;OPB2;OPE1", 33),
        (4, "OPF1", 21),
        (4, "OPF1;OPE1", 20),
    ),
    "mce2": (
        (1, "OPA1", 400),
        (1, "OPA1;OPB1", 340),
        (1, "OPA1;OPB1;OPC1", 290),
        (2, "OPD2", 38),
        (2, "OPD2;OPB1", 36),
        (2, "OPD2;OPB1;OPC1", 27),
        (3, "OPD1", 40),
        (3, "OPD1;OPB2", 36),
        (3, "OPD1;OPG1", 28),
        (3, "OPD1;OPB2;OPE1", 10),
        (4, "OPF1", 34),
        (4, "OPF1;OPE1", 29),
    ),
    "p3-prose": (
        (1, "OPD1", 45),
        (1, "OPD1;OPB2", 34),
        (1, "OPD1;OPG1", 24),
        (1, "OPD1;OPB2;OPE1", 20),
    ),
}

FIXTURE_IDS: tuple[str, ...] = tuple(_FIXTURE_ROWS)


@lru_cache(maxsize=None)
def builtin_fixture(fixture_id: str) -> Snapshot:
    """Return one of the bundled example snapshots by id."""
    try:
        rows = _FIXTURE_ROWS[fixture_id]
    except KeyError:
        known = ", ".join(FIXTURE_IDS)
        raise UnknownFixtureError(f"unknown fixture {fixture_id!r} (known: {known})") from None
    registry: dict = {}
    return build_snapshot(
        (path_id, parse_branch_key(text, registry), count) for path_id, text, count in rows
    )
