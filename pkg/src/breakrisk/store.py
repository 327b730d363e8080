"""MSP snapshot persistence: a small versioned JSON document.

Canonical layout (always ";"-separated keys, paths ordered by id, branch
keys ordered lexicographically) so that equal snapshots serialize to equal
bytes:

    {"version":1,"entry_label":"ENTRY",
     "paths":[{"id":1,"root":"OPA1","branches":{"OPA1":32,...}},...]}

Unknown top-level fields are ignored; unknown versions are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import MspFormatError
from .model import (
    DEFAULT_ENTRY_LABEL,
    OperationId,
    Snapshot,
    build_snapshot,
    parse_branch_key,
)

FORMAT_VERSION = 1


def snapshot_to_doc(snapshot: Snapshot) -> dict:
    """Plain-data document for a snapshot, in canonical order."""
    return {
        "version": FORMAT_VERSION,
        "entry_label": snapshot.entry_label,
        "paths": [
            {
                "id": path.id,
                "root": path.root.label,
                "branches": {rendered: path.counts[rendered] for rendered in sorted(path.counts)},
            }
            for path in sorted(snapshot.paths, key=lambda p: p.id)
        ],
    }


def dumps_msp(snapshot: Snapshot) -> str:
    return json.dumps(snapshot_to_doc(snapshot), separators=(",", ":")) + "\n"


def loads_msp(text: str | bytes) -> Snapshot:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MspFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MspFormatError("MSP document must be a JSON object")
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise MspFormatError(f"unsupported MSP version: {version!r}")
    entry_label = doc.get("entry_label", DEFAULT_ENTRY_LABEL)
    if not isinstance(entry_label, str) or not entry_label:
        raise MspFormatError(f"invalid entry_label: {entry_label!r}")
    raw_paths = doc.get("paths", [])
    if not isinstance(raw_paths, list):
        raise MspFormatError("'paths' must be a list")

    registry: dict[str, OperationId] = {}
    rows = []
    for item in raw_paths:
        if not isinstance(item, dict):
            raise MspFormatError(f"path entry must be an object, got {item!r}")
        path_id = item.get("id")
        if isinstance(path_id, bool) or not isinstance(path_id, int):
            raise MspFormatError(f"path id must be an integer, got {path_id!r}")
        root = item.get("root")
        branches = item.get("branches")
        if not isinstance(branches, dict):
            raise MspFormatError(f"path {path_id}: 'branches' must be an object")
        for rendered, count in branches.items():
            if isinstance(count, bool) or not isinstance(count, int):
                raise MspFormatError(
                    f"path {path_id}: count for {rendered!r} must be an integer"
                )
            key = parse_branch_key(rendered, registry)
            if root is not None and key.root.label != root:
                raise MspFormatError(
                    f"path {path_id}: branch {rendered!r} does not start at root {root!r}"
                )
            rows.append((path_id, key, count))
    return build_snapshot(rows, entry_label=entry_label)


def save_msp(snapshot: Snapshot, path: str | Path) -> None:
    Path(path).write_text(dumps_msp(snapshot), encoding="utf-8")


def load_msp(path: str | Path) -> Snapshot:
    return loads_msp(Path(path).read_text(encoding="utf-8"))
