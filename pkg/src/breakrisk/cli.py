"""Command-line interface: ingest span exports, query risk, sweep, serve.

Exit codes: 0 success, 1 runtime error, 2 usage error. Data goes to stdout,
diagnostics to stderr (runtime failures as a single ``error: ...`` line).
The ``BREAKRISK_MODE`` environment variable sets the default scoring mode.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import socket
import sys
from pathlib import Path

from . import render
from .errors import BreakRiskError, UnknownFixtureError
from .fixtures import FIXTURE_IDS, builtin_fixture
from .ingest import IngestConfig, ingest_spans, parse_spans
from .model import Snapshot
from .risk import DEFAULT_MODE, BreakingSet, RiskMode, parse_mode, risk, sweep_single_ops
from .store import load_msp, save_msp

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

MODE_CHOICES = tuple(mode.value for mode in RiskMode)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_RUNTIME


def _usage_fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _default_mode() -> RiskMode:
    raw = os.environ.get("BREAKRISK_MODE")
    if not raw:
        return DEFAULT_MODE
    return parse_mode(raw)  # ValueError surfaces as a usage error in main()


def _add_snapshot_source(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--msp", metavar="FILE", help="MSP snapshot file to load")
    source.add_argument(
        "--fixture", metavar="ID", help=f"built-in fixture ({', '.join(FIXTURE_IDS)})"
    )


def _load_snapshot(args: argparse.Namespace) -> Snapshot:
    if args.fixture is not None:
        return builtin_fixture(args.fixture)
    return load_msp(args.msp)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="breakrisk",
        description="Change-risk scoring for microservice systems from trace call paths.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="build an MSP snapshot file from span exports")
    ingest.add_argument(
        "--format", required=True, choices=("otlp-json", "jsonl"), help="span export format"
    )
    ingest.add_argument(
        "--in", dest="inputs", metavar="FILE", nargs="+", required=True, help="input files"
    )
    ingest.add_argument("--out", required=True, metavar="FILE", help="MSP file to write")
    ingest.set_defaults(func=_cmd_ingest)

    risk_cmd = sub.add_parser("risk", help="score a breaking-change set")
    _add_snapshot_source(risk_cmd)
    risk_cmd.add_argument(
        "--break",
        dest="break_ops",
        required=True,
        metavar="OPS",
        help="comma-separated operation labels, e.g. OPC1,OPE1",
    )
    risk_cmd.add_argument("--mode", choices=MODE_CHOICES, default=None)
    risk_cmd.add_argument("--format", choices=("json", "table"), default="json")
    risk_cmd.add_argument(
        "--fail-above",
        type=float,
        default=None,
        metavar="X",
        help="exit 1 when the total risk exceeds X (CI gate)",
    )
    risk_cmd.set_defaults(func=_cmd_risk)

    sweep = sub.add_parser("sweep", help="score every operation broken on its own")
    _add_snapshot_source(sweep)
    sweep.add_argument("--mode", choices=MODE_CHOICES, default=None)
    sweep.add_argument("--format", choices=("json", "csv"), default="json")
    sweep.set_defaults(func=_cmd_sweep)

    serve = sub.add_parser("serve", help="serve the HTTP API over a snapshot")
    _add_snapshot_source(serve)
    serve.add_argument("--listen", metavar="ADDR:PORT", default=None)
    serve.add_argument(
        "--config",
        metavar="FILE",
        default=None,
        help="service config JSON: {listen, cors_origin, mode}; flags win",
    )
    serve.set_defaults(func=_cmd_serve)

    return parser


def _cmd_ingest(args: argparse.Namespace) -> int:
    records = []
    for name in args.inputs:
        records.extend(parse_spans(Path(name).read_bytes(), args.format))
    snapshot, report = ingest_spans(records, IngestConfig())
    save_msp(snapshot, args.out)
    print(json.dumps(report.as_doc(), separators=(",", ":")))
    return EXIT_OK


def _resolve_mode(args: argparse.Namespace) -> RiskMode:
    return parse_mode(args.mode) if args.mode else _default_mode()


def _cmd_risk(args: argparse.Namespace) -> int:
    labels = [part.strip() for part in args.break_ops.split(",") if part.strip()]
    if not labels:
        return _usage_fail("--break needs at least one operation label")
    report = risk(_load_snapshot(args), BreakingSet(labels), _resolve_mode(args))
    if args.format == "table":
        sys.stdout.write(render.report_table(report))
    else:
        print(render.to_json(render.report_doc(report)))
    if args.fail_above is not None and report.total > args.fail_above:
        print(
            f"error: risk {render.format_score(report.total)} exceeds "
            f"--fail-above {args.fail_above}",
            file=sys.stderr,
        )
        return EXIT_RUNTIME
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    mode = _resolve_mode(args)
    results = sweep_single_ops(_load_snapshot(args), mode)
    if args.format == "csv":
        sys.stdout.write(render.sweep_csv(results))
    else:
        print(render.to_json(render.sweep_doc(mode.value, results)))
    return EXIT_OK


def _parse_listen(listen: str) -> tuple[str, int]:
    host, sep, port = listen.rpartition(":")
    if not sep or not host or not port.isdigit():
        raise ValueError(f"--listen must look like ADDR:PORT, got {listen!r}")
    return host, int(port)


def _cmd_serve(args: argparse.Namespace) -> int:
    # imported lazily: the other subcommands do not need the HTTP stack
    import uvicorn

    from .service import ServiceConfig, SnapshotHolder, create_app

    config_doc: dict = {}
    if args.config:
        config_doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if not isinstance(config_doc, dict):
            return _usage_fail("service config must be a JSON object")
    listen = args.listen or config_doc.get("listen")
    if not listen:
        return _usage_fail("--listen (or a config file with 'listen') is required")
    try:
        host, port = _parse_listen(listen)
    except ValueError as exc:
        return _usage_fail(str(exc))
    mode_raw = config_doc.get("mode")
    service_config = ServiceConfig(
        default_mode=parse_mode(mode_raw) if mode_raw else _default_mode(),
        cors_origin=str(config_doc.get("cors_origin", "*")),
    )

    holder = SnapshotHolder(_load_snapshot(args))

    if args.msp and hasattr(signal, "SIGHUP"):

        def reload_snapshot(_signum, _frame) -> None:
            # load fully, then swap: readers never see a partial snapshot
            try:
                holder.set(load_msp(args.msp))
                print(f"reloaded snapshot from {args.msp}", file=sys.stderr)
            except (OSError, BreakRiskError) as exc:
                print(f"error: reload failed: {exc}", file=sys.stderr)

        signal.signal(signal.SIGHUP, reload_snapshot)

    # pre-flight bind so an occupied port fails fast with a clean exit code
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        probe.close()
        return _fail(f"cannot bind {listen}: {exc}")
    probe.close()

    app = create_app(holder, service_config)
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return EXIT_OK


def main(argv: "list[str] | None" = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UnknownFixtureError as exc:
        return _usage_fail(str(exc))
    except ValueError as exc:
        return _usage_fail(str(exc))
    except BreakRiskError as exc:
        return _fail(str(exc))
    except OSError as exc:
        return _fail(str(exc))


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
