"""Operator command line: store, get, verify, ledger validate, bench, serve.

Exit codes: 0 success, 1 operational error, 2 usage, 3 a verification that
ran and returned Fail (scripts must be able to tell a failed verdict from a
broken run).
"""

from __future__ import annotations

import argparse
import json
import mimetypes
import sys
import tempfile
from pathlib import Path

from .backends import BackendKind, EvidenceNotFound, LatencyModel
from .bench import MB, BenchmarkAborted, Operation, WorkloadSpec, emit_report, run_benchmark
from .config import ServiceConfig, default_config, load_config
from .core import EvidenceMeta, Verdict, utc_now_seconds
from .ledger import validate_log
from .service import build_store

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFY_FAIL = 3


def _config_from(args: argparse.Namespace) -> ServiceConfig:
    if args.config:
        return load_config(args.config)
    return default_config()


def cmd_store(args: argparse.Namespace) -> int:
    config = _config_from(args)
    store = build_store(config)
    path = Path(args.file)
    payload = path.read_bytes()
    media_type = args.media_type or mimetypes.guess_type(path.name)[0] or "application/octet-stream"
    meta = EvidenceMeta(
        case_id=args.case,
        filename=path.name,
        media_type=media_type,
        size_bytes=len(payload),
        submitted_at=utc_now_seconds(),
        submitter=args.submitter,
    )
    receipt = store.post_evidence(BackendKind.parse(args.backend), payload, meta)
    print(
        json.dumps(
            {
                "backend": receipt.locator.kind.value,
                "evidence_id": receipt.locator.evidence_id,
                "block_number": receipt.locator.block_number,
                "content_id": receipt.content_id.render() if receipt.content_id else None,
                "md5": receipt.md5.render(),
                "timing_seconds": receipt.timing.seconds,
            },
            indent=2,
        )
    )
    return EXIT_OK


def cmd_get(args: argparse.Namespace) -> int:
    config = _config_from(args)
    store = build_store(config)
    locator = store.resolve_locator(
        BackendKind.parse(args.backend), evidence_id=args.id, block_number=args.block
    )
    retrieved = store.get_evidence(locator)
    Path(args.out).write_bytes(retrieved.payload)
    print(
        f"wrote {len(retrieved.payload)} bytes to {args.out} "
        f"({retrieved.registered_md5.render()}, {retrieved.timing.seconds:.6f}s)",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    config = _config_from(args)
    store = build_store(config)
    locator = store.resolve_locator(
        BackendKind.parse(args.backend), evidence_id=args.id, block_number=args.block
    )
    result = store.verify_evidence(locator)
    print(
        json.dumps(
            {
                "verdict": result.verdict.value,
                "expected": result.expected.render(),
                "actual": result.actual.render(),
            }
        )
    )
    return EXIT_OK if result.verdict is Verdict.PASS else EXIT_VERIFY_FAIL


def cmd_ledger_validate(args: argparse.Namespace) -> int:
    config = _config_from(args)
    report = validate_log(config.ledger_path)
    print(
        json.dumps(
            {"valid": report.valid, "first_bad_index": report.first_bad_index, "reason": report.reason}
        )
    )
    return EXIT_OK if report.valid else EXIT_ERROR


def _parse_latency_arg(text: str | None) -> LatencyModel:
    if not text:
        return LatencyModel()
    base_text, _, bw_text = text.partition(",")
    if not bw_text:
        raise argparse.ArgumentTypeError("--latency expects BASE_SECONDS,BANDWIDTH_BYTES_PER_S")
    return LatencyModel(
        enabled=True, base_seconds=float(base_text), bandwidth_bytes_per_second=float(bw_text)
    )


def cmd_bench(args: argparse.Namespace) -> int:
    unit = MB if args.unit == "mb" else 1
    sizes = tuple(int(float(s) * unit) for s in args.sizes.split(","))
    spec = WorkloadSpec(
        sizes_bytes=sizes,
        repetitions=args.reps,
        seed=args.seed,
        backends=tuple(BackendKind.parse(b) for b in args.backends.split(",")),
        operations=tuple(Operation.parse(o) for o in args.ops.split(",")),
        latency=_parse_latency_arg(args.latency),
    )
    out_dir = Path(args.out)
    # Measurement stores are scratch, not evidence: they live in a temp
    # workspace and are discarded once the report is written.
    with tempfile.TemporaryDirectory(prefix="twinvault-bench-") as workspace:
        try:
            records = run_benchmark(spec, Path(workspace) / "run")
        except BenchmarkAborted as aborted:
            print(f"benchmark aborted: {aborted.cause}", file=sys.stderr)
            if aborted.records:
                emit_report(spec, aborted.records, out_dir, pooling=args.pooled)
                print(f"partial report ({len(aborted.records)} records) written to {out_dir}", file=sys.stderr)
            return EXIT_ERROR
    report = emit_report(spec, records, out_dir, pooling=args.pooled)
    for row in report.descriptives:
        stats = row.stats
        print(
            f"{row.operation.value:>4} {row.backend.value:<6} n={stats.n:<3} "
            f"mean={stats.mean_s:.6f}s std={stats.std_s:.6f}s "
            f"min={stats.min_s:.6f}s max={stats.max_s:.6f}s"
        )
    print(f"report written to {out_dir / 'report.json'} and {out_dir / 'records.csv'}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    serve(load_config(args.config))
    return EXIT_OK


def _add_config_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="service config JSON (default: built-in paths)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twinvault", description="Digital twin evidence vault")
    sub = parser.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("store", help="store an evidence file on one backend")
    sp.add_argument("--backend", choices=["ledger", "sql"], required=True)
    sp.add_argument("--file", required=True)
    sp.add_argument("--case", required=True)
    sp.add_argument("--submitter", default="cli")
    sp.add_argument("--media-type", dest="media_type", default=None)
    _add_config_arg(sp)
    sp.set_defaults(func=cmd_store)

    sp = sub.add_parser("get", help="retrieve evidence to a file")
    sp.add_argument("--backend", choices=["ledger", "sql"], required=True)
    sp.add_argument("--id", default=None)
    sp.add_argument("--block", type=int, default=None)
    sp.add_argument("--out", required=True)
    _add_config_arg(sp)
    sp.set_defaults(func=cmd_get)

    sp = sub.add_parser("verify", help="recompute and compare the stored fingerprint")
    sp.add_argument("--backend", choices=["ledger", "sql"], required=True)
    sp.add_argument("--id", default=None)
    sp.add_argument("--block", type=int, default=None)
    _add_config_arg(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("ledger", help="registry maintenance")
    ledger_sub = sp.add_subparsers(dest="ledger_cmd", required=True)
    vp = ledger_sub.add_parser("validate", help="revalidate every hash link in the log")
    _add_config_arg(vp)
    vp.set_defaults(func=cmd_ledger_validate)

    sp = sub.add_parser("bench", help="run the storage benchmark and write the report")
    sp.add_argument("--sizes", default="1,2,5,10,20")
    sp.add_argument("--unit", choices=["mb", "bytes"], default="mb")
    sp.add_argument("--reps", type=int, default=3)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--out", required=True)
    sp.add_argument("--latency", default=None, help="BASE_SECONDS,BANDWIDTH_BYTES_PER_S")
    sp.add_argument("--pooled", choices=["corrected", "literal"], default="corrected")
    sp.add_argument("--backends", default="ledger,sql")
    sp.add_argument("--ops", default="post,get")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--config", required=True)
    sp.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EvidenceNotFound, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
