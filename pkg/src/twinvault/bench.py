"""Workload generation, timed benchmark runs, and the report data product.

A run posts seeded pseudorandom payloads of configured sizes to each
backend, retrieves every stored item back, and records one timing row per
operation. The analysis pass turns those rows into per-cell descriptive
statistics, per-operation effect sizes between the backends, per-cell
time-versus-size regression fits (in both bytes and MB units), and headline
percentage differences, all serialized as JSON plus a flat CSV.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .backends import BackendKind, DISABLED_LATENCY, LatencyModel, UnifiedStore
from .cas import CasStore
from .core import EvidenceMeta, utc_now_seconds
from .ledger import Chain
from .relational import RelationalConfig, RelationalStore
from .stats import (
    DescriptiveStats,
    EffectSize,
    RegressionFit,
    cohens_d,
    descriptive,
    linear_fit,
    pct_difference,
)

MB = 1_000_000  # SI, consistent with quoting bandwidth in Mbit/s

DEFAULT_SIZES_BYTES = (1 * MB, 2 * MB, 5 * MB, 10 * MB, 20 * MB)
DEFAULT_REPETITIONS = 3

CSV_HEADER = "operation,backend,size_bytes,run_index,seconds"


class Operation(Enum):
    POST = "post"
    GET = "get"

    @classmethod
    def parse(cls, name: str) -> "Operation":
        for op in cls:
            if op.value == name:
                return op
        raise ValueError(f"unknown operation {name!r}")


_BACKEND_ORDER = (BackendKind.LEDGER_CAS, BackendKind.RELATIONAL)
_OPERATION_ORDER = (Operation.POST, Operation.GET)


class BenchmarkAborted(Exception):
    """A backend failed mid-run; the records gathered so far are preserved."""

    def __init__(self, records: list["RunRecord"], cause: BaseException):
        super().__init__(f"benchmark aborted after {len(records)} records: {cause}")
        self.records = records
        self.cause = cause


@dataclass(frozen=True)
class WorkloadSpec:
    """Everything that determines a benchmark run.

    sizes_bytes must be strictly increasing; payload content is a pure
    function of (seed, sizes). The default workload is desk-scale so the
    full suite runs in minutes; the 1-200 MB range used for large studies
    is a configuration, not the default.
    """

    sizes_bytes: tuple[int, ...] = DEFAULT_SIZES_BYTES
    repetitions: int = DEFAULT_REPETITIONS
    seed: int = 42
    backends: tuple[BackendKind, ...] = _BACKEND_ORDER
    operations: tuple[Operation, ...] = _OPERATION_ORDER
    latency: LatencyModel = DISABLED_LATENCY

    def __post_init__(self) -> None:
        if not self.sizes_bytes:
            raise ValueError("sizes_bytes must be non-empty")
        if any(s <= 0 for s in self.sizes_bytes):
            raise ValueError("sizes must be positive")
        if any(b >= a for b, a in zip(self.sizes_bytes, self.sizes_bytes[1:])):
            raise ValueError("sizes must be strictly increasing")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if not self.backends or not self.operations:
            raise ValueError("at least one backend and one operation required")
        # normalize to canonical order, dropping duplicates
        object.__setattr__(
            self, "backends", tuple(k for k in _BACKEND_ORDER if k in self.backends)
        )
        object.__setattr__(
            self, "operations", tuple(o for o in _OPERATION_ORDER if o in self.operations)
        )


@dataclass(frozen=True)
class RunRecord:
    """One measured POST or GET: the atom of the whole analysis."""

    operation: Operation
    backend: BackendKind
    size_bytes: int
    run_index: int
    seconds: float


def generate_workload(spec: WorkloadSpec) -> list[tuple[int, bytes]]:
    """One pseudorandom payload per size, exact byte lengths, seeded."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    return [(size, rng.bytes(size)) for size in spec.sizes_bytes]


def make_workspace_store(
    workspace: str | Path,
    latency: LatencyModel = DISABLED_LATENCY,
    payload_cap_bytes: int | None = None,
) -> UnifiedStore:
    """Fresh, empty backends inside one directory (cas/, ledger.log, evidence.db)."""
    root = Path(workspace)
    root.mkdir(parents=True, exist_ok=True)
    cas = CasStore(root / "cas")
    chain = Chain(root / "ledger.log")
    relational = RelationalStore.open(RelationalConfig(url=f"sqlite:///{root / 'evidence.db'}"))
    kwargs = {} if payload_cap_bytes is None else {"payload_cap_bytes": payload_cap_bytes}
    return UnifiedStore(cas, chain, relational, latency=latency, **kwargs)


def run_benchmark(spec: WorkloadSpec, workspace: str | Path) -> list[RunRecord]:
    """Execute the full measurement matrix strictly sequentially.

    Per size: POST to each backend repetitions times, then GET each stored
    item back once per repetition. Requires an empty workspace so both
    backends start cold. Any backend failure aborts the run; the partial
    records ride on the BenchmarkAborted exception.
    """
    root = Path(workspace)
    if root.exists() and any(root.iterdir()):
        raise ValueError(f"benchmark workspace {root} is not empty")
    store = make_workspace_store(root, latency=spec.latency)
    records: list[RunRecord] = []
    try:
        for size, payload in generate_workload(spec):
            receipts = {kind: [] for kind in spec.backends}
            for kind in spec.backends:
                for rep in range(spec.repetitions):
                    meta = EvidenceMeta(
                        case_id="bench",
                        filename=f"workload-{size}-r{rep}.bin",
                        media_type="application/octet-stream",
                        size_bytes=size,
                        submitted_at=utc_now_seconds(),
                        submitter="bench",
                    )
                    receipt = store.post_evidence(kind, payload, meta)
                    receipts[kind].append(receipt)
                    if Operation.POST in spec.operations:
                        records.append(RunRecord(Operation.POST, kind, size, rep, receipt.timing.seconds))
            if Operation.GET in spec.operations:
                for kind in spec.backends:
                    for rep, receipt in enumerate(receipts[kind]):
                        retrieved = store.get_evidence(receipt.locator)
                        records.append(RunRecord(Operation.GET, kind, size, rep, retrieved.timing.seconds))
    except Exception as exc:
        raise BenchmarkAborted(records, exc) from exc
    return records


# -- report -----------------------------------------------------------------


@dataclass(frozen=True)
class DescriptiveRow:
    operation: Operation
    backend: BackendKind
    stats: DescriptiveStats


@dataclass(frozen=True)
class EffectRow:
    """Effect size per operation; mean_a is the ledger backend, mean_b relational."""

    operation: Operation
    effect: EffectSize


@dataclass(frozen=True)
class RegressionRow:
    operation: Operation
    backend: BackendKind
    unit: str  # "bytes" or "mb"
    fit: RegressionFit


@dataclass(frozen=True)
class PctRow:
    operation: Operation
    faster_backend: BackendKind
    pct: float


@dataclass(frozen=True)
class BenchReport:
    spec: WorkloadSpec
    records: tuple[RunRecord, ...]
    descriptives: tuple[DescriptiveRow, ...]
    effect_sizes: tuple[EffectRow, ...]
    regressions: tuple[RegressionRow, ...]
    pct_differences: tuple[PctRow, ...]


def _cell_samples(records: list[RunRecord]) -> dict[tuple[Operation, BackendKind], list[RunRecord]]:
    cells: dict[tuple[Operation, BackendKind], list[RunRecord]] = {}
    for record in records:
        cells.setdefault((record.operation, record.backend), []).append(record)
    return cells


def build_report(spec: WorkloadSpec, records: list[RunRecord], pooling: str = "corrected") -> BenchReport:
    """Run the full statistical pipeline over a record list.

    Exactly one descriptive row per (operation, backend) cell present in the
    records; effect sizes and percentage differences only where both
    backends measured the operation.
    """
    cells = _cell_samples(records)
    descriptives = []
    regressions = []
    for operation in _OPERATION_ORDER:
        for backend in _BACKEND_ORDER:
            cell = cells.get((operation, backend))
            if not cell:
                continue
            seconds = [r.seconds for r in cell]
            descriptives.append(DescriptiveRow(operation, backend, descriptive(seconds)))
            points_bytes = [(float(r.size_bytes), r.seconds) for r in cell]
            points_mb = [(r.size_bytes / MB, r.seconds) for r in cell]
            if len({x for x, _ in points_bytes}) >= 2:
                regressions.append(RegressionRow(operation, backend, "bytes", linear_fit(points_bytes)))
                regressions.append(RegressionRow(operation, backend, "mb", linear_fit(points_mb)))
    effect_sizes = []
    pct_differences = []
    for operation in _OPERATION_ORDER:
        ledger_cell = cells.get((operation, BackendKind.LEDGER_CAS))
        sql_cell = cells.get((operation, BackendKind.RELATIONAL))
        if not ledger_cell or not sql_cell:
            continue
        ledger_seconds = [r.seconds for r in ledger_cell]
        sql_seconds = [r.seconds for r in sql_cell]
        effect_sizes.append(EffectRow(operation, cohens_d(ledger_seconds, sql_seconds, pooling)))
        ledger_mean = sum(ledger_seconds) / len(ledger_seconds)
        sql_mean = sum(sql_seconds) / len(sql_seconds)
        if ledger_mean <= sql_mean:
            faster, pct = BackendKind.LEDGER_CAS, pct_difference(sql_mean, ledger_mean)
        else:
            faster, pct = BackendKind.RELATIONAL, pct_difference(ledger_mean, sql_mean)
        pct_differences.append(PctRow(operation, faster, pct))
    return BenchReport(
        spec=spec,
        records=tuple(records),
        descriptives=tuple(descriptives),
        effect_sizes=tuple(effect_sizes),
        regressions=tuple(regressions),
        pct_differences=tuple(pct_differences),
    )


def _latency_to_dict(model: LatencyModel) -> dict:
    bandwidth = model.bandwidth_bytes_per_second
    return {
        "enabled": model.enabled,
        "base_seconds": model.base_seconds,
        "bandwidth_bytes_per_second": None if bandwidth == float("inf") else bandwidth,
    }


def _latency_from_dict(doc: dict) -> LatencyModel:
    bandwidth = doc["bandwidth_bytes_per_second"]
    return LatencyModel(
        enabled=doc["enabled"],
        base_seconds=doc["base_seconds"],
        bandwidth_bytes_per_second=float("inf") if bandwidth is None else bandwidth,
    )


def report_to_dict(report: BenchReport) -> dict:
    return {
        "spec": {
            "sizes_bytes": list(report.spec.sizes_bytes),
            "repetitions": report.spec.repetitions,
            "seed": report.spec.seed,
            "backends": [k.value for k in report.spec.backends],
            "operations": [o.value for o in report.spec.operations],
            "latency": _latency_to_dict(report.spec.latency),
        },
        "records": [
            {
                "operation": r.operation.value,
                "backend": r.backend.value,
                "size_bytes": r.size_bytes,
                "run_index": r.run_index,
                "seconds": r.seconds,
            }
            for r in report.records
        ],
        "descriptives": [
            {
                "operation": row.operation.value,
                "backend": row.backend.value,
                "n": row.stats.n,
                "mean_s": row.stats.mean_s,
                "std_s": row.stats.std_s,
                "min_s": row.stats.min_s,
                "max_s": row.stats.max_s,
                "std_undefined": row.stats.std_undefined,
            }
            for row in report.descriptives
        ],
        "effect_sizes": [
            {
                "operation": row.operation.value,
                "d": row.effect.d,
                "mean_a": row.effect.mean_a,
                "mean_b": row.effect.mean_b,
                "pooled_sd": row.effect.pooled_sd,
                "pooling": row.effect.pooling,
            }
            for row in report.effect_sizes
        ],
        "regressions": [
            {
                "operation": row.operation.value,
                "backend": row.backend.value,
                "unit": row.unit,
                "beta0": row.fit.beta0,
                "beta1": row.fit.beta1,
                "r_squared": row.fit.r_squared,
                "n": row.fit.n,
            }
            for row in report.regressions
        ],
        "pct_differences": [
            {"operation": row.operation.value, "faster_backend": row.faster_backend.value, "pct": row.pct}
            for row in report.pct_differences
        ],
    }


def report_from_dict(doc: dict) -> BenchReport:
    spec_doc = doc["spec"]
    spec = WorkloadSpec(
        sizes_bytes=tuple(spec_doc["sizes_bytes"]),
        repetitions=spec_doc["repetitions"],
        seed=spec_doc["seed"],
        backends=tuple(BackendKind.parse(b) for b in spec_doc["backends"]),
        operations=tuple(Operation.parse(o) for o in spec_doc["operations"]),
        latency=_latency_from_dict(spec_doc["latency"]),
    )
    return BenchReport(
        spec=spec,
        records=tuple(
            RunRecord(
                operation=Operation.parse(r["operation"]),
                backend=BackendKind.parse(r["backend"]),
                size_bytes=r["size_bytes"],
                run_index=r["run_index"],
                seconds=r["seconds"],
            )
            for r in doc["records"]
        ),
        descriptives=tuple(
            DescriptiveRow(
                Operation.parse(row["operation"]),
                BackendKind.parse(row["backend"]),
                DescriptiveStats(
                    n=row["n"],
                    mean_s=row["mean_s"],
                    std_s=row["std_s"],
                    min_s=row["min_s"],
                    max_s=row["max_s"],
                    std_undefined=row["std_undefined"],
                ),
            )
            for row in doc["descriptives"]
        ),
        effect_sizes=tuple(
            EffectRow(
                Operation.parse(row["operation"]),
                EffectSize(
                    d=row["d"],
                    mean_a=row["mean_a"],
                    mean_b=row["mean_b"],
                    pooled_sd=row["pooled_sd"],
                    pooling=row["pooling"],
                ),
            )
            for row in doc["effect_sizes"]
        ),
        regressions=tuple(
            RegressionRow(
                Operation.parse(row["operation"]),
                BackendKind.parse(row["backend"]),
                row["unit"],
                RegressionFit(
                    beta0=row["beta0"], beta1=row["beta1"], r_squared=row["r_squared"], n=row["n"]
                ),
            )
            for row in doc["regressions"]
        ),
        pct_differences=tuple(
            PctRow(
                Operation.parse(row["operation"]),
                BackendKind.parse(row["faster_backend"]),
                row["pct"],
            )
            for row in doc["pct_differences"]
        ),
    )


def emit_report(
    spec: WorkloadSpec,
    records: list[RunRecord],
    destination: str | Path,
    pooling: str = "corrected",
) -> BenchReport:
    """Write report.json and records.csv under the destination directory.

    JSON numbers are serialized at full precision (repr round-trip), so
    parsing the file back reproduces the in-memory report exactly.
    """
    if not records:
        raise ValueError("cannot report on zero records")
    report = build_report(spec, records, pooling=pooling)
    dest = Path(destination)
    dest.mkdir(parents=True, exist_ok=True)
    (dest / "report.json").write_text(json.dumps(report_to_dict(report), indent=2) + "\n")
    with open(dest / "records.csv", "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for r in records:
            writer.writerow([r.operation.value, r.backend.value, r.size_bytes, r.run_index, repr(r.seconds)])
    return report


def load_report(path: str | Path) -> BenchReport:
    return report_from_dict(json.loads(Path(path).read_text()))
