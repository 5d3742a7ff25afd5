"""A desk-scale benchmark run through the full statistical pipeline.

Seeded payloads are posted to and retrieved from both backends; the
resulting timings feed descriptive statistics per (operation, backend)
cell, a Cohen's d effect size per operation, a time-versus-size regression
per cell, and headline percentage differences.

Uses small sizes so it finishes in seconds; pass real MB sizes to
WorkloadSpec (or use the `twinvault bench` command) for a full run.
"""

import tempfile
from pathlib import Path

from twinvault import WorkloadSpec, emit_report, run_benchmark

spec = WorkloadSpec(sizes_bytes=(100_000, 200_000, 500_000, 1_000_000), repetitions=3, seed=42)
workdir = Path(tempfile.mkdtemp(prefix="twinvault-demo-"))

records = run_benchmark(spec, workdir / "run")
print(f"collected {len(records)} timing records "
      f"({len(spec.sizes_bytes)} sizes x 2 backends x 2 operations x {spec.repetitions} reps)\n")

report = emit_report(spec, records, workdir / "report")

print(f"{'op':>4} {'backend':<7} {'n':>3} {'mean(s)':>10} {'std(s)':>10} {'min(s)':>10} {'max(s)':>10}")
for row in report.descriptives:
    s = row.stats
    print(f"{row.operation.value:>4} {row.backend.value:<7} {s.n:>3} "
          f"{s.mean_s:>10.6f} {s.std_s:>10.6f} {s.min_s:>10.6f} {s.max_s:>10.6f}")

print("\neffect sizes (ledger mean minus sql mean, pooled-sd standardized):")
for row in report.effect_sizes:
    print(f"  {row.operation.value}: d = {row.effect.d:+.3f} "
          f"(means {row.effect.mean_a:.6f} vs {row.effect.mean_b:.6f})")

print("\nscalability fits, per-MB unit:")
for row in report.regressions:
    if row.unit == "mb":
        print(f"  {row.operation.value} {row.backend.value}: "
              f"time = {row.fit.beta0:.6f} + {row.fit.beta1:.6f} * size_mb  (r2={row.fit.r_squared:.4f})")

print("\nheadlines:")
for row in report.pct_differences:
    print(f"  {row.operation.value}: {row.faster_backend.value} is {row.pct:.1f}% faster on average")

print(f"\nreport files: {workdir / 'report'}/report.json, records.csv")
