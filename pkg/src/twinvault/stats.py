"""Comparative statistics for timed storage experiments.

Implements the analysis pipeline applied to the POST/GET timing samples:
arithmetic mean execution time, sample descriptive statistics, Cohen's d
effect size between the two backends, ordinary least squares for
time-versus-size scalability, and headline percentage differences.

All functions are pure and deterministic; applied to a fixed sample list
they produce bit-identical results across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


class EmptySample(Exception):
    pass


class DegenerateVariance(Exception):
    """Both groups have zero variance: the effect size denominator vanishes."""


class SingularDesign(Exception):
    """All x values identical: the slope is not identifiable."""


@dataclass(frozen=True)
class DescriptiveStats:
    """Sample summary: n, mean, sample standard deviation, extrema.

    std_s uses the n-1 divisor throughout (the default of common statistics
    packages). For a single sample the deviation is undefined and reported
    as 0 with std_undefined set.
    """

    n: int
    mean_s: float
    std_s: float
    min_s: float
    max_s: float
    std_undefined: bool = False


@dataclass(frozen=True)
class EffectSize:
    d: float
    mean_a: float
    mean_b: float
    pooled_sd: float
    pooling: str = "corrected"


@dataclass(frozen=True)
class RegressionFit:
    """Least-squares line time = beta0 + beta1 * size.

    beta1 is seconds per unit of the size axis; the caller records which
    unit (bytes or MB) the x values were expressed in.
    """

    beta0: float
    beta1: float
    r_squared: float
    n: int


def mean_time(samples: Sequence[float]) -> float:
    """Arithmetic mean of execution times."""
    if not samples:
        raise EmptySample("mean of zero samples")
    return sum(samples) / len(samples)


def sample_variance(samples: Sequence[float]) -> float:
    """Unbiased (n-1) sample variance; 0 by convention for a single sample."""
    n = len(samples)
    if n == 0:
        raise EmptySample("variance of zero samples")
    if n == 1:
        return 0.0
    mean = mean_time(samples)
    return sum((x - mean) ** 2 for x in samples) / (n - 1)


def descriptive(samples: Sequence[float]) -> DescriptiveStats:
    if not samples:
        raise EmptySample("descriptive statistics of zero samples")
    n = len(samples)
    return DescriptiveStats(
        n=n,
        mean_s=mean_time(samples),
        std_s=math.sqrt(sample_variance(samples)),
        min_s=min(samples),
        max_s=max(samples),
        std_undefined=(n == 1),
    )


def cohens_d(
    samples_a: Sequence[float], samples_b: Sequence[float], pooling: str = "corrected"
) -> EffectSize:
    """Standardized mean difference (group a minus group b).

    pooling="corrected" (default) divides by the square root of the average
    of the two sample variances -- the dimensionally consistent pooled
    standard deviation. pooling="literal" divides by the bare average of
    variances instead, for comparison against analyses that skip the root.
    """
    if not samples_a or not samples_b:
        raise EmptySample("effect size needs both sample groups")
    if pooling not in ("corrected", "literal"):
        raise ValueError(f"unknown pooling {pooling!r}")
    mean_a = mean_time(samples_a)
    mean_b = mean_time(samples_b)
    mean_of_variances = (sample_variance(samples_a) + sample_variance(samples_b)) / 2
    if mean_of_variances == 0:
        raise DegenerateVariance("both groups have zero variance")
    pooled = math.sqrt(mean_of_variances) if pooling == "corrected" else mean_of_variances
    return EffectSize(
        d=(mean_a - mean_b) / pooled, mean_a=mean_a, mean_b=mean_b, pooled_sd=pooled, pooling=pooling
    )


def linear_fit(points: Sequence[tuple[float, float]]) -> RegressionFit:
    """Ordinary least squares over (size, seconds) pairs, closed form.

    r_squared is 1 - SS_res/SS_tot; a constant-y dataset that the line
    reproduces exactly counts as a perfect fit.
    """
    if len(points) < 2:
        raise SingularDesign("need at least two points")
    xs = [float(x) for x, _ in points]
    ys = [float(y) for _, y in points]
    n = len(points)
    x_mean = sum(xs) / n
    y_mean = sum(ys) / n
    sxx = sum((x - x_mean) ** 2 for x in xs)
    if sxx == 0:
        raise SingularDesign("all sizes identical")
    sxy = sum((x - x_mean) * (y - y_mean) for x, y in zip(xs, ys))
    beta1 = sxy / sxx
    beta0 = y_mean - beta1 * x_mean
    ss_res = sum((y - (beta0 + beta1 * x)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - y_mean) ** 2 for y in ys)
    if ss_tot == 0:
        r_squared = 1.0 if math.isclose(ss_res, 0.0, abs_tol=1e-15) else 0.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    return RegressionFit(beta0=beta0, beta1=beta1, r_squared=min(max(r_squared, 0.0), 1.0), n=n)


def pct_difference(mean_slow: float, mean_fast: float) -> float:
    """How much faster the fast mean is, as a percentage of the slow mean."""
    if mean_slow <= 0:
        raise ValueError("mean_slow must be positive")
    return 100.0 * (mean_slow - mean_fast) / mean_slow
