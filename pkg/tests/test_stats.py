import math
import random

import numpy as np
import pytest

from twinvault.stats import (
    DegenerateVariance,
    EmptySample,
    SingularDesign,
    cohens_d,
    descriptive,
    linear_fit,
    mean_time,
    pct_difference,
    sample_variance,
)


def two_point_sample(mean: float, std: float) -> list[float]:
    """Smallest sample with an exact mean and exact sample (n-1) std."""
    delta = std / math.sqrt(2)
    return [mean - delta, mean + delta]


def test_mean_basics():
    assert mean_time([1, 2, 3]) == 2
    assert mean_time([7.5]) == 7.5
    assert mean_time([1.0, 2.0, 4.0]) == mean_time([4.0, 1.0, 2.0])
    with pytest.raises(EmptySample):
        mean_time([])


def test_descriptive_constant_vector():
    stats = descriptive([5, 5, 5])
    assert stats.mean_s == stats.min_s == stats.max_s == 5
    assert stats.std_s == 0
    assert not stats.std_undefined


def test_descriptive_two_points():
    stats = descriptive([2, 4])
    assert stats.mean_s == 3
    assert stats.std_s == pytest.approx(1.4142135623730951, abs=1e-12)  # sqrt(2), by definition
    assert (stats.min_s, stats.max_s) == (2, 4)


def test_descriptive_single_sample_flagged():
    stats = descriptive([9.0])
    assert stats.std_s == 0
    assert stats.std_undefined


def test_descriptive_extrema_match_sort_oracle():
    rng = random.Random(55)
    for _ in range(100):
        samples = [rng.uniform(-100, 100) for _ in range(rng.randint(1, 40))]
        stats = descriptive(samples)
        ordered = sorted(samples)
        assert stats.min_s == ordered[0]
        assert stats.max_s == ordered[-1]
        assert stats.mean_s == pytest.approx(np.mean(samples), rel=1e-12)
        if len(samples) > 1:
            assert stats.std_s == pytest.approx(np.std(samples, ddof=1), rel=1e-9)


def test_two_point_reconstruction_is_exact():
    samples = two_point_sample(16.43, 9.43)
    assert mean_time(samples) == pytest.approx(16.43, abs=1e-12)
    assert math.sqrt(sample_variance(samples)) == pytest.approx(9.43, abs=1e-12)


def test_cohens_d_identical_groups_is_zero():
    samples = [1.0, 2.0, 3.0]
    assert cohens_d(samples, samples).d == 0


def test_cohens_d_published_post_summary():
    # oracle, by hand: (16.43 - 25.36) / sqrt((9.43^2 + 16.85^2) / 2)
    #                = -8.93 / sqrt((88.9249 + 283.9225) / 2)
    #                = -8.93 / sqrt(186.4237) = -8.93 / 13.65371... = -0.65403...
    effect = cohens_d(two_point_sample(16.43, 9.43), two_point_sample(25.36, 16.85))
    assert effect.d == pytest.approx(-0.654, abs=0.001)
    assert effect.pooled_sd == pytest.approx(13.6537, abs=1e-3)


def test_cohens_d_published_get_summary():
    # oracle, by hand: (15.95 - 11.01) / sqrt((10.65^2 + 7.21^2) / 2)
    #                = 4.94 / sqrt(82.7033) = 4.94 / 9.09413... = +0.54321...
    effect = cohens_d(two_point_sample(15.95, 10.65), two_point_sample(11.01, 7.21))
    assert effect.d == pytest.approx(0.543, abs=0.001)


def test_cohens_d_antisymmetry():
    a = two_point_sample(16.43, 9.43)
    b = two_point_sample(25.36, 16.85)
    assert cohens_d(a, b).d == -cohens_d(b, a).d


def test_cohens_d_sign_matches_mean_gap():
    rng = random.Random(77)
    for _ in range(50):
        a = [rng.uniform(0, 50) for _ in range(rng.randint(2, 20))]
        b = [rng.uniform(0, 50) for _ in range(rng.randint(2, 20))]
        try:
            effect = cohens_d(a, b)
        except DegenerateVariance:
            continue
        gap = mean_time(a) - mean_time(b)
        assert math.copysign(1, effect.d) == math.copysign(1, gap) or effect.d == gap == 0


def test_cohens_d_scale_invariance_power_of_two():
    a = two_point_sample(16.43, 9.43)
    b = two_point_sample(25.36, 16.85)
    base = cohens_d(a, b).d
    for scale in (2.0, 4.0, 0.5, 1024.0):
        scaled = cohens_d([x * scale for x in a], [x * scale for x in b]).d
        assert scaled == base  # bit-exact with power-of-two scaling


def test_cohens_d_literal_pooling():
    a = two_point_sample(16.43, 9.43)
    b = two_point_sample(25.36, 16.85)
    literal = cohens_d(a, b, pooling="literal")
    assert literal.pooled_sd == pytest.approx(186.4237, abs=1e-3)  # mean of variances, no root
    assert literal.d == pytest.approx(-8.93 / 186.4237, abs=1e-4)
    assert literal.pooling == "literal"
    with pytest.raises(ValueError):
        cohens_d(a, b, pooling="spicy")


def test_cohens_d_degenerate_variance():
    with pytest.raises(DegenerateVariance):
        cohens_d([3.0, 3.0], [5.0, 5.0])


def test_linear_fit_recovers_exact_line():
    points = [(x, 2 + 3 * x) for x in (1.0, 2.0, 5.0, 9.0)]
    fit = linear_fit(points)
    assert fit.beta0 == pytest.approx(2, rel=1e-12)
    assert fit.beta1 == pytest.approx(3, rel=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_linear_fit_constant_y():
    fit = linear_fit([(1, 4.0), (2, 4.0), (3, 4.0)])
    assert fit.beta1 == 0
    assert fit.beta0 == 4.0
    assert fit.r_squared == 1.0


def test_linear_fit_matches_normal_equations_oracle():
    rng = random.Random(99)
    for _ in range(50):
        n = rng.randint(3, 30)
        xs = [rng.uniform(1, 2e7) for _ in range(n)]
        ys = [0.5 + 3e-7 * x + rng.gauss(0, 2) for x in xs]
        fit = linear_fit(list(zip(xs, ys)))
        design = np.array([[n, sum(xs)], [sum(xs), sum(x * x for x in xs)]])
        rhs = np.array([sum(ys), sum(x * y for x, y in zip(xs, ys))])
        beta0, beta1 = np.linalg.solve(design, rhs)
        assert fit.beta0 == pytest.approx(beta0, rel=1e-9)
        assert fit.beta1 == pytest.approx(beta1, rel=1e-9)


def test_linear_fit_residual_orthogonality():
    rng = random.Random(101)
    xs = [rng.uniform(0, 100) for _ in range(20)]
    ys = [1 + 0.25 * x + rng.gauss(0, 1) for x in xs]
    fit = linear_fit(list(zip(xs, ys)))
    residuals = [y - (fit.beta0 + fit.beta1 * x) for x, y in zip(xs, ys)]
    scale = sum(abs(y) for y in ys)
    assert abs(sum(residuals)) / scale < 1e-9
    assert abs(sum(r * x for r, x in zip(residuals, xs))) / (scale * max(xs)) < 1e-9


def test_linear_fit_singular_design():
    with pytest.raises(SingularDesign):
        linear_fit([(5.0, 1.0), (5.0, 2.0), (5.0, 3.0)])
    with pytest.raises(SingularDesign):
        linear_fit([(1.0, 1.0)])


def test_pct_difference_published_values():
    assert pct_difference(25.36, 16.43) == pytest.approx(35.2, abs=0.1)
    assert pct_difference(15.95, 11.01) == pytest.approx(31.0, abs=0.1)


def test_pct_difference_edges():
    assert pct_difference(10.0, 10.0) == 0
    with pytest.raises(ValueError):
        pct_difference(0, 1)
    with pytest.raises(ValueError):
        pct_difference(-5, 1)
