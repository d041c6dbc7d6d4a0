import math

import numpy as np
import pytest

from lib import metrics
from lib.errors import DimensionMismatch, InvalidConfig, SingleClass
from lib.shot_data import generate_synthetic, ground_truth_proba


def _brute_auc(p, y):
    pos = p[y == 1]
    neg = p[y == 0]
    wins = (pos[:, None] > neg[None, :]).sum() + 0.5 * (pos[:, None] == neg[None, :]).sum()
    return wins / (len(pos) * len(neg))


def _brute_brier(p, y):
    total = 0.0
    for pi, yi in zip(p, y):
        total += (pi - yi) ** 2
    return total / len(p)


def _brute_log_loss(p, y, eps=1e-15):
    total = 0.0
    for pi, yi in zip(p, y):
        pi = min(max(pi, eps), 1 - eps)
        total -= yi * math.log(pi) + (1 - yi) * math.log(1 - pi)
    return total / len(p)


def _brute_ece(p, y, bins):
    sums = {}
    for pi, yi in zip(p, y):
        b = min(int(math.floor(pi * bins)), bins - 1)
        count, sp, sy = sums.get(b, (0, 0.0, 0.0))
        sums[b] = (count + 1, sp + pi, sy + yi)
    return sum(c / len(p) * abs(sy / c - sp / c) for c, sp, sy in sums.values())


# --- AUC ---

def test_auc_perfect_ranking():
    assert metrics.auc_roc([0.9, 0.1], [1, 0]) == 1.0


def test_auc_constant_predictions():
    assert metrics.auc_roc([0.2] * 6, [1, 0, 0, 1, 0, 0]) == 0.5


def test_auc_tie_credits_half():
    assert metrics.auc_roc([0.3, 0.3], [0, 1]) == 0.5


def test_auc_single_class():
    with pytest.raises(SingleClass):
        metrics.auc_roc([0.1, 0.4], [0, 0])


def test_auc_invariant_under_monotone_maps(rng):
    p = rng.uniform(size=300)
    y = (rng.uniform(size=300) < p).astype(int)
    base = metrics.auc_roc(p, y)
    for transform in (np.sqrt, lambda v: v ** 3, lambda v: np.log(v + 1e-3), lambda v: 2 * v - 7):
        assert metrics.auc_roc(transform(p), y) == pytest.approx(base, abs=1e-12)


# --- Brier / log loss ---

def test_brier_closed_forms():
    assert metrics.brier([1.0, 0.0, 1.0], [1, 0, 1]) == 0.0
    assert metrics.brier([0.5] * 4, [1, 0, 1, 0]) == 0.25


@pytest.mark.parametrize("p, r", [(0.1, 0.25), (0.5, 0.5), (0.9, 0.05)])
def test_constant_predictor_closed_forms(p, r):
    n = 400
    y = (np.arange(n) < r * n).astype(int)
    assert metrics.brier(np.full(n, p), y) == pytest.approx(r * (1 - p) ** 2 + (1 - r) * p ** 2, abs=1e-12)
    assert metrics.log_loss(np.full(n, p), y) == pytest.approx(-(r * np.log(p) + (1 - r) * np.log(1 - p)), abs=1e-12)
    assert metrics.brier(np.full(n, p), y) <= max(r, 1 - r)


def test_log_loss_edges():
    assert metrics.log_loss([1.0, 0.0], [1, 0]) <= 1e-14
    assert metrics.log_loss([0.5] * 3, [1, 0, 0]) == pytest.approx(math.log(2))
    assert metrics.log_loss([0.0], [1]) == pytest.approx(-math.log(1e-15))
    assert metrics.log_loss([1.0], [0]) == pytest.approx(-math.log(1e-15), rel=1e-3)


def test_mismatched_lengths():
    with pytest.raises(DimensionMismatch):
        metrics.brier([0.1, 0.2], [1])


# --- ECE ---

def test_ece_constant_at_empirical_rate():
    assert metrics.ece([0.25] * 8, [1, 0, 0, 0, 1, 0, 0, 0]) == pytest.approx(0.0, abs=1e-15)


def test_ece_constant_on_all_misses():
    assert metrics.ece([0.3] * 5, [0] * 5) == pytest.approx(0.3)


def test_ece_two_bins():
    p = [0.1] * 4 + [0.9] * 4
    y = [1, 0, 0, 0] + [1, 1, 1, 0]
    assert metrics.ece(p, y, bins=10) == pytest.approx(0.15, abs=1e-12)


def test_ece_of_calibrated_predictor_is_small(ground_truth):
    d = generate_synthetic(ground_truth, 100000)
    p_star = ground_truth_proba(ground_truth, d)
    y = np.array([r.is_goal for r in d.records], dtype=int)
    assert metrics.ece(p_star, y, bins=10) < 0.01


def test_reliability_table():
    table = metrics.reliability_table([0.1] * 4 + [0.9] * 4, [1, 0, 0, 0, 1, 1, 1, 0], bins=10)
    assert list(table["count"]) == [4, 4]
    assert list(table["observed_rate"]) == [0.25, 0.75]
    assert table["bin_lo"].tolist() == [0.1, 0.9]
    with pytest.raises(InvalidConfig):
        metrics.reliability_table([0.5], [1], bins=0)


def test_prediction_of_one_falls_in_last_bin():
    table = metrics.reliability_table([1.0, 0.95], [1, 1], bins=10)
    assert list(table["count"]) == [2]


# --- Oracle ---

def test_metrics_match_brute_force_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        n = int(rng.integers(2, 201))
        p = rng.uniform(size=n)
        if rng.uniform() < 0.3:
            p = np.round(p, 1)
        y = rng.integers(0, 2, n)
        y[0], y[1] = 0, 1
        assert abs(metrics.auc_roc(p, y) - _brute_auc(p, y)) <= 1e-12
        assert abs(metrics.brier(p, y) - _brute_brier(p, y)) <= 1e-12
        assert abs(metrics.log_loss(p, y) - _brute_log_loss(p, y)) <= 1e-12
        assert abs(metrics.ece(p, y, 10) - _brute_ece(p, y, 10)) <= 1e-12


# --- Normalization and reports ---

@pytest.mark.parametrize("value, baseline, expected", [
    (0.0825, 0.1016, 0.8120),
    (0.2869, 0.3567, 0.8043),
    (0.0020, 0.0095, 0.2105),
])
def test_normalized_metrics_reproduce_reference_table(value, baseline, expected):
    assert round(metrics.normalize(value, baseline), 4) == expected


def test_normalize_edge_cases():
    assert metrics.normalize(0.0, 0.0) == 1.0
    assert math.isnan(metrics.normalize(0.1, 0.0))
    assert metrics.normalize(None, 0.3) is None


def test_evaluate_baseline_against_itself():
    y = np.array([1, 0, 0, 0, 0, 1, 0, 0, 0, 0])
    report = metrics.evaluate(np.full(10, 0.2), y, baseline_rate=0.2)
    assert (report.nbs, report.nll, report.nece) == (1.0, 1.0, 1.0)
    assert report.auc_roc == 0.5
    assert report.n == 10 and report.ece_bins == 10


def test_evaluate_single_class_keeps_other_metrics():
    report = metrics.evaluate([0.1, 0.2, 0.3], [0, 0, 0], baseline_rate=0.1)
    assert report.auc_roc is None
    assert report.bs == pytest.approx((0.01 + 0.04 + 0.09) / 3)


def test_evaluate_rejects_bad_baseline():
    with pytest.raises(InvalidConfig):
        metrics.evaluate([0.1], [1], baseline_rate=0.0)


def test_report_columns():
    report = metrics.evaluate([0.8, 0.3, 0.1, 0.6], [1, 0, 0, 1], baseline_rate=0.4)
    assert list(report.to_dict()) == ["auc_roc", "bs", "nbs", "ll", "nll", "ece", "nece", "baseline_rate", "n", "ece_bins"]
    assert report.row()[0] == 1.0
