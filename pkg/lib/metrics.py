"""
Evaluation metrics for goal-probability predictions, built on sklearn.metrics.

Discrimination (AUC-ROC), accuracy of the probabilities (Brier score, log loss),
calibration (expected calibration error), and the Brier/log-loss/ECE figures
normalized by a naive constant-rate baseline on the same labels.
"""

import logging
import math
from dataclasses import dataclass, asdict

import numpy as np
import pandas as pd
from sklearn.metrics import brier_score_loss, log_loss as sk_log_loss, roc_auc_score

from lib.errors import DimensionMismatch, EmptyDataset, InvalidConfig, SingleClass

LOG_LOSS_EPSILON = 1e-15
DEFAULT_ECE_BINS = 10

# Report columns in display order, with the direction that counts as better.
METRIC_COLUMNS = (
    ("auc_roc", "AUC-ROC", True),
    ("bs", "BS", False),
    ("nbs", "NBS", False),
    ("ll", "LL", False),
    ("nll", "NLL", False),
    ("ece", "ECE", False),
    ("nece", "NECE", False),
)


def _as_arrays(predictions, labels):
    p = np.asarray(predictions, dtype=float).ravel()
    y = np.asarray(labels, dtype=float).ravel()
    if p.shape != y.shape:
        raise DimensionMismatch(f"{p.size} predictions for {y.size} labels")
    if p.size == 0:
        raise EmptyDataset("cannot evaluate zero predictions")
    return p, y


def auc_roc(predictions, labels):
    """Area under the ROC curve; tied scores count one half."""
    p, y = _as_arrays(predictions, labels)
    positives = int((y == 1).sum())
    negatives = int(y.size - positives)
    if positives == 0 or negatives == 0:
        raise SingleClass(f"AUC needs both classes ({positives} goal(s), {negatives} non-goal(s))")
    return float(roc_auc_score(y, p))


def brier(predictions, labels):
    p, y = _as_arrays(predictions, labels)
    return float(brier_score_loss(y, p, pos_label=1))


def log_loss(predictions, labels, epsilon=LOG_LOSS_EPSILON):
    """Mean negative log-likelihood, with predictions clipped to [eps, 1 - eps]."""
    p, y = _as_arrays(predictions, labels)
    p = np.clip(p, epsilon, 1.0 - epsilon)
    return float(sk_log_loss(y, p, labels=[0.0, 1.0]))


def _bin_index(p, bins):
    return np.minimum(np.floor(p * bins).astype(int), bins - 1)


def reliability_table(predictions, labels, bins=DEFAULT_ECE_BINS):
    """
    Per-bin calibration summary over `bins` equal-width probability intervals.

    Returns a DataFrame with bin_lo, bin_hi, count, mean_prediction, observed_rate
    and gap for every occupied bin.
    """
    if int(bins) < 1:
        raise InvalidConfig(f"the number of calibration bins must be >= 1, got {bins}")
    bins = int(bins)
    p, y = _as_arrays(predictions, labels)
    index = _bin_index(p, bins)
    count = np.bincount(index, minlength=bins)
    sum_p = np.bincount(index, weights=p, minlength=bins)
    sum_y = np.bincount(index, weights=y, minlength=bins)
    occupied = np.flatnonzero(count)
    frame = pd.DataFrame({
        "bin_lo": occupied / bins,
        "bin_hi": (occupied + 1) / bins,
        "count": count[occupied],
        "mean_prediction": sum_p[occupied] / count[occupied],
        "observed_rate": sum_y[occupied] / count[occupied],
    })
    frame["gap"] = (frame["observed_rate"] - frame["mean_prediction"]).abs()
    return frame


def ece(predictions, labels, bins=DEFAULT_ECE_BINS):
    """Expected calibration error with equal-width bins; empty bins are skipped."""
    table = reliability_table(predictions, labels, bins)
    total = table["count"].sum()
    return float((table["count"] / total * table["gap"]).sum())


def normalize(value, baseline):
    """
    A metric divided by the naive baseline's value of the same metric.

    Equal values normalize to exactly 1.0; a zero baseline with a nonzero value has
    no meaningful ratio and gives NaN.
    """
    if value is None or baseline is None:
        return None
    if value == baseline:
        return 1.0
    if baseline == 0:
        logging.warning(f"Baseline metric is 0 (value {value}); normalized metric is undefined")
        return math.nan
    return float(value / baseline)


@dataclass(frozen=True)
class EvalReport:
    auc_roc: float
    bs: float
    nbs: float
    ll: float
    nll: float
    ece: float
    nece: float
    baseline_rate: float
    n: int
    ece_bins: int

    def to_dict(self):
        return asdict(self)

    def row(self):
        """The seven metric values in report column order."""
        return [getattr(self, key) for key, _, _ in METRIC_COLUMNS]


def evaluate(predictions, labels, baseline_rate, ece_bins=DEFAULT_ECE_BINS):
    """
    All seven metrics for one set of predictions.

    The normalized variants divide by the same metric of a constant predictor equal
    to `baseline_rate` on the same labels. AUC is reported as None when the labels
    hold a single class; the other metrics are still computed.
    """
    if not 0.0 < baseline_rate < 1.0:
        raise InvalidConfig(f"the baseline rate must lie in (0, 1), got {baseline_rate}")
    p, y = _as_arrays(predictions, labels)
    try:
        auc = auc_roc(p, y)
    except SingleClass as e:
        logging.warning(f"AUC-ROC not reported: {e.message}")
        auc = None

    constant = np.full(y.shape, float(baseline_rate))
    bs, ll, calibration = brier(p, y), log_loss(p, y), ece(p, y, ece_bins)
    return EvalReport(
        auc_roc=auc,
        bs=bs,
        nbs=normalize(bs, brier(constant, y)),
        ll=ll,
        nll=normalize(ll, log_loss(constant, y)),
        ece=calibration,
        nece=normalize(calibration, ece(constant, y, ece_bins)),
        baseline_rate=float(baseline_rate),
        n=int(y.size),
        ece_bins=int(ece_bins),
    )
