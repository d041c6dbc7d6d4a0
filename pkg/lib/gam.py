"""
Generalized additive model on the logit scale, fitted by cyclic boosting with bagging.

    logit(p) = intercept + sum_j f_j(x_j) + sum_(i,j) f_ij(x_i, x_j)

Every f is a piecewise-constant table over quantile bins. Main effects are boosted
first, round-robin over the features; pairwise effects are boosted afterwards on top
of the frozen main effects, restricted to an explicit whitelist of feature pairs.
Each boosting step fits a shallow tree to the per-bin gradient sums of one function
(at most three bin segments for a main effect, four rectangles for a pair), so
neighbouring bins move together and sparse bins cannot drift on their own.
Each stage runs on several random subsamples (bags), each with its own validation
rows for early stopping, and the per-bin scores are averaged over the bags.
"""

import json
import logging
import zlib
from dataclasses import dataclass, field, asdict

import numpy as np
import pandas as pd
from joblib import Parallel, delayed, effective_n_jobs
from scipy.special import expit, logit

from lib import pitch
from lib.errors import (
    CorruptArtifact,
    DimensionMismatch,
    EmptyDataset,
    InvalidConfig,
    InvalidRecord,
    NonFiniteFeature,
    UnknownFeature,
    UnsupportedSpec,
    VersionMismatch,
    XgError,
)
from lib.features import ZONE_REPRESENTATIONS, CONSTANT, FeatureSpec, featurize_dataset
from lib.shot_data import Dataset, ShotRecord
from lib.storage_writer import _compress_json, _decompress_json, write_json_gz
from lib.version import ARTIFACT_SCHEMA_VERSION, check_artifact_version

LINK = "logit"
MAX_BINS_MAIN = 64
MAX_BINS_PAIR = 32

# Degenerate (single-class) labels are clipped to this rate before taking the logit.
_RATE_EPSILON = 1e-15


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.01
    max_rounds: int = 5000
    bag_count: int = 8
    validation_fraction: float = 0.15
    early_stopping_patience: int = 50
    early_stopping_tolerance: float = 1e-4
    max_bins: int = MAX_BINS_MAIN
    max_bins_pair: int = MAX_BINS_PAIR
    min_hessian: float = 1e-6
    max_leaves: int = 3
    min_samples_leaf: int = 2
    n_jobs: int = -1
    seed: int = 0

    def __post_init__(self):
        problems = []
        if not self.learning_rate > 0:
            problems.append(f"learning_rate must be > 0 (got {self.learning_rate})")
        if not 0.0 < self.validation_fraction < 1.0:
            problems.append(f"validation_fraction must lie in (0, 1) (got {self.validation_fraction})")
        if not 2 <= self.max_bins <= MAX_BINS_MAIN:
            problems.append(f"max_bins must lie in [2, {MAX_BINS_MAIN}] (got {self.max_bins})")
        if not 2 <= self.max_bins_pair <= MAX_BINS_PAIR:
            problems.append(f"max_bins_pair must lie in [2, {MAX_BINS_PAIR}] (got {self.max_bins_pair})")
        if self.max_rounds < 1 or self.bag_count < 1 or self.early_stopping_patience < 1:
            problems.append("max_rounds, bag_count and early_stopping_patience must be >= 1")
        if self.max_leaves < 2 or self.min_samples_leaf < 1:
            problems.append(f"max_leaves must be >= 2 and min_samples_leaf >= 1 (got {self.max_leaves}, {self.min_samples_leaf})")
        if self.n_jobs == 0:
            problems.append("n_jobs must be a positive worker count or negative (-1 uses every core)")
        if self.seed is None:
            problems.append("a seed is required for training")
        if problems:
            raise InvalidConfig("; ".join(problems))

    @classmethod
    def from_config(cls, training_config):
        known = {k: v for k, v in training_config.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    def to_dict(self):
        data = asdict(self)
        # the worker count does not change the fitted tables
        del data["n_jobs"]
        data["bagging"] = "random subsample without replacement; validation rows held out per bag"
        data["step"] = "shallow tree over the binned gradient sums, Newton leaf values scaled by the learning rate"
        return data


@dataclass(frozen=True, eq=False)
class BinnedFunction:
    """A main-effect (one feature) or pairwise (two features) lookup table."""

    features: tuple
    indices: tuple
    edges: tuple
    scores: np.ndarray
    counts: np.ndarray

    @property
    def name(self):
        return " x ".join(self.features)

    @property
    def is_pair(self):
        return len(self.features) == 2

    def bin_indices(self, X):
        """Per-dimension bin index arrays for the rows of X."""
        return tuple(np.searchsorted(e, X[:, i], side="right") for e, i in zip(self.edges, self.indices))

    def contributions(self, X):
        """Log-odds contribution of this function for every row of X."""
        return self.scores[self.bin_indices(X)]

    def bin_ranges(self, dim=0):
        """(lower, upper) bounds of every bin along one dimension; outermost bins are unbounded."""
        e = self.edges[dim]
        lower = np.concatenate([[-np.inf], e])
        upper = np.concatenate([e, [np.inf]])
        return list(zip(lower.tolist(), upper.tolist()))

    def to_dict(self):
        return {
            "features": list(self.features),
            "indices": [int(i) for i in self.indices],
            "edges": [e.tolist() for e in self.edges],
            "scores": self.scores.tolist(),
            "counts": self.counts.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            features=tuple(data["features"]),
            indices=tuple(int(i) for i in data["indices"]),
            edges=tuple(np.asarray(e, dtype=float) for e in data["edges"]),
            scores=np.asarray(data["scores"], dtype=float),
            counts=np.asarray(data["counts"], dtype=np.int64),
        )


@dataclass(eq=False)
class GamModel:
    intercept: float
    feature_names: list
    main_effects: list
    pair_effects: list
    whitelist: list
    feature_spec: FeatureSpec = None
    training_report: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    link: str = LINK

    @property
    def functions(self):
        return list(self.main_effects) + list(self.pair_effects)

    def function(self, name):
        for f in self.functions:
            if f.name == name:
                return f
        raise UnknownFeature(f"model has no function named '{name}'")

    def _check(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.ndim != 2 or X.shape[1] != len(self.feature_names):
            raise DimensionMismatch(
                f"expected {len(self.feature_names)} feature(s) {self.feature_names}, got shape {X.shape}"
            )
        return X

    def term_contributions(self, X):
        """(n, n_functions) matrix of log-odds contributions, columns ordered as self.functions."""
        X = self._check(X)
        if not self.functions:
            return np.zeros((X.shape[0], 0))
        return np.column_stack([f.contributions(X) for f in self.functions])

    def decision_function(self, X):
        """Additive logit scores for the rows of X."""
        X = self._check(X)
        score = np.full(X.shape[0], float(self.intercept))
        for f in self.functions:
            score = score + f.contributions(X)
        return score

    def predict_proba(self, X):
        if self.training_report.get("constant"):
            # expit(logit(rate)) can be one ulp off the stored rate
            X = self._check(X)
            return np.full(X.shape[0], float(self.training_report["base_rate"]))
        return expit(self.decision_function(X))


def bin_edges(values, max_bins):
    """
    Cut points for one feature.

    Columns with at most `max_bins` distinct values get one bin per value (cuts at
    the midpoints), so an indicator gets exactly two bins and a constant one bin.
    Otherwise the cuts are the k / max_bins quantiles, with duplicates merged.
    Bin k covers [edges[k-1], edges[k]).
    """
    values = np.asarray(values, dtype=float)
    distinct = np.unique(values)
    if len(distinct) <= 1:
        return np.array([], dtype=float)
    if len(distinct) <= max_bins:
        return (distinct[:-1] + distinct[1:]) / 2.0
    cuts = np.unique(np.quantile(values, np.arange(1, max_bins) / max_bins))
    return cuts[cuts > distinct[0]]


def bin_features(matrix, max_bins):
    """Quantile bin edges for every column of a feature matrix."""
    X = np.asarray(matrix, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyDataset("cannot bin an empty feature matrix")
    return [bin_edges(X[:, j], max_bins) for j in range(X.shape[1])]


def build_whitelist(spec, include_penalty_pair=True):
    """
    The permitted feature pairs for a zone representation.

    Every penalty-area zone paired with the footed-shot indicator, then with the
    headed-shot indicator, then the penalty-spot zone with the penalty indicator.
    """
    if spec.representation not in ZONE_REPRESENTATIONS:
        raise UnsupportedSpec(f"no interaction whitelist is defined for the {spec.representation} representation")
    zones = spec.zone_model
    names = zones.zone_names
    pairs = [(names[i], "bodypart_foot_a0") for i in zones.penalty_area_zone_ids]
    pairs += [(names[i], "bodypart_head_a0") for i in zones.penalty_area_zone_ids]
    if include_penalty_pair:
        pairs.append((names[zones.penalty_spot_zone_id], "type_shot_penalty_a0"))
    return pairs


def _validation_log_loss(y, f):
    return float(np.mean(np.logaddexp(0.0, f) - y * f))


def _leaf_score(g, h, min_hessian):
    return g * g / np.maximum(h, min_hessian)


def _best_cuts(g, h, c, min_leaf, min_hessian):
    """
    Best single cut along the last axis for every row of the cell sums (g, h, c).

    Returns (gain, cut): the gain over keeping the row as one leaf, and the index of
    the first cell right of the cut, or -1 where no admissible cut gains anything.
    """
    g, h, c = np.atleast_2d(g), np.atleast_2d(h), np.atleast_2d(c)
    rows = g.shape[0]
    if g.shape[1] < 2:
        return np.zeros(rows), np.full(rows, -1)
    cg, ch, cc = np.cumsum(g, axis=1), np.cumsum(h, axis=1), np.cumsum(c, axis=1)
    tg, th, tc = cg[:, -1:], ch[:, -1:], cc[:, -1:]
    lg, lh, lc = cg[:, :-1], ch[:, :-1], cc[:, :-1]
    gain = (
        _leaf_score(lg, lh, min_hessian) + _leaf_score(tg - lg, th - lh, min_hessian)
        - _leaf_score(tg, th, min_hessian)
    )
    gain = np.where((lc >= min_leaf) & (tc - lc >= min_leaf), gain, -np.inf)
    cut = np.argmax(gain, axis=1)
    best = gain[np.arange(rows), cut]
    found = best > 0.0
    return np.where(found, best, 0.0), np.where(found, cut + 1, -1)


def _leaf_value(g, h, cfg):
    return cfg.learning_rate * float(np.sum(g)) / max(float(np.sum(h)), cfg.min_hessian)


def _main_step(g, h, c, cfg):
    """
    Update of a main-effect table: the bins are grown best-first into at most
    `max_leaves` contiguous segments, each moved by its scaled Newton value.
    """
    segments = [(0, len(g))]
    while len(segments) < cfg.max_leaves:
        best_gain, best_segment, best_cut = 0.0, None, None
        for s, (lo, hi) in enumerate(segments):
            gain, cut = _best_cuts(g[lo:hi], h[lo:hi], c[lo:hi], cfg.min_samples_leaf, cfg.min_hessian)
            if cut[0] > 0 and gain[0] > best_gain:
                best_gain, best_segment, best_cut = gain[0], s, lo + int(cut[0])
        if best_segment is None:
            break
        lo, hi = segments[best_segment]
        segments[best_segment:best_segment + 1] = [(lo, best_cut), (best_cut, hi)]
    update = np.empty(len(g))
    for lo, hi in segments:
        update[lo:hi] = _leaf_value(g[lo:hi], h[lo:hi], cfg)
    return update


def _pair_step(g, h, c, cfg):
    """
    Update of a pairwise table: one cut along one axis, then at most one cut along
    the other axis on each side, so at most four rectangular leaves.
    """
    root = _leaf_score(g.sum(), h.sum(), cfg.min_hessian)
    best_gain, best_update = 0.0, None
    for axis in (0, 1):
        G, H, C = (g, h, c) if axis == 0 else (g.T, h.T, c.T)
        if G.shape[0] < 2:
            continue
        # row a of `top` sums the rows 0..a, `bottom` the rest
        top = [np.cumsum(a, axis=0)[:-1] for a in (G, H, C)]
        bottom = [a.sum(axis=0) - t for a, t in zip((G, H, C), top)]
        top_gain, top_cut = _best_cuts(*top, cfg.min_samples_leaf, cfg.min_hessian)
        bottom_gain, bottom_cut = _best_cuts(*bottom, cfg.min_samples_leaf, cfg.min_hessian)
        first = (
            _leaf_score(top[0].sum(axis=1), top[1].sum(axis=1), cfg.min_hessian)
            + _leaf_score(bottom[0].sum(axis=1), bottom[1].sum(axis=1), cfg.min_hessian)
            - root
        )
        admissible = (top[2].sum(axis=1) >= cfg.min_samples_leaf) & (bottom[2].sum(axis=1) >= cfg.min_samples_leaf)
        total = np.where(admissible, first + top_gain + bottom_gain, -np.inf)
        a = int(np.argmax(total))
        if not total[a] > best_gain:
            continue
        best_gain = total[a]
        update = np.empty(G.shape)
        for rows, cut in ((slice(0, a + 1), int(top_cut[a])), (slice(a + 1, None), int(bottom_cut[a]))):
            for cols in ((slice(0, cut), slice(cut, None)) if cut > 0 else (slice(None),)):
                update[rows, cols] = _leaf_value(G[rows, cols], H[rows, cols], cfg)
        best_update = update if axis == 0 else update.T
    if best_update is None:
        best_update = np.full(g.shape, _leaf_value(g, h, cfg))
    return best_update


def _boost_terms(terms, f_train, f_val, y_train, y_val, cfg):
    """
    Cyclic boosting of a set of binned terms on one bag.

    Each term is (train cell index, validation cell index, table shape), with the cell
    index flattened over the table. A micro-step sums the log-loss gradient and
    hessian per cell, fits a shallow tree to those sums (`_main_step` or `_pair_step`)
    and adds its scaled leaf values to the table. Returns the tables at the best
    validation round.
    """
    scores = [np.zeros(shape) for _, _, shape in terms]
    best_scores = [s.copy() for s in scores]
    f_train = f_train.copy()
    f_val = f_val.copy()
    best_loss = _validation_log_loss(y_val, f_val)
    curve = [best_loss]
    best_round = 0
    rounds_run = 0
    if not terms:
        return best_scores, {"rounds_run": 0, "early_stop_round": 0, "validation_curve": curve}

    sizes = [int(np.prod(shape)) for _, _, shape in terms]
    # goal and row counts per cell do not change between rounds
    goals = [np.bincount(t, weights=y_train, minlength=s) for (t, _, _), s in zip(terms, sizes)]
    counts = [np.bincount(t, minlength=s).reshape(shape) for (t, _, shape), s in zip(terms, sizes)]
    p = np.empty_like(f_train)
    w = np.empty_like(f_train)

    for round_number in range(1, cfg.max_rounds + 1):
        for k, (train_cells, val_cells, shape) in enumerate(terms):
            expit(f_train, out=p)
            np.subtract(1.0, p, out=w)
            w *= p
            gradient = (goals[k] - np.bincount(train_cells, weights=p, minlength=sizes[k])).reshape(shape)
            hessian = np.bincount(train_cells, weights=w, minlength=sizes[k]).reshape(shape)
            step = _pair_step if len(shape) == 2 else _main_step
            update = step(gradient, hessian, counts[k], cfg)
            scores[k] += update
            flat = update.reshape(-1)
            f_train += flat[train_cells]
            f_val += flat[val_cells]
        rounds_run = round_number
        loss = _validation_log_loss(y_val, f_val)
        curve.append(loss)
        if loss < best_loss - cfg.early_stopping_tolerance:
            best_loss = loss
            best_round = round_number
            best_scores = [s.copy() for s in scores]
        elif round_number - best_round >= cfg.early_stopping_patience:
            break
    return best_scores, {"rounds_run": rounds_run, "early_stop_round": best_round, "validation_curve": curve}


def _boost_bag(cells, shapes, base, y, train_rows, val_rows, cfg):
    """One bag of one stage: slices the full-length cell indices and runs the boosting."""
    terms = [(c[train_rows], c[val_rows], shape) for c, shape in zip(cells, shapes)]
    return _boost_terms(terms, base[train_rows], base[val_rows], y[train_rows], y[val_rows], cfg)


def _boost_bags(cells, shapes, base, y, splits, cfg):
    """
    Runs every bag of one stage, on joblib workers when `n_jobs` allows.

    Bags are independent given their split, and results come back in bag order,
    so the averaged tables do not depend on the worker count.
    """
    jobs = [delayed(_boost_bag)(cells, shapes, base, y, train_rows, val_rows, cfg) for train_rows, val_rows in splits]
    n_jobs = min(effective_n_jobs(cfg.n_jobs), len(jobs))
    if n_jobs <= 1 or not cells:
        return [func(*args, **kwargs) for func, args, kwargs in jobs]
    return Parallel(n_jobs=n_jobs)(jobs)


def _bag_splits(n, cfg):
    rng = np.random.default_rng(cfg.seed)
    n_val = min(max(1, int(round(cfg.validation_fraction * n))), n - 1)
    splits = []
    for _ in range(cfg.bag_count):
        order = rng.permutation(n)
        splits.append((np.sort(order[n_val:]), np.sort(order[:n_val])))
    return splits


def _center(scores, counts, total):
    """Removes the training-weighted mean from a table; returns (centred scores, mean)."""
    mean = float((scores * counts).sum() / total)
    return scores - mean, mean


def _prepare(matrix, labels, feature_names):
    if isinstance(matrix, pd.DataFrame):
        if feature_names is None:
            feature_names = [str(c) for c in matrix.columns]
        matrix = matrix.to_numpy(dtype=float)
    X = np.asarray(matrix, dtype=float)
    y = np.asarray(labels)
    if X.ndim != 2:
        raise DimensionMismatch(f"feature matrix must be two-dimensional, got shape {X.shape}")
    if X.shape[0] == 0:
        raise EmptyDataset("cannot fit a model on zero rows")
    if y.shape != (X.shape[0],):
        raise DimensionMismatch(f"{X.shape[0]} feature rows but labels of shape {y.shape}")
    if not np.all(np.isin(y, (0, 1))):
        raise InvalidRecord("labels must be 0 or 1")
    if not np.all(np.isfinite(X)):
        bad_row, bad_col = np.argwhere(~np.isfinite(X))[0]
        raise NonFiniteFeature(f"non-finite value in row {bad_row}, feature {bad_col}")
    if feature_names is None:
        feature_names = [f"feature_{j}" for j in range(X.shape[1])]
    if len(feature_names) != X.shape[1]:
        raise DimensionMismatch(f"{len(feature_names)} feature names for {X.shape[1]} columns")
    return X, y.astype(float), list(feature_names)


def fit(matrix, labels, whitelist, cfg, feature_names=None, feature_spec=None, run_config=None):
    """
    Fits the additive model.

    Args:
        matrix: (n, p) features (a DataFrame supplies the feature names)
        labels: n labels in {0, 1}
        whitelist: feature-name pairs allowed to get a pairwise function
        cfg: TrainConfig
        feature_names: names when `matrix` is a bare array
        feature_spec: embedded in the model for later featurization
        run_config: effective run configuration, echoed into the artifact

    Returns:
        GamModel
    """
    if feature_names is None and feature_spec is not None and not isinstance(matrix, pd.DataFrame):
        feature_names = feature_spec.feature_names
    X, y, names = _prepare(matrix, labels, feature_names)
    n, p = X.shape
    position = {name: j for j, name in enumerate(names)}
    pairs = []
    for a, b in whitelist:
        if a not in position or b not in position:
            raise UnknownFeature(f"whitelisted pair ({a}, {b}) references a feature the matrix lacks")
        pairs.append((a, b))

    rate = float(y.mean())
    main_edges = bin_features(X, cfg.max_bins)
    main_bins = [np.searchsorted(e, X[:, j], side="right") for j, e in enumerate(main_edges)]
    main_sizes = [len(e) + 1 for e in main_edges]
    main_counts = [np.bincount(b, minlength=s) for b, s in zip(main_bins, main_sizes)]

    pair_meta = []
    for a, b in pairs:
        i, j = position[a], position[b]
        ei, ej = bin_edges(X[:, i], cfg.max_bins_pair), bin_edges(X[:, j], cfg.max_bins_pair)
        bi, bj = np.searchsorted(ei, X[:, i], side="right"), np.searchsorted(ej, X[:, j], side="right")
        shape = (len(ei) + 1, len(ej) + 1)
        cells = bi * shape[1] + bj
        counts = np.bincount(cells, minlength=shape[0] * shape[1]).reshape(shape)
        pair_meta.append(((a, b), (i, j), (ei, ej), shape, cells, counts))

    report = {
        "n_rows": int(n),
        "base_rate": rate,
        "train_config": cfg.to_dict(),
        "main_stage": {"rounds_run": [], "early_stop_round": [], "validation_curves": []},
        "pair_stage": {"rounds_run": [], "early_stop_round": [], "validation_curves": []},
        "degenerate_labels": False,
    }

    main_scores = [np.zeros(s) for s in main_sizes]
    pair_scores = [np.zeros(meta[3]) for meta in pair_meta]

    if rate in (0.0, 1.0):
        logging.warning(f"All {n} labels belong to one class; returning the constant-rate model")
        report["degenerate_labels"] = True
        intercept = float(logit(min(max(rate, _RATE_EPSILON), 1.0 - _RATE_EPSILON)))
    else:
        intercept = float(logit(rate))
        splits = _bag_splits(n, cfg)

        # Single-bin features carry no information and keep a zero table.
        active_main = [j for j in range(p) if main_sizes[j] > 1]
        results = _boost_bags(
            [main_bins[j] for j in active_main], [(main_sizes[j],) for j in active_main],
            np.full(n, intercept), y, splits, cfg,
        )
        for bag, (bag_scores, stage) in enumerate(results):
            for j, s in zip(active_main, bag_scores):
                main_scores[j] += s / cfg.bag_count
            _record_stage(report["main_stage"], stage)
            logging.info(
                f"Bag {bag + 1}/{cfg.bag_count}: main effects stopped at round {stage['early_stop_round']} "
                f"of {stage['rounds_run']}"
            )

        # Pairwise functions are boosted on top of the averaged, now frozen, main effects.
        frozen_main = np.full(n, intercept)
        for j in active_main:
            frozen_main = frozen_main + main_scores[j][main_bins[j]]
        active_pairs = [k for k, meta in enumerate(pair_meta) if min(meta[3]) > 1]
        results = _boost_bags(
            [pair_meta[k][4] for k in active_pairs], [pair_meta[k][3] for k in active_pairs],
            frozen_main, y, splits, cfg,
        )
        for bag, (bag_scores, stage) in enumerate(results):
            for k, s in zip(active_pairs, bag_scores):
                pair_scores[k] += s / cfg.bag_count
            _record_stage(report["pair_stage"], stage)
            if active_pairs:
                logging.info(
                    f"Bag {bag + 1}/{cfg.bag_count}: pairwise effects stopped at round {stage['early_stop_round']} "
                    f"of {stage['rounds_run']}"
                )

    main_effects = []
    for j in range(p):
        scores, mean = _center(main_scores[j], main_counts[j], n)
        intercept += mean
        main_effects.append(BinnedFunction(
            features=(names[j],), indices=(j,), edges=(main_edges[j],), scores=scores, counts=main_counts[j],
        ))
    pair_effects = []
    for (names_ij, idx_ij, edges_ij, _, _, counts), table in zip(pair_meta, pair_scores):
        scores, mean = _center(table, counts, n)
        intercept += mean
        pair_effects.append(BinnedFunction(
            features=names_ij, indices=idx_ij, edges=edges_ij, scores=scores, counts=counts,
        ))

    return GamModel(
        intercept=float(intercept),
        feature_names=names,
        main_effects=main_effects,
        pair_effects=pair_effects,
        whitelist=[list(pair) for pair in pairs],
        feature_spec=feature_spec,
        training_report=report,
        config=dict(run_config or {}),
    )


def _record_stage(stage_report, stage):
    stage_report["rounds_run"].append(stage["rounds_run"])
    stage_report["early_stop_round"].append(stage["early_stop_round"])
    stage_report["validation_curves"].append(stage["validation_curve"])


def constant_model(rate, feature_spec=None, run_config=None):
    """The naive baseline: predicts `rate` for every shot."""
    if not 0.0 < rate < 1.0:
        raise InvalidConfig(f"the baseline rate must lie in (0, 1), got {rate}")
    spec = feature_spec if feature_spec is not None else FeatureSpec(CONSTANT)
    return GamModel(
        intercept=float(logit(rate)),
        feature_names=[],
        main_effects=[],
        pair_effects=[],
        whitelist=[],
        feature_spec=spec,
        training_report={"base_rate": float(rate), "constant": True},
        config=dict(run_config or {}),
    )


def predict_proba(m, v):
    """Goal probability for one feature vector (or every row of a matrix)."""
    v = np.asarray(v, dtype=float)
    proba = m.predict_proba(v)
    return float(proba[0]) if v.ndim == 1 else proba


def decision_function(m, X):
    return m.decision_function(X)


def prediction_stability(m, spec, d, offset=0.1, seed=0):
    """
    Absolute change in predicted probability when each shot moves `offset` metres.

    Each shot is moved in a random direction (seeded) and clipped to the pitch; body
    part and penalty flag are kept. `spec` defaults to the model's own feature spec.
    Returns one difference per shot; its maximum is the stability figure.
    """
    spec = spec if spec is not None else m.feature_spec
    if spec is None:
        raise UnsupportedSpec("the model carries no feature spec to featurize moved shots")
    rng = np.random.default_rng(seed)
    direction = rng.uniform(0.0, 2.0 * np.pi, len(d))
    moved = tuple(
        ShotRecord(
            x=float(np.clip(r.x + offset * np.cos(t), 0.0, pitch.PITCH_LENGTH)),
            y=float(np.clip(r.y + offset * np.sin(t), 0.0, pitch.PITCH_WIDTH)),
            body_part=r.body_part, is_penalty=r.is_penalty, is_goal=r.is_goal,
        )
        for r, t in zip(d.records, direction)
    )
    X_before, _ = featurize_dataset(spec, d)
    X_after, _ = featurize_dataset(spec, Dataset(records=moved, provenance=f"{d.provenance}#moved"))
    return np.abs(m.predict_proba(X_after) - m.predict_proba(X_before))


def to_artifact(m):
    """The model as a JSON-serializable document."""
    return {
        "schema_version": ARTIFACT_SCHEMA_VERSION,
        "link": m.link,
        "intercept": float(m.intercept),
        "feature_names": list(m.feature_names),
        "feature_spec": m.feature_spec.to_dict() if m.feature_spec is not None else None,
        "main_effects": [f.to_dict() for f in m.main_effects],
        "pair_effects": [f.to_dict() for f in m.pair_effects],
        "whitelist": [list(pair) for pair in m.whitelist],
        "training_report": m.training_report,
        "config": m.config,
    }


def from_artifact(doc):
    """Rebuilds a model from its document; raises VersionMismatch or CorruptArtifact."""
    if not isinstance(doc, dict) or "schema_version" not in doc:
        raise CorruptArtifact("artifact has no schema_version")
    check_artifact_version(doc["schema_version"])
    try:
        spec_doc = doc["feature_spec"]
        model = GamModel(
            intercept=float(doc["intercept"]),
            feature_names=list(doc["feature_names"]),
            main_effects=[BinnedFunction.from_dict(f) for f in doc["main_effects"]],
            pair_effects=[BinnedFunction.from_dict(f) for f in doc["pair_effects"]],
            whitelist=[tuple(pair) for pair in doc["whitelist"]],
            feature_spec=FeatureSpec.from_dict(spec_doc) if spec_doc is not None else None,
            training_report=dict(doc.get("training_report", {})),
            config=dict(doc.get("config", {})),
            link=doc.get("link", LINK),
        )
    except XgError as e:
        raise CorruptArtifact(f"artifact content is invalid: {e.code}: {e.message}")
    except (KeyError, TypeError, ValueError) as e:
        raise CorruptArtifact(f"artifact is missing or has malformed field: {e}")
    if model.link != LINK:
        raise CorruptArtifact(f"unsupported link function '{model.link}'")
    return model


def serialize(m):
    """Gzipped JSON bytes of the model; identical models give identical bytes."""
    return _compress_json(to_artifact(m))


def deserialize(raw):
    try:
        doc = _decompress_json(raw)
    except (OSError, EOFError, zlib.error, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CorruptArtifact(f"artifact could not be decoded: {e}")
    return from_artifact(doc)


def save_model(m, path):
    return write_json_gz(path, to_artifact(m))


def load_model(path):
    with open(path, 'rb') as f:
        raw = f.read()
    try:
        return deserialize(raw)
    except (CorruptArtifact, VersionMismatch) as e:
        logging.error(f"Failed to load model artifact {path}: {e.message}")
        raise
