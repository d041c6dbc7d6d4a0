"""
Explanations of a fitted additive model.

Global feature importances, per-feature shape tables, pairwise interaction grids and
per-shot contribution breakdowns, plus the export of all of them as CSV/JSON/text.
Every explanation is an exact decomposition of the model's logit score.
"""

import logging
import math
import os
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.special import expit

from lib.errors import DimensionMismatch, EmptyDataset, NotWhitelisted, UnknownFeature, XgError
from lib.storage_writer import write_frame_csv, write_json, write_text

# Tolerance of the additivity check on emitted explanations.
ADDITIVITY_TOLERANCE = 1e-9


def _reference_matrix(m, reference):
    X = reference.to_numpy(dtype=float) if isinstance(reference, pd.DataFrame) else np.asarray(reference, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[0] == 0:
        raise EmptyDataset("the reference set for explanations is empty")
    if X.shape[1] != len(m.feature_names):
        raise DimensionMismatch(f"reference has {X.shape[1]} columns, the model expects {len(m.feature_names)}")
    return X


def global_importance(m, reference):
    """
    Mean absolute log-odds contribution of every function over a reference set.

    Pairwise functions appear as separate entries named "<a> x <b>". Sorted by
    importance descending, ties broken by name.
    """
    X = _reference_matrix(m, reference)
    contributions = m.term_contributions(X)
    frame = pd.DataFrame({
        "feature": [f.name for f in m.functions],
        "importance": np.abs(contributions).mean(axis=0) if contributions.size else np.zeros(0),
    })
    return frame.sort_values(["importance", "feature"], ascending=[False, True], kind="mergesort").reset_index(drop=True)


def shape_table(m, feature):
    """One row per bin of a main effect: range, score and share of the training rows."""
    if feature not in m.feature_names:
        raise UnknownFeature(f"unknown feature '{feature}'")
    f = m.main_effects[m.feature_names.index(feature)]
    ranges = f.bin_ranges()
    total = f.counts.sum()
    return pd.DataFrame({
        "feature": feature,
        "bin_lo": [lo for lo, _ in ranges],
        "bin_hi": [hi for _, hi in ranges],
        "score": f.scores,
        "density": f.counts / total if total else np.zeros(len(ranges)),
    })


def _pair_function(m, pair):
    a, b = pair
    for name in (a, b):
        if name not in m.feature_names:
            raise UnknownFeature(f"unknown feature '{name}'")
    for f in m.pair_effects:
        if set(f.features) == {a, b}:
            return f
    raise NotWhitelisted(f"pair ({a}, {b}) is not in the model's interaction whitelist")


def interaction_table(m, pair):
    """
    Long-format grid of a pairwise function: one row per (bin_i, bin_j) cell.

    Axis i is the pair's first feature as stored in the model.
    """
    f = _pair_function(m, pair)
    ranges_i, ranges_j = f.bin_ranges(0), f.bin_ranges(1)
    rows = []
    for i, (lo_i, hi_i) in enumerate(ranges_i):
        for j, (lo_j, hi_j) in enumerate(ranges_j):
            rows.append({
                "pair": f.name, "bin_i": i, "bin_j": j, "score": float(f.scores[i, j]),
                "bin_i_lo": lo_i, "bin_i_hi": hi_i, "bin_j_lo": lo_j, "bin_j_hi": hi_j,
            })
    return pd.DataFrame(rows)


def interaction_grid(m, pair):
    """The pairwise scores as a bins_i x bins_j DataFrame."""
    table = interaction_table(m, pair)
    return table.pivot(index="bin_i", columns="bin_j", values="score")


@dataclass(frozen=True)
class LocalExplanation:
    shot_id: object
    intercept: float
    # (function name, input value(s), log-odds contribution), largest |contribution| first
    contributions: tuple
    probability: float
    score: float

    def additivity_gap(self):
        return abs(self.intercept + math.fsum(c for _, _, c in self.contributions) - self.score)

    def to_dict(self):
        return {
            "shot_id": self.shot_id,
            "intercept": self.intercept,
            "contributions": [
                {"feature": name, "value": list(value) if isinstance(value, tuple) else value, "contribution": c}
                for name, value, c in self.contributions
            ],
            "score": self.score,
            "probability": self.probability,
        }

    def to_text(self):
        lines = [f"Shot {self.shot_id}", f"  {'intercept':<40} {self.intercept:+.6f}"]
        for name, value, c in self.contributions:
            shown = ", ".join(f"{v:.4f}" for v in value) if isinstance(value, tuple) else f"{value:.4f}"
            lines.append(f"  {name + ' = ' + shown:<40} {c:+.6f}")
        lines.append(f"  {'logit score':<40} {self.score:+.6f}")
        lines.append(f"  {'goal probability':<40} {self.probability:.6f}")
        return "\n".join(lines)


def explain_local(m, v, shot_id=None):
    """Breaks the prediction for one feature vector into per-function contributions."""
    x = np.asarray(v, dtype=float)
    if x.ndim != 1 or x.size != len(m.feature_names):
        raise DimensionMismatch(f"expected a vector of {len(m.feature_names)} feature(s), got shape {x.shape}")
    X = x.reshape(1, -1)
    entries = []
    for f in m.functions:
        contribution = float(f.contributions(X)[0])
        value = tuple(float(x[i]) for i in f.indices) if f.is_pair else float(x[f.indices[0]])
        entries.append((f.name, value, contribution))
    entries.sort(key=lambda e: (-abs(e[2]), e[0]))
    score = float(m.decision_function(X)[0])
    return LocalExplanation(
        shot_id=shot_id,
        intercept=float(m.intercept),
        contributions=tuple(entries),
        probability=float(expit(score)),
        score=score,
    )


def _safe_name(name):
    return name.replace(os.sep, "_").replace(" ", "_")


def export_explanations(m, reference, out_dir, local_vectors=None, features=None):
    """
    Writes the explanation files for a model under `out_dir`.

      importance.csv                 feature, importance
      shapes/<feature>.csv           feature, bin_lo, bin_hi, score, density
      shape_functions_long.csv       every shape table stacked, for plotting
      interactions/<a>__<b>.csv      pair, bin_i, bin_j, score and the bin ranges
      local/shot_<i>.json / .txt     one per entry of `local_vectors` ({shot index: vector})

    `features` restricts the shape tables to the named features. Returns the list of
    written paths.
    """
    written = []
    importance = global_importance(m, reference)
    written.append(write_frame_csv(os.path.join(out_dir, "importance.csv"), importance))

    shape_features = list(features) if features else list(m.feature_names)
    shapes = [shape_table(m, name) for name in shape_features]
    for name, table in zip(shape_features, shapes):
        written.append(write_frame_csv(os.path.join(out_dir, "shapes", f"{_safe_name(name)}.csv"), table))
    if shapes:
        written.append(write_frame_csv(os.path.join(out_dir, "shape_functions_long.csv"), pd.concat(shapes, ignore_index=True)))

    for f in m.pair_effects:
        table = interaction_table(m, f.features)
        file_name = f"{_safe_name(f.features[0])}__{_safe_name(f.features[1])}.csv"
        written.append(write_frame_csv(os.path.join(out_dir, "interactions", file_name), table))

    for index, vector in sorted((local_vectors or {}).items()):
        explanation = explain_local(m, vector, shot_id=int(index))
        gap = explanation.additivity_gap()
        if gap > ADDITIVITY_TOLERANCE:
            logging.error(f"Explanation for shot {index} does not add up (gap {gap:.3e})")
            raise XgError(f"explanation for shot {index} is not additive (gap {gap:.3e})")
        written.append(write_json(os.path.join(out_dir, "local", f"shot_{index}.json"), explanation.to_dict()))
        written.append(write_text(os.path.join(out_dir, "local", f"shot_{index}.txt"), explanation.to_text()))

    logging.info(f"Exported {len(written)} explanation file(s) to {out_dir}")
    return written
