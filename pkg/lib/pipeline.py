"""
The four compared approaches, from a training partition to a fitted model.

    soft-zones      fuzzy zone memberships (exponent 2) + indicators, 25 whitelisted pairs
    hard-zones      the same centres with exponent 1.001 (near one-hot), same whitelist
    distance-angle  distance and angle to goal + indicators, no pairs
    naive           constant training goal rate
"""

import logging

from lib import gam, zones
from lib.errors import InvalidConfig, UnsupportedSpec
from lib.features import CONSTANT, DISTANCE_ANGLE, HARD_ZONES, SOFT_ZONES, FeatureSpec, featurize_dataset
from lib.shot_data import class_rate

APPROACHES = ("soft-zones", "hard-zones", "distance-angle", "naive")

_REPRESENTATION = {
    "soft-zones": SOFT_ZONES,
    "hard-zones": HARD_ZONES,
    "distance-angle": DISTANCE_ANGLE,
    "naive": CONSTANT,
}


def representation_for(approach):
    if approach not in _REPRESENTATION:
        raise UnsupportedSpec(f"unknown approach '{approach}' (expected one of {', '.join(APPROACHES)})")
    return _REPRESENTATION[approach]


def initial_zone_model(zone_config):
    """Seed centres from the config (a 16-row table) or the built-in table."""
    exponent = float(zone_config.get("exponent", zones.DEFAULT_EXPONENT))
    rows = zone_config.get("centers")
    if rows:
        return zones.zones_from_rows(rows, exponent)
    return zones.default_centers(exponent)


def fit_zone_model(train, zone_config):
    """Refines the seeded centres with c-means on the training shots (soft exponent)."""
    return zones.fit(
        initial_zone_model(zone_config),
        train,
        iterations=int(zone_config.get("cmeans_iterations", 1000)),
        tolerance=float(zone_config.get("tolerance", 1e-9)),
    )


def feature_spec_for(approach, zone_model=None, zone_config=None):
    """
    FeatureSpec of an approach. The hard-zones spec reuses the fitted soft centres
    and only swaps in the near-hard exponent.
    """
    representation = representation_for(approach)
    if representation == SOFT_ZONES:
        return FeatureSpec(SOFT_ZONES, zone_model)
    if representation == HARD_ZONES:
        hard_exponent = float((zone_config or {}).get("hard_exponent", zones.HARD_EXPONENT))
        return FeatureSpec(HARD_ZONES, zones.hard_variant(zone_model, hard_exponent))
    return FeatureSpec(representation)


def train_approach(approach, train, config, zone_model=None):
    """
    Fits one approach on the training partition.

    Args:
        approach: one of APPROACHES
        train: training Dataset
        config: effective run configuration (zones/training sections are used)
        zone_model: an already fitted zone model to reuse; fitted here when needed and absent

    Returns:
        (GamModel, fitted zone model or None)
    """
    representation = representation_for(approach)
    run_config = {"approach": approach, "config": config}
    if representation == CONSTANT:
        rate = class_rate(train)
        logging.info(f"Naive baseline: constant goal rate {rate:.6f} over {len(train)} training shots")
        return gam.constant_model(rate, FeatureSpec(CONSTANT), run_config=run_config), None

    training_config = config.get("training", {})
    if training_config.get("seed") is None:
        raise InvalidConfig("training needs a seed")
    cfg = gam.TrainConfig.from_config(training_config)

    if representation in (SOFT_ZONES, HARD_ZONES) and zone_model is None:
        zone_model = fit_zone_model(train, config.get("zones", {}))
    spec = feature_spec_for(approach, zone_model, config.get("zones", {}))

    X, y = featurize_dataset(spec, train)
    if representation == DISTANCE_ANGLE:
        whitelist = []
    else:
        whitelist = gam.build_whitelist(spec, include_penalty_pair=bool(training_config.get("include_penalty_pair", True)))
    logging.info(f"Training {approach}: {X.shape[0]} shots, {X.shape[1]} features, {len(whitelist)} pairwise functions")
    model = gam.fit(X, y, whitelist, cfg, feature_spec=spec, run_config=run_config)
    return model, zone_model
