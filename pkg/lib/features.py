"""
Feature vectors for shots under the soft-zone, hard-zone and distance-angle representations.
"""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from lib import pitch
from lib.errors import EmptyDataset, MissingZoneModel, UnsupportedSpec
from lib.zones import ZoneModel
from lib.storage_writer import write_frame_csv

SOFT_ZONES = "soft_zones"
HARD_ZONES = "hard_zones"
DISTANCE_ANGLE = "distance_angle"
# No features at all: the naive constant-rate baseline.
CONSTANT = "constant"

REPRESENTATIONS = (SOFT_ZONES, HARD_ZONES, DISTANCE_ANGLE, CONSTANT)
ZONE_REPRESENTATIONS = (SOFT_ZONES, HARD_ZONES)

INDICATOR_NAMES = ["bodypart_foot_a0", "bodypart_head_a0", "bodypart_other_a0", "type_shot_penalty_a0"]
LOCATION_NAMES = ["start_dist_to_goal", "start_angle_to_goal"]


@dataclass(frozen=True)
class FeatureSpec:
    representation: str
    zone_model: ZoneModel = None

    def __post_init__(self):
        if self.representation not in REPRESENTATIONS:
            raise UnsupportedSpec(f"unknown representation '{self.representation}'")
        if self.representation in ZONE_REPRESENTATIONS:
            if self.zone_model is None or not self.zone_model.frozen:
                raise MissingZoneModel(f"the {self.representation} representation needs a frozen zone model")
        elif self.zone_model is not None:
            raise UnsupportedSpec(f"the {self.representation} representation does not take a zone model")

    @property
    def feature_names(self):
        if self.representation in ZONE_REPRESENTATIONS:
            return self.zone_model.zone_names + INDICATOR_NAMES
        if self.representation == DISTANCE_ANGLE:
            return LOCATION_NAMES + INDICATOR_NAMES
        return []

    def to_dict(self):
        return {
            "representation": self.representation,
            "zone_model": self.zone_model.to_dict() if self.zone_model is not None else None,
            "feature_names": self.feature_names,
        }

    @classmethod
    def from_dict(cls, data):
        zone_data = data.get("zone_model")
        zone_model = ZoneModel.from_dict(zone_data) if zone_data is not None else None
        return cls(representation=data["representation"], zone_model=zone_model)


def _indicator_block(body_part, is_penalty):
    body_part = np.asarray(body_part, dtype=object)
    return np.column_stack([
        (body_part == "foot").astype(float),
        (body_part == "head").astype(float),
        (body_part == "other").astype(float),
        np.asarray(is_penalty, dtype=bool).astype(float),
    ])


def _feature_matrix(spec, x, y, body_part, is_penalty):
    indicators = _indicator_block(body_part, is_penalty)
    if spec.representation in ZONE_REPRESENTATIONS:
        location = spec.zone_model.memberships(np.column_stack([x, y]))
    elif spec.representation == DISTANCE_ANGLE:
        location = np.column_stack([pitch.distance_to_goal(x, y), pitch.goal_angle(x, y)])
    else:
        return np.empty((len(indicators), 0))
    return np.hstack([location, indicators])


def featurize(spec, s):
    """Feature vector of one shot, aligned with spec.feature_names."""
    return _feature_matrix(spec, np.array([s.x]), np.array([s.y]), [s.body_part], [s.is_penalty])[0]


def featurize_dataset(spec, d):
    """
    Feature matrix and label vector for a dataset.

    Returns:
        (DataFrame with columns = spec.feature_names, int array of 0/1 labels), row order preserved
    """
    if len(d) == 0:
        raise EmptyDataset("cannot featurize an empty dataset")
    a = d.arrays
    matrix = _feature_matrix(spec, a["x"], a["y"], a["body_part"], a["is_penalty"])
    logging.debug(f"Featurized {len(d)} shots into {matrix.shape[1]} {spec.representation} features")
    return feature_frame(spec, matrix), a["is_goal"].astype(int)


def feature_frame(spec, matrix):
    """Wraps a raw matrix as a DataFrame headed by the feature names."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    return pd.DataFrame(matrix, columns=spec.feature_names)


def export_feature_csv(spec, matrix, path):
    """Writes a feature matrix as CSV with the feature names as header."""
    return write_frame_csv(path, feature_frame(spec, matrix))
