import os
import copy
import json
import logging

from lib.errors import InvalidConfig

DEFAULT_CONFIG_PATH = "config/xg-config.json"

# Built-in defaults; config/xg-config.json mirrors these values.
DEFAULT_CONFIG = {
    "log_level": "INFO",
    "coord_spec": {
        "x_range": 105.0,
        "y_range": 68.0,
        "attack": "left_to_right",
    },
    "split": {
        "test_seasons": ["2020/2021"],
    },
    "zones": {
        # None means the built-in 16-center table in lib/zones.py
        "centers": None,
        "exponent": 2.0,
        "hard_exponent": 1.001,
        "cmeans_iterations": 1000,
        "tolerance": 1e-9,
    },
    "training": {
        "learning_rate": 0.01,
        "max_rounds": 5000,
        "bag_count": 8,
        "validation_fraction": 0.15,
        "early_stopping_patience": 50,
        "early_stopping_tolerance": 1e-4,
        "max_bins": 64,
        "max_bins_pair": 32,
        "min_hessian": 1e-6,
        "max_leaves": 3,
        "min_samples_leaf": 2,
        # joblib workers for the bags; -1 uses every core
        "n_jobs": -1,
        "include_penalty_pair": True,
        "seed": None,
    },
    "evaluation": {
        "ece_bins": 10,
    },
    "synthetic": {
        "n": 100000,
        "seed": None,
        "intercept": -1.2,
        "distance_coef": -0.11,
        "angle_coef": 1.4,
        "head_offset": -0.9,
        "other_offset": -0.5,
        "penalty_probability": 0.76,
        "constant_probability": None,
        "penalty_rate": 0.01,
        "distance_shape": 3.0,
        "distance_scale": 5.5,
        "direction_sd": 0.55,
    },
}


def load_json_file(file_path):
    """Loads a JSON file from a given path."""
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except FileNotFoundError:
        logging.error(f"Configuration file not found at: {file_path}")
        raise
    except json.JSONDecodeError:
        logging.error(f"Invalid JSON in configuration file: {file_path}")
        raise


def deep_merge(base, override):
    """Returns a copy of `base` with `override` merged in, recursing into nested dicts."""
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def load_config(path=None):
    """
    Loads the run configuration, merged over the built-in defaults.

    Without a path, the shipped config file is resolved against the repository root.
    """
    if path is None:
        path = os.path.join(os.path.dirname(__file__), "..", DEFAULT_CONFIG_PATH)
    abs_path = os.path.abspath(path)
    file_config = load_json_file(abs_path)
    if not isinstance(file_config, dict):
        raise InvalidConfig(f"configuration root must be an object: {abs_path}")
    unknown = set(file_config) - set(DEFAULT_CONFIG)
    if unknown:
        logging.warning(f"Ignoring unknown configuration keys in {abs_path}: {sorted(unknown)}")
    return deep_merge(DEFAULT_CONFIG, file_config)


def apply_overrides(config, overrides):
    """
    Applies command-line overrides given as {"section.key": value}.

    None values are skipped so that unset flags fall through to the file and the defaults.
    """
    result = copy.deepcopy(config)
    for dotted, value in overrides.items():
        if value is None:
            continue
        section, _, key = dotted.partition(".")
        if not key:
            result[section] = value
            continue
        if not isinstance(result.get(section), dict):
            raise InvalidConfig(f"unknown configuration section '{section}'")
        result[section][key] = value
    return result
