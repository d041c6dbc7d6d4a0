import numpy as np
import pytest

from lib import gam, zones
from lib.features import SOFT_ZONES, FeatureSpec, featurize_dataset
from lib.shot_data import CSV_COLUMNS, Dataset, ShotRecord, SyntheticGroundTruth, generate_synthetic


@pytest.fixture
def shot_rows():
    """Rows of a small shot CSV in native 105 x 68 coordinates."""
    return [
        {"x": "94.0", "y": "34.0", "body_part": "foot", "is_penalty": "0", "is_goal": "1",
         "competition": "Premier League", "season": "2017/2018", "match_id": "m1", "player_id": "p1"},
        {"x": "99.5", "y": "30.0", "body_part": "head", "is_penalty": "0", "is_goal": "0",
         "competition": "Premier League", "season": "2018/2019", "match_id": "m2", "player_id": "p2"},
        {"x": "80.0", "y": "20.0", "body_part": "other", "is_penalty": "0", "is_goal": "0",
         "competition": "LaLiga", "season": "2020/2021", "match_id": "m3", "player_id": "p3"},
        {"x": "94.0", "y": "34.0", "body_part": "foot", "is_penalty": "1", "is_goal": "1",
         "competition": "LaLiga", "season": "2020/2021", "match_id": "m4", "player_id": "p4"},
    ]


@pytest.fixture
def write_shots_csv(tmp_path):
    """Returns a helper that writes rows (dicts of strings) to a CSV and returns its path."""
    def _write(rows, name="shots.csv", columns=CSV_COLUMNS):
        path = tmp_path / name
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(str(row[c]) for c in columns))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture
def small_dataset():
    """Ten hand-made shots over two seasons, two of them goals."""
    records = []
    for i in range(10):
        records.append(ShotRecord(
            x=90.0 + i, y=30.0 + i * 0.5, body_part="head" if i % 3 == 0 else "foot",
            is_penalty=False, is_goal=i in (2, 7),
            competition="Serie A", season="2019/2020" if i < 6 else "2020/2021",
            match_id=f"m{i}", player_id=f"p{i}",
        ))
    return Dataset(records=tuple(records), provenance="fixture")


@pytest.fixture(scope="session")
def ground_truth():
    return SyntheticGroundTruth(seed=11)


@pytest.fixture(scope="session")
def synthetic_shots(ground_truth):
    """A seeded 4000-shot synthetic dataset shared by the model tests."""
    return generate_synthetic(ground_truth, 4000)


@pytest.fixture(scope="session")
def fast_train_config():
    """A quick boosting configuration for unit tests."""
    return gam.TrainConfig(learning_rate=0.1, max_rounds=300, bag_count=2, early_stopping_patience=20, n_jobs=1, seed=0)


@pytest.fixture(scope="session")
def fitted_zones(synthetic_shots):
    return zones.fit(zones.default_centers(), synthetic_shots, iterations=25)


@pytest.fixture(scope="session")
def soft_spec(fitted_zones):
    return FeatureSpec(SOFT_ZONES, fitted_zones)


@pytest.fixture(scope="session")
def soft_model(soft_spec, synthetic_shots, fast_train_config):
    """A soft-zone model with the full 25-pair whitelist, trained once per session."""
    X, y = featurize_dataset(soft_spec, synthetic_shots)
    return gam.fit(X, y, gam.build_whitelist(soft_spec), fast_train_config, feature_spec=soft_spec)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
