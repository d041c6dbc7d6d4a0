"""
Shot records and datasets: CSV ingestion, season splits and the synthetic generator.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import pandas as pd
from scipy.special import expit

from lib import pitch
from lib.errors import (
    EmptyDataset,
    EmptyPartition,
    InvalidConfig,
    InvalidEnum,
    InvalidRecord,
    MissingColumn,
    OutOfRangeCoordinate,
    XgError,
)

BODY_PARTS = ("foot", "head", "other")

CSV_COLUMNS = [
    "x", "y", "body_part", "is_penalty", "is_goal",
    "competition", "season", "match_id", "player_id",
]

ATTACK_DIRECTIONS = ("left_to_right", "right_to_left")

# Shots per competition and season in the reference corpus; the synthetic
# generator samples its season/competition tags with these weights.
SEASON_SHOT_COUNTS = {
    "Premier League": {"2017/2018": 9328, "2018/2019": 9667, "2019/2020": 9429, "2020/2021": 5893},
    "Bundesliga": {"2017/2018": 7760, "2018/2019": 8273, "2019/2020": 8152, "2020/2021": 4849},
    "LaLiga": {"2017/2018": 9191, "2018/2019": 9273, "2019/2020": 8615, "2020/2021": 5054},
    "Serie A": {"2017/2018": 9835, "2018/2019": 10601, "2019/2020": 10910, "2020/2021": 5679},
    "Ligue 1": {"2017/2018": 9475, "2018/2019": 9428, "2019/2020": 6829, "2020/2021": 6182},
}

# Goal rate of the reference training corpus (documentation constant only).
REFERENCE_GOAL_RATE = 0.1051

_COORD_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ShotRecord:
    """One shot event in canonical pitch coordinates."""

    x: float
    y: float
    body_part: str
    is_penalty: bool
    is_goal: bool
    competition: str = ""
    season: str = ""
    match_id: str = ""
    player_id: str = ""

    def __post_init__(self):
        if not (np.isfinite(self.x) and np.isfinite(self.y)) or not bool(pitch.on_pitch(self.x, self.y)):
            raise OutOfRangeCoordinate(
                f"location ({self.x}, {self.y}) is outside [0, {pitch.PITCH_LENGTH}] x [0, {pitch.PITCH_WIDTH}]"
            )
        if self.body_part not in BODY_PARTS:
            raise InvalidEnum(f"unknown body part '{self.body_part}' (expected one of {', '.join(BODY_PARTS)})")
        if self.is_penalty and self.body_part != "foot":
            raise InvalidRecord(f"penalty shot with body part '{self.body_part}' (penalties are footed)")


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of shots plus where it came from."""

    records: tuple
    provenance: str = ""
    ingestion: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.records)

    @classmethod
    def from_frame(cls, frame, provenance="", ingestion=None):
        """Builds a Dataset from a DataFrame holding the CSV columns (already normalized)."""
        records = tuple(
            ShotRecord(
                x=float(x), y=float(y), body_part=str(bp), is_penalty=bool(pen), is_goal=bool(goal),
                competition=str(comp), season=str(season), match_id=str(mid), player_id=str(pid),
            )
            for x, y, bp, pen, goal, comp, season, mid, pid in zip(*(frame[c] for c in CSV_COLUMNS))
        )
        return cls(records=records, provenance=provenance, ingestion=dict(ingestion or {}))

    @cached_property
    def arrays(self):
        """Column arrays for vectorized consumers (featurization, metrics)."""
        return {
            "x": np.fromiter((r.x for r in self.records), dtype=float, count=len(self.records)),
            "y": np.fromiter((r.y for r in self.records), dtype=float, count=len(self.records)),
            "body_part": np.array([r.body_part for r in self.records], dtype=object),
            "is_penalty": np.fromiter((r.is_penalty for r in self.records), dtype=bool, count=len(self.records)),
            "is_goal": np.fromiter((r.is_goal for r in self.records), dtype=bool, count=len(self.records)),
            "season": np.array([r.season for r in self.records], dtype=object),
        }

    def to_frame(self):
        """Returns the dataset as a DataFrame with the CSV schema (booleans as 0/1)."""
        frame = pd.DataFrame(
            [[getattr(r, c) for c in CSV_COLUMNS] for r in self.records],
            columns=CSV_COLUMNS,
        )
        for column in ("is_penalty", "is_goal"):
            frame[column] = frame[column].astype(int)
        return frame


def _validate_coord_spec(coord_spec):
    spec = {"x_range": pitch.PITCH_LENGTH, "y_range": pitch.PITCH_WIDTH, "attack": "left_to_right"}
    spec.update(coord_spec or {})
    if float(spec["x_range"]) <= 0 or float(spec["y_range"]) <= 0:
        raise InvalidConfig(f"coordinate ranges must be positive: {spec}")
    if spec["attack"] not in ATTACK_DIRECTIONS:
        raise InvalidConfig(f"unknown attack direction '{spec['attack']}' (expected one of {ATTACK_DIRECTIONS})")
    return spec


def normalize_coordinates(x, y, coord_spec=None):
    """Rescales input coordinates to the canonical 105 x 68 pitch, attacking left to right."""
    spec = _validate_coord_spec(coord_spec)
    nx = float(x) / float(spec["x_range"]) * pitch.PITCH_LENGTH
    ny = float(y) / float(spec["y_range"]) * pitch.PITCH_WIDTH
    if spec["attack"] == "right_to_left":
        nx = pitch.PITCH_LENGTH - nx
        ny = pitch.PITCH_WIDTH - ny
    # Snap rounding noise at the touchlines back onto the pitch.
    if -_COORD_TOLERANCE < nx < 0.0 or pitch.PITCH_LENGTH < nx < pitch.PITCH_LENGTH + _COORD_TOLERANCE:
        nx = min(max(nx, 0.0), pitch.PITCH_LENGTH)
    if -_COORD_TOLERANCE < ny < 0.0 or pitch.PITCH_WIDTH < ny < pitch.PITCH_WIDTH + _COORD_TOLERANCE:
        ny = min(max(ny, 0.0), pitch.PITCH_WIDTH)
    return nx, ny


def _parse_flag(value, column):
    text = str(value).strip()
    if text in ("0", "1"):
        return text == "1"
    raise InvalidRecord(f"column '{column}' must be 0 or 1, got '{value}'")


def _parse_row(row, coord_spec):
    try:
        raw_x, raw_y = float(row["x"]), float(row["y"])
    except ValueError:
        raise OutOfRangeCoordinate(f"non-numeric coordinate ({row['x']!r}, {row['y']!r})")
    x, y = normalize_coordinates(raw_x, raw_y, coord_spec)
    body_part = str(row["body_part"]).strip().lower()
    if body_part not in BODY_PARTS:
        raise InvalidEnum(f"unknown body part '{row['body_part']}'")
    return ShotRecord(
        x=x, y=y, body_part=body_part,
        is_penalty=_parse_flag(row["is_penalty"], "is_penalty"),
        is_goal=_parse_flag(row["is_goal"], "is_goal"),
        competition=str(row["competition"]), season=str(row["season"]),
        match_id=str(row["match_id"]), player_id=str(row["player_id"]),
    )


def load_csv(path, coord_spec=None, strict=True):
    """
    Loads a shot CSV and normalizes every location to canonical pitch coordinates.

    Line numbers in errors count data rows from 1 (the header is not counted).
    In strict mode the first rejected row raises; otherwise rejected rows are
    dropped and listed in the dataset's ingestion statistics.
    """
    coord_spec = _validate_coord_spec(coord_spec)
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    missing = [c for c in CSV_COLUMNS if c not in frame.columns]
    if missing:
        logging.error(f"Shot file {path} is missing columns: {missing}")
        raise MissingColumn(f"{path}: missing column(s) {', '.join(missing)}")

    records, rejected = [], []
    for line, row in enumerate(frame[CSV_COLUMNS].to_dict("records"), start=1):
        try:
            records.append(_parse_row(row, coord_spec))
        except XgError as e:
            e.line = line
            rejected.append(e)
            logging.warning(f"Rejected row at line {line} of {path}: {e.code}: {e.message}")

    if rejected and strict:
        first = rejected[0]
        lines = ", ".join(str(e.line) for e in rejected[:20])
        raise type(first)(
            f"{path} line {first.line}: {first.message} ({len(rejected)} rejected row(s) at line(s) {lines})",
            line=first.line,
        )

    outside = sum(1 for r in records if r.x < pitch.HALFWAY_X)
    ingestion = {
        "rows_read": len(frame),
        "rows_rejected": len(rejected),
        "rejected": [{"line": e.line, "code": e.code, "message": e.message} for e in rejected],
        "outside_attacking_half": outside,
    }
    if outside:
        logging.info(f"{outside} shot(s) in {path} were taken from outside the attacking half")
    logging.info(f"Loaded {len(records)} shots from {path} ({len(rejected)} rejected)")
    return Dataset(records=tuple(records), provenance=str(path), ingestion=ingestion)


def write_csv(d, path):
    """Writes a dataset using the documented CSV schema."""
    d.to_frame().to_csv(path, index=False, lineterminator="\n")
    logging.info(f"Wrote {len(d)} shots to {path}")
    return path


def split_by_season(d, test_seasons):
    """Splits a dataset into train/test partitions by season tag."""
    test_seasons = set(test_seasons)
    train = tuple(r for r in d.records if r.season not in test_seasons)
    test = tuple(r for r in d.records if r.season in test_seasons)
    if not train or not test:
        side = "train" if not train else "test"
        raise EmptyPartition(
            f"season split leaves the {side} partition empty (test seasons: {sorted(test_seasons)})"
        )
    logging.info(f"Season split: {len(train)} training shots, {len(test)} test shots")
    return (
        Dataset(records=train, provenance=f"{d.provenance}#train"),
        Dataset(records=test, provenance=f"{d.provenance}#test"),
    )


def class_rate(d):
    """Proportion of shots that resulted in a goal."""
    if len(d) == 0:
        raise EmptyDataset("cannot compute the goal rate of an empty dataset")
    return sum(1 for r in d.records if r.is_goal) / len(d)


def season_summary(d):
    """Shot counts per competition and season, with totals."""
    frame = pd.DataFrame({
        "competition": [r.competition for r in d.records],
        "season": [r.season for r in d.records],
    })
    return pd.crosstab(frame["competition"], frame["season"], margins=True, margins_name="Total")


@dataclass(frozen=True)
class SyntheticGroundTruth:
    """
    Closed-form goal probability surface used as a known oracle.

    p* = sigmoid(intercept + distance_coef * distance + angle_coef * angle + body-part offset)
    for open-play shots, and a fixed probability for penalties. Setting
    `constant_probability` replaces the whole surface by a constant.
    """

    seed: int
    intercept: float = -1.2
    distance_coef: float = -0.11
    angle_coef: float = 1.4
    head_offset: float = -0.9
    other_offset: float = -0.5
    penalty_probability: float = 0.76
    constant_probability: float = None
    # Sampling scheme
    penalty_rate: float = 0.01
    distance_shape: float = 3.0
    distance_scale: float = 5.5
    direction_sd: float = 0.55

    @classmethod
    def from_config(cls, synthetic_config):
        fields = {k: v for k, v in synthetic_config.items() if k in cls.__dataclass_fields__}
        if fields.get("seed") is None:
            raise InvalidConfig("the synthetic generator needs a seed")
        return cls(**fields)

    def to_dict(self):
        return {name: getattr(self, name) for name in self.__dataclass_fields__}

    def probability(self, x, y, body_part, is_penalty):
        """Vectorized p*(x, y, body_part, is_penalty)."""
        x = np.asarray(x, dtype=float)
        body_part = np.asarray(body_part, dtype=object)
        if self.constant_probability is not None:
            return np.full(x.shape, float(self.constant_probability))
        score = (
            self.intercept
            + self.distance_coef * pitch.distance_to_goal(x, y)
            + self.angle_coef * pitch.goal_angle(x, y)
            + np.where(body_part == "head", self.head_offset, 0.0)
            + np.where(body_part == "other", self.other_offset, 0.0)
        )
        return np.where(np.asarray(is_penalty, dtype=bool), self.penalty_probability, expit(score))


def ground_truth_proba(gt, d):
    """p* for every record of a dataset."""
    a = d.arrays
    return gt.probability(a["x"], a["y"], a["body_part"], a["is_penalty"])


def _season_cells():
    cells = [(comp, season, count) for comp, seasons in SEASON_SHOT_COUNTS.items() for season, count in seasons.items()]
    weights = np.array([c[2] for c in cells], dtype=float)
    return cells, weights / weights.sum()


def generate_synthetic(gt, n):
    """
    Draws `n` shots from the documented sampling scheme and labels them from p*.

    Sampling scheme (all draws from one generator seeded with gt.seed, in this order):
      - penalty with probability gt.penalty_rate, taken from the penalty spot with the foot;
      - otherwise distance to goal 1 m + Gamma(distance_shape, distance_scale) and a direction
        N(0, direction_sd) around the goal axis (clipped to +-1.5 rad), clipped to the pitch;
      - body part: head with probability 0.35 within 12 m, 0.08 within 18 m, 0.01 beyond;
        other with probability 0.02; foot otherwise;
      - competition/season cell drawn with the reference shot-count weights;
      - label: independent coin flip with probability p*.
    """
    if n is None or int(n) < 1:
        raise InvalidConfig(f"the number of synthetic shots must be at least 1, got {n}")
    n = int(n)
    rng = np.random.default_rng(gt.seed)

    penalty = rng.random(n) < gt.penalty_rate
    distance = 1.0 + rng.gamma(gt.distance_shape, gt.distance_scale, n)
    direction = np.clip(rng.normal(0.0, gt.direction_sd, n), -1.5, 1.5)
    x = np.clip(pitch.GOAL_X - distance * np.cos(direction), 0.0, pitch.PITCH_LENGTH)
    y = np.clip(pitch.GOAL_Y + distance * np.sin(direction), 0.0, pitch.PITCH_WIDTH)
    x = np.where(penalty, pitch.PENALTY_SPOT[0], x)
    y = np.where(penalty, pitch.PENALTY_SPOT[1], y)

    u_body = rng.random(n)
    head_probability = np.select([distance < 12.0, distance < 18.0], [0.35, 0.08], default=0.01)
    body_part = np.where(u_body < head_probability, "head",
                         np.where(u_body < head_probability + 0.02, "other", "foot")).astype(object)
    body_part[penalty] = "foot"

    cells, weights = _season_cells()
    cell = rng.choice(len(cells), size=n, p=weights)
    match_number = rng.integers(0, 2000, n)
    player_number = rng.integers(0, 3000, n)

    p_star = gt.probability(x, y, body_part, penalty)
    is_goal = rng.random(n) < p_star

    frame = pd.DataFrame({
        "x": x,
        "y": y,
        "body_part": body_part,
        "is_penalty": penalty,
        "is_goal": is_goal,
        "competition": [cells[c][0] for c in cell],
        "season": [cells[c][1] for c in cell],
        "match_id": [f"m{m:04d}" for m in match_number],
        "player_id": [f"p{p:04d}" for p in player_number],
    })
    logging.info(f"Generated {n} synthetic shots (seed {gt.seed}), goal rate {is_goal.mean():.4f}")
    return Dataset.from_frame(frame, provenance=f"synthetic:seed={gt.seed}")
