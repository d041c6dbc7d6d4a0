"""
Fuzzy zone representation of shot locations.

Sixteen zone centres are seeded by hand; a location's zone features are its fuzzy
c-means memberships to those centres. With the default exponent 2 a location near a
zone boundary shares its membership between the neighbouring zones; an exponent
close to 1 (1.001) degenerates into a hard, nearest-centre assignment.
"""

import logging
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import softmax

from lib import pitch
from lib.errors import EmptyDataset, InvalidZoneTable
from lib.config_loader import load_json_file
from lib.storage_writer import write_json

ZONE_COUNT = 16
PENALTY_AREA_ZONE_COUNT = 12
DEFAULT_EXPONENT = 2.0
HARD_EXPONENT = 1.001

# A location closer than this to a centre belongs to that zone only.
_SINGULAR_DISTANCE = 1e-12

# Default centre table (metres). Zones 1-8 are the penalty-area zones of the classic
# twelve-zone shot map, zones 9-12 sit on the goal line for tight-angle shots, and
# zones 13-16 cover shots from outside the box (zone_14 is the central long-range zone).
DEFAULT_CENTERS = (
    ("zone_1", 102.0, 34.0),
    ("zone_2", 101.0, 25.0),
    ("zone_3", 101.0, 43.0),
    ("zone_4", 96.0, 20.0),
    ("zone_5", 96.0, 48.0),
    ("zone_6", 93.0, 34.0),
    ("zone_7", 90.5, 22.0),
    ("zone_8", 90.5, 46.0),
    ("zone_9", 105.0, 17.0),
    ("zone_10", 105.0, 30.0),
    ("zone_11", 105.0, 38.0),
    ("zone_12", 105.0, 51.0),
    ("zone_13", 82.0, 14.0),
    ("zone_14", 78.0, 34.0),
    ("zone_15", 82.0, 54.0),
    ("zone_16", 66.0, 34.0),
)


def fuzzy_membership(points, centers, exponent):
    """
    Fuzzy c-means memberships of each point to each centre.

    u_i = 1 / sum_k (d_i / d_k) ** (2 / (m - 1)), computed as a softmax of
    -(2 / (m - 1)) * log(d) so that exponents close to 1 neither overflow nor
    underflow. A point within 1e-12 of a centre gets membership 1 for that centre.

    Args:
        points: (n, dims) array, or (n,) for one-dimensional data
        centers: (c, dims) array, or (c,)
        exponent: fuzzifier m > 1

    Returns:
        (n, c) array whose rows sum to 1
    """
    if exponent <= 1.0:
        raise ValueError(f"the membership exponent must be > 1, got {exponent}")
    points = np.asarray(points, dtype=float)
    centers = np.asarray(centers, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if centers.ndim == 1:
        centers = centers[:, None]

    distances = np.sqrt(((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2))
    power = 2.0 / (exponent - 1.0)
    with np.errstate(divide="ignore"):
        logits = -power * np.log(distances)
    singular = distances.min(axis=1) < _SINGULAR_DISTANCE
    logits[singular] = 0.0
    memberships = softmax(logits, axis=1)
    if singular.any():
        memberships[singular] = 0.0
        memberships[singular, distances[singular].argmin(axis=1)] = 1.0
    return memberships


def objective(points, centers, exponent, memberships=None):
    """Fuzzy c-means objective sum_ij u_ij^m * d_ij^2."""
    points = np.asarray(points, dtype=float)
    centers = np.asarray(centers, dtype=float)
    if memberships is None:
        memberships = fuzzy_membership(points, centers, exponent)
    squared = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return float((memberships ** exponent * squared).sum())


@dataclass(frozen=True)
class ZoneModel:
    """Sixteen zone centres plus the membership exponent."""

    centers: tuple
    exponent: float = DEFAULT_EXPONENT
    frozen: bool = False
    names: tuple = tuple(name for name, _, _ in DEFAULT_CENTERS)
    # Zone roles are fixed by the seeded centres and survive centre refinement,
    # which may move a centre across the penalty-area line.
    penalty_area_ids: tuple = None
    penalty_spot_id: int = None
    fit_report: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.centers) != ZONE_COUNT or len(self.names) != ZONE_COUNT:
            raise InvalidZoneTable(f"a zone table needs exactly {ZONE_COUNT} centres, got {len(self.centers)}")
        if len(set(self.names)) != ZONE_COUNT:
            raise InvalidZoneTable("zone names must be unique")
        xy = np.asarray(self.centers, dtype=float)
        if xy.shape != (ZONE_COUNT, 2) or not np.all(np.isfinite(xy)) or not np.all(pitch.on_pitch(xy[:, 0], xy[:, 1])):
            raise InvalidZoneTable("zone centres must be finite (x, y) points on the pitch")
        if self.exponent <= 1.0:
            raise InvalidZoneTable(f"the membership exponent must be > 1, got {self.exponent}")
        if self.penalty_area_ids is None:
            inside = tuple(int(i) for i in np.flatnonzero(pitch.in_penalty_area(xy[:, 0], xy[:, 1])))
            object.__setattr__(self, "penalty_area_ids", inside)
        if len(self.penalty_area_ids) != PENALTY_AREA_ZONE_COUNT:
            raise InvalidZoneTable(
                f"exactly {PENALTY_AREA_ZONE_COUNT} zone centres must lie inside the penalty area, "
                f"found {len(self.penalty_area_ids)}"
            )
        if self.penalty_spot_id is None:
            d = np.hypot(xy[:, 0] - pitch.PENALTY_SPOT[0], xy[:, 1] - pitch.PENALTY_SPOT[1])
            object.__setattr__(self, "penalty_spot_id", int(d.argmin()))
        if self.penalty_spot_id not in self.penalty_area_ids:
            raise InvalidZoneTable(f"the penalty-spot zone {self.names[self.penalty_spot_id]} is not a penalty-area zone")

    @property
    def zone_names(self):
        return list(self.names)

    @property
    def center_array(self):
        return np.asarray(self.centers, dtype=float)

    @property
    def penalty_area_zone_ids(self):
        return list(self.penalty_area_ids)

    @property
    def penalty_spot_zone_id(self):
        """Index of the zone containing the penalty spot (nearest seeded centre)."""
        return self.penalty_spot_id

    def membership(self, x, y):
        """Membership vector of one location, ordered as zone_names."""
        return fuzzy_membership(np.array([[x, y]], dtype=float), self.center_array, self.exponent)[0]

    def memberships(self, xy):
        """Membership matrix for an (n, 2) array of locations."""
        return fuzzy_membership(np.asarray(xy, dtype=float).reshape(-1, 2), self.center_array, self.exponent)

    def to_dict(self):
        return {
            "centers": [{"name": n, "x": float(c[0]), "y": float(c[1])} for n, c in zip(self.names, self.centers)],
            "exponent": float(self.exponent),
            "frozen": bool(self.frozen),
            "penalty_area_ids": list(self.penalty_area_ids),
            "penalty_spot_id": int(self.penalty_spot_id),
            "fit_report": self.fit_report,
        }

    @classmethod
    def from_dict(cls, data):
        rows = data["centers"]
        area = data.get("penalty_area_ids")
        return cls(
            centers=tuple((float(r["x"]), float(r["y"])) for r in rows),
            names=tuple(str(r["name"]) for r in rows),
            exponent=float(data.get("exponent", DEFAULT_EXPONENT)),
            frozen=bool(data.get("frozen", False)),
            penalty_area_ids=tuple(int(i) for i in area) if area is not None else None,
            penalty_spot_id=int(data["penalty_spot_id"]) if data.get("penalty_spot_id") is not None else None,
            fit_report=dict(data.get("fit_report", {})),
        )


def default_centers(exponent=DEFAULT_EXPONENT):
    """Returns the documented default (unfrozen) zone model."""
    return ZoneModel(
        centers=tuple((x, y) for _, x, y in DEFAULT_CENTERS),
        names=tuple(name for name, _, _ in DEFAULT_CENTERS),
        exponent=exponent,
    )


def zones_from_rows(rows, exponent=DEFAULT_EXPONENT):
    """Builds an unfrozen zone model from [{"name", "x", "y"}, ...] rows."""
    try:
        return ZoneModel.from_dict({"centers": rows, "exponent": exponent})
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidZoneTable(f"malformed zone table: {e}")


def load_zone_table(path, exponent=DEFAULT_EXPONENT):
    """Loads a 16-row zone table ({"centers": [{"name", "x", "y"}, ...]} or a bare list)."""
    data = load_json_file(path)
    rows = data.get("centers") if isinstance(data, dict) else data
    if not isinstance(rows, list):
        raise InvalidZoneTable(f"{path}: expected a list of zone centres")
    logging.info(f"Loaded zone table with {len(rows)} centres from {path}")
    return zones_from_rows(rows, exponent)


def save_zone_table(z, path):
    """Writes the zone table (name, x, y) as JSON."""
    return write_json(path, {"centers": z.to_dict()["centers"], "exponent": float(z.exponent)})


def fit(z, train, iterations=1000, tolerance=1e-9):
    """
    Refines the zone centres with fuzzy c-means on the training shot locations.

    Starts from the given centres and alternates the membership update and the
    centre update c_i = sum_j u_ij^m x_j / sum_j u_ij^m. Stops after `iterations`
    updates or once no centre moves more than `tolerance` metres. With
    iterations=0 the given centres are frozen unchanged.

    Returns a frozen ZoneModel whose fit_report holds the iterations run and the
    objective (evaluated at each iteration's starting centres).
    """
    if len(train) == 0:
        raise EmptyDataset("cannot fit zone centres on an empty dataset")
    if z.frozen:
        logging.warning("Zone model is already frozen; refitting from its current centres")
    points = np.column_stack([train.arrays["x"], train.arrays["y"]])
    centers = z.center_array.copy()
    m = z.exponent

    history = []
    converged = False
    iterations_run = 0
    for _ in range(int(iterations)):
        u = fuzzy_membership(points, centers, m)
        history.append(objective(points, centers, m, memberships=u))
        weights = u ** m
        denominator = weights.sum(axis=0)
        # A centre with no weight (all mass on other zones) stays where it is.
        updated = np.where(
            denominator[:, None] > 0,
            (weights.T @ points) / np.where(denominator > 0, denominator, 1.0)[:, None],
            centers,
        )
        movement = float(np.abs(updated - centers).max())
        centers = updated
        iterations_run += 1
        if movement < tolerance:
            converged = True
            break

    final_objective = objective(points, centers, m)
    history.append(final_objective)
    logging.info(
        f"C-means ran {iterations_run} iteration(s) on {len(points)} shots "
        f"(exponent {m}), objective {final_objective:.6f}"
    )
    report = {
        "iterations_requested": int(iterations),
        "iterations_run": iterations_run,
        "converged": converged,
        "objective_history": history,
        "training_points": int(len(points)),
    }
    return replace(z, centers=tuple((float(cx), float(cy)) for cx, cy in centers), frozen=True, fit_report=report)


def hard_variant(z, exponent=HARD_EXPONENT):
    """Copy of the zone model with the near-hard exponent (1.001 by default)."""
    return replace(z, exponent=exponent)
