import json

import numpy as np
import pytest

from lib import pitch, zones
from lib.errors import EmptyDataset, InvalidZoneTable
from lib.shot_data import Dataset, ShotRecord


def _dataset_at(points):
    return Dataset(records=tuple(
        ShotRecord(x=float(x), y=float(y), body_part="foot", is_penalty=False, is_goal=False) for x, y in points
    ))


def test_default_centers_layout():
    z = zones.default_centers()
    xy = z.center_array
    assert len(z.zone_names) == 16
    assert np.all(xy[:, 0] >= pitch.HALFWAY_X)
    assert int((xy[:, 0] == 105.0).sum()) == 4
    assert len(z.penalty_area_zone_ids) == 12
    assert z.zone_names[z.penalty_spot_zone_id] == "zone_6"
    assert z.exponent == 2.0 and not z.frozen


def test_zone_14_is_outside_penalty_area():
    z = zones.default_centers()
    assert z.zone_names.index("zone_14") not in z.penalty_area_zone_ids


@pytest.mark.parametrize("point, expected", [(0.5, (0.5, 0.5)), (0.25, (0.9, 0.1))])
def test_one_dimensional_membership(point, expected):
    u = zones.fuzzy_membership(np.array([point]), np.array([0.0, 1.0]), 2.0)[0]
    assert u == pytest.approx(expected, abs=1e-12)


def test_near_hard_exponent_is_one_hot():
    u = zones.fuzzy_membership(np.array([0.25]), np.array([0.0, 1.0]), zones.HARD_EXPONENT)[0]
    assert u[0] > 0.999


def test_membership_at_center_is_one_hot():
    z = zones.default_centers()
    x, y = z.centers[0]
    u = z.membership(x, y)
    assert u[0] == 1.0
    assert np.all(u[1:] == 0.0)


def test_memberships_sum_to_one_over_pitch(rng):
    z = zones.default_centers()
    xy = np.column_stack([rng.uniform(0, 105, 100000), rng.uniform(0, 68, 100000)])
    u = z.memberships(xy)
    assert np.all(np.abs(u.sum(axis=1) - 1.0) <= 1e-9)
    assert np.all((u >= 0.0) & (u <= 1.0))


def test_hard_variant_argmax_is_nearest_center(rng):
    hard = zones.hard_variant(zones.default_centers())
    assert hard.exponent == zones.HARD_EXPONENT
    xy = np.column_stack([rng.uniform(0, 105, 10000), rng.uniform(0, 68, 10000)])
    distances = np.hypot(xy[:, None, 0] - hard.center_array[None, :, 0], xy[:, None, 1] - hard.center_array[None, :, 1])
    assert np.array_equal(hard.memberships(xy).argmax(axis=1), distances.argmin(axis=1))


def _distance_to_bisector(xy, centers):
    """Distance of every location from the perpendicular bisector of its two nearest centres."""
    d = np.hypot(xy[:, None, 0] - centers[None, :, 0], xy[:, None, 1] - centers[None, :, 1])
    nearest = np.argsort(d, axis=1)[:, :2]
    rows = np.arange(len(xy))
    d1, d2 = d[rows, nearest[:, 0]], d[rows, nearest[:, 1]]
    gap = np.hypot(*(centers[nearest[:, 0]] - centers[nearest[:, 1]]).T)
    return (d2 ** 2 - d1 ** 2) / (2.0 * gap)


def test_hard_memberships_are_sharp_away_from_zone_boundaries():
    hard = zones.hard_variant(zones.default_centers())
    gx, gy = np.meshgrid(np.arange(70.0, 105.01, 0.25), np.arange(0.0, 68.01, 0.25))
    xy = np.column_stack([gx.ravel(), gy.ravel()])
    away = _distance_to_bisector(xy, hard.center_array) >= 0.5
    assert away.mean() > 0.8
    assert np.all(hard.memberships(xy[away]).max(axis=1) > 0.99)


def test_soft_memberships_are_continuous(rng):
    z = zones.default_centers()
    xy = np.column_stack([rng.uniform(60, 105, 2000), rng.uniform(5, 63, 2000)])
    d = np.hypot(xy[:, None, 0] - z.center_array[None, :, 0], xy[:, None, 1] - z.center_array[None, :, 1])
    xy = xy[d.min(axis=1) >= 0.5]
    moved = np.clip(xy + np.array([0.01, 0.0]), 0, 105)
    assert np.max(np.abs(z.memberships(xy) - z.memberships(moved))) < 0.01


def test_fit_with_zero_iterations_freezes_centers(synthetic_shots):
    z = zones.default_centers()
    frozen = zones.fit(z, synthetic_shots, iterations=0)
    assert frozen.frozen
    assert frozen.centers == z.centers
    assert frozen.fit_report["iterations_run"] == 0


def test_fit_fixed_point_at_centers():
    z = zones.default_centers()
    fitted = zones.fit(z, _dataset_at(z.centers), iterations=5)
    assert np.allclose(fitted.center_array, z.center_array, atol=1e-12)


def test_fit_objective_is_non_increasing(synthetic_shots):
    fitted = zones.fit(zones.default_centers(), synthetic_shots, iterations=50)
    history = np.array(fitted.fit_report["objective_history"])
    assert np.all(np.diff(history) <= 1e-9 * history[:-1])


def test_fit_is_deterministic(synthetic_shots):
    a = zones.fit(zones.default_centers(), synthetic_shots, iterations=10)
    b = zones.fit(zones.default_centers(), synthetic_shots, iterations=10)
    assert a.centers == b.centers


def test_fit_keeps_zone_roles(fitted_zones):
    assert fitted_zones.penalty_area_zone_ids == zones.default_centers().penalty_area_zone_ids
    assert fitted_zones.zone_names[fitted_zones.penalty_spot_zone_id] == "zone_6"


def test_fit_empty_dataset():
    with pytest.raises(EmptyDataset):
        zones.fit(zones.default_centers(), Dataset(records=()))


def test_zone_table_must_have_16_rows():
    rows = [{"name": n, "x": x, "y": y} for n, x, y in zones.DEFAULT_CENTERS[:15]]
    with pytest.raises(InvalidZoneTable):
        zones.zones_from_rows(rows)


def test_zone_table_needs_12_penalty_area_zones():
    rows = [{"name": n, "x": x, "y": y} for n, x, y in zones.DEFAULT_CENTERS]
    rows[0] = {"name": "zone_1", "x": 70.0, "y": 34.0}
    with pytest.raises(InvalidZoneTable):
        zones.zones_from_rows(rows)


def test_zone_table_out_of_bounds():
    rows = [{"name": n, "x": x, "y": y} for n, x, y in zones.DEFAULT_CENTERS]
    rows[15] = {"name": "zone_16", "x": 120.0, "y": 34.0}
    with pytest.raises(InvalidZoneTable):
        zones.zones_from_rows(rows)


def test_save_and_load_zone_table(tmp_path):
    path = str(tmp_path / "zones.json")
    zones.save_zone_table(zones.default_centers(), path)
    with open(path, encoding="utf-8") as f:
        assert len(json.load(f)["centers"]) == 16
    loaded = zones.load_zone_table(path)
    assert loaded.centers == zones.default_centers().centers
    assert loaded.zone_names == zones.default_centers().zone_names
