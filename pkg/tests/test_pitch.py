import numpy as np
import pytest

from lib import pitch


def test_penalty_spot_geometry():
    x, y = pitch.PENALTY_SPOT
    assert pitch.distance_to_goal(x, y) == pytest.approx(11.0)
    assert pitch.goal_angle(x, y) == pytest.approx(2 * np.arctan(3.66 / 11.0))
    assert pitch.in_penalty_area(x, y)


@pytest.mark.parametrize("y, expected", [(34.0, np.pi), (31.0, np.pi), (20.0, 0.0), (60.0, 0.0)])
def test_angle_on_goal_line(y, expected):
    assert pitch.goal_angle(105.0, y) == pytest.approx(expected)


def test_angle_is_symmetric_about_goal_axis():
    assert pitch.goal_angle(90.0, 25.0) == pytest.approx(pitch.goal_angle(90.0, 43.0))


def test_on_pitch_bounds():
    assert list(pitch.on_pitch([0.0, 105.0, 105.1, 50.0], [0.0, 68.0, 30.0, -0.1])) == [True, True, False, False]


def test_penalty_area_boundary():
    assert pitch.in_penalty_area(88.5, 54.0)
    assert not pitch.in_penalty_area(88.4, 34.0)
