"""
Canonical pitch geometry.

All locations are in metres on a 105 x 68 pitch, attacking left to right, with the
centre of the attacked goal at (105, 34).
"""

import numpy as np

PITCH_LENGTH = 105.0
PITCH_WIDTH = 68.0
HALFWAY_X = PITCH_LENGTH / 2

GOAL_X = PITCH_LENGTH
GOAL_Y = PITCH_WIDTH / 2
GOAL_WIDTH = 7.32
LEFT_POST_Y = GOAL_Y - GOAL_WIDTH / 2
RIGHT_POST_Y = GOAL_Y + GOAL_WIDTH / 2

PENALTY_SPOT = (GOAL_X - 11.0, GOAL_Y)
PENALTY_AREA_DEPTH = 16.5
PENALTY_AREA_HALF_WIDTH = 20.16


def on_pitch(x, y):
    """Elementwise check that (x, y) lies within the pitch rectangle."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return (x >= 0.0) & (x <= PITCH_LENGTH) & (y >= 0.0) & (y <= PITCH_WIDTH)


def in_penalty_area(x, y):
    """Elementwise check for the attacked penalty area (boundary lines included)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return (x >= GOAL_X - PENALTY_AREA_DEPTH) & (x <= GOAL_X) & (np.abs(y - GOAL_Y) <= PENALTY_AREA_HALF_WIDTH)


def distance_to_goal(x, y):
    """Straight-line distance to the centre of the goal."""
    dx = GOAL_X - np.asarray(x, dtype=float)
    dy = GOAL_Y - np.asarray(y, dtype=float)
    return np.sqrt(dx ** 2 + dy ** 2)


def goal_angle(x, y):
    """
    Angle (radians) subtended by the two goal posts at the shot location.

    Between the posts on the goal line the angle is pi; outside the posts on the
    goal line it is 0.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ax, ay = GOAL_X - x, LEFT_POST_Y - y
    bx, by = GOAL_X - x, RIGHT_POST_Y - y
    cross = ax * by - ay * bx
    dot = ax * bx + ay * by
    return np.abs(np.arctan2(cross, dot))
