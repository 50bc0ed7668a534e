"""Robot-centric feature encoding of a joint state."""

from __future__ import annotations

import math

import numpy as np

from .types import JointState, wrap_to_pi

ROBOT_BLOCK = 6
HUMAN_BLOCK = 7


def feature_length(n_humans: int) -> int:
    return ROBOT_BLOCK + HUMAN_BLOCK * n_humans


def encode_state(state: JointState) -> np.ndarray:
    """Encode a joint state in the goal-aligned robot frame.

    The frame is rotated so the goal lies on the positive x-axis as seen from
    the robot, which makes the encoding invariant to global rotations and
    translations of the world (up to the degenerate robot-at-goal case where
    the goal direction is undefined).  Humans appear sorted by ascending
    center distance to the robot.
    """
    robot = state.robot
    to_goal = robot.goal - robot.position
    d_goal = float(np.hypot(*to_goal))
    phi = math.atan2(to_goal[1], to_goal[0]) if d_goal > 0 else 0.0
    cos_p, sin_p = math.cos(phi), math.sin(phi)

    def rotate(v) -> tuple[float, float]:
        # rotation by -phi: goal direction maps onto +x
        return (
            cos_p * v[0] + sin_p * v[1],
            -sin_p * v[0] + cos_p * v[1],
        )

    features = [
        d_goal,
        robot.v_pref,
        wrap_to_pi(robot.heading - phi),
        *rotate(robot.velocity),
        robot.radius,
    ]

    distances = [
        float(np.hypot(*(h.position - robot.position))) for h in state.humans
    ]
    for idx in np.argsort(distances, kind="stable"):
        human = state.humans[idx]
        rel = rotate(human.position - robot.position)
        vel = rotate(human.velocity)
        features.extend(
            [
                rel[0],
                rel[1],
                vel[0],
                vel[1],
                human.radius,
                distances[idx],
                robot.radius + human.radius,
            ]
        )
    return np.asarray(features, dtype=np.float32)
