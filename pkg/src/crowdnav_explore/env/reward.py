"""Extrinsic reward and terminal-outcome detection."""

from __future__ import annotations

import numpy as np

from .types import EnvConfig, JointState, OutcomeKind

GOAL_REWARD = 0.25
COLLISION_PENALTY = -0.25
APPROACH_WEIGHT = 0.2
SAFE_DISTANCE = 0.2


def separation_distances(state: JointState) -> list[float]:
    """Surface-to-surface distances between the robot and each human."""
    robot = state.robot
    out = []
    for human in state.humans:
        center = float(np.hypot(*(human.position - robot.position)))
        out.append(center - robot.radius - human.radius)
    return out


def compute_reward(
    state: JointState,
    next_state: JointState,
    outcome: OutcomeKind | None,
) -> float:
    """Reward for one transition.

    Goal arrival pays +0.25 and a collision -0.25.  Every other step pays the
    shaping term -0.2 * (d_g' - d_g) plus a discomfort penalty of (mu - 0.2)
    for each human whose surface distance mu to the robot falls below the
    0.2 m safe distance, evaluated at the post-step state.  Timeouts fall in
    the shaping branch.
    """
    if outcome is OutcomeKind.SUCCESS:
        return GOAL_REWARD
    if outcome is OutcomeKind.COLLISION:
        return COLLISION_PENALTY
    goal_delta = next_state.robot.goal_distance() - state.robot.goal_distance()
    discomfort = sum(
        mu - SAFE_DISTANCE
        for mu in separation_distances(next_state)
        if mu < SAFE_DISTANCE
    )
    return -APPROACH_WEIGHT * goal_delta + discomfort


def detect_outcome(state: JointState, cfg: EnvConfig) -> OutcomeKind | None:
    """Terminal classification of a state; collision dominates success."""
    robot = state.robot
    for human in state.humans:
        center = float(np.hypot(*(human.position - robot.position)))
        if center < robot.radius + human.radius:
            return OutcomeKind.COLLISION
    if robot.goal_distance() < cfg.goal_tolerance:
        return OutcomeKind.SUCCESS
    if state.time >= cfg.t_max - 1e-9:
        return OutcomeKind.TIMEOUT
    return None
