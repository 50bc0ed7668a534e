"""Robot policies: builtin baselines and the greedy Q-policy."""

from __future__ import annotations

import numpy as np

from ..agent import QNetwork, nearest_action
from ..env import Action, JointState, build_action_space, encode_state
from ..orca import OrcaParams, orca_velocity

BUILTIN_POLICIES = ("orca", "stop", "straight")


class StopPolicy:
    """Always emits the stop action."""

    def __call__(self, state: JointState) -> Action:
        return Action(0.0, 0.0)


class StraightPolicy:
    """Drives straight at the goal, ignoring the crowd."""

    def __init__(self, dt: float = 0.25, speed_spacing: str = "linear"):
        self._dt = dt
        self._spacing = speed_spacing
        self._action_set = None

    def __call__(self, state: JointState) -> Action:
        robot = state.robot
        if self._action_set is None or self._action_set.v_pref != robot.v_pref:
            self._action_set = build_action_space(robot.v_pref, self._spacing)
        to_goal = robot.goal - robot.position
        dist = float(np.hypot(*to_goal))
        if dist < 1e-12:
            return Action(0.0, 0.0)
        speed = min(robot.v_pref, dist / self._dt)
        desired = to_goal / dist * speed
        return nearest_action(self._action_set, desired, robot.heading)


class OrcaRobotPolicy:
    """Training-free baseline: full ORCA velocity, executed holonomically.

    The robot plans against all humans (who never plan against it); the
    safety margin padding compensates for their non-reciprocation.
    """

    holonomic = True

    def __init__(self, params: OrcaParams):
        self.params = params

    def __call__(self, state: JointState) -> np.ndarray:
        return orca_velocity(state.robot, state.humans, self.params)


class QPolicy:
    """Greedy policy over the Q-network's deterministic evaluation pass."""

    def __init__(self, net: QNetwork, dt: float = 0.25, speed_spacing: str = "linear"):
        self.net = net
        self._dt = dt
        self._spacing = speed_spacing
        self._action_set = None

    def __call__(self, state: JointState) -> Action:
        robot = state.robot
        if self._action_set is None or self._action_set.v_pref != robot.v_pref:
            self._action_set = build_action_space(robot.v_pref, self._spacing)
        features = encode_state(state)
        return self._action_set[self.net.greedy_action(features)]


def make_builtin(name: str, dt: float, robot_orca: OrcaParams,
                 speed_spacing: str = "linear"):
    if name == "stop":
        return StopPolicy()
    if name == "straight":
        return StraightPolicy(dt, speed_spacing)
    if name == "orca":
        return OrcaRobotPolicy(robot_orca)
    raise ValueError(f"unknown builtin policy {name!r}")
