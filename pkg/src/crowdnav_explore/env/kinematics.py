"""Discrete action set and unicycle stepping."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .types import TWO_PI, Action, RobotState, wrap_angle

N_STEERING = 16
N_SPEEDS = 5


@dataclass(frozen=True, eq=False)
class ActionSet:
    """The 81 discrete actions available to a robot with a given v_pref.

    Ordering is speed-major: the stop action first, then the five speed
    levels in ascending order, each paired with the 16 steering angles in
    ascending order.
    """

    actions: tuple[Action, ...]
    v_pref: float

    def __post_init__(self):
        index = {(a.speed, a.steering): i for i, a in enumerate(self.actions)}
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.actions)

    def __getitem__(self, i: int) -> Action:
        return self.actions[i]

    def __iter__(self):
        return iter(self.actions)

    def index_of(self, action: Action) -> int:
        """Exact-match index lookup; raises KeyError for foreign actions."""
        return self._index[(action.speed, action.steering)]

    def __contains__(self, action: Action) -> bool:
        return (action.speed, action.steering) in self._index


def speed_levels(v_pref: float, spacing: str = "linear") -> list[float]:
    """The positive speed levels, ascending, with maximum exactly v_pref."""
    if spacing == "linear":
        return [(i + 1) * v_pref / N_SPEEDS for i in range(N_SPEEDS)]
    if spacing == "exponential":
        return [
            (math.exp((i + 1) / N_SPEEDS) - 1.0) / (math.e - 1.0) * v_pref
            for i in range(N_SPEEDS)
        ]
    raise ValueError(f"unknown speed spacing {spacing!r}")


def build_action_space(v_pref: float, spacing: str = "linear") -> ActionSet:
    """Build the 81-action set: 5 speeds x 16 steering angles plus a stop."""
    if v_pref <= 0:
        raise ValueError("v_pref must be positive")
    steerings = [TWO_PI * j / N_STEERING for j in range(N_STEERING)]
    actions = [Action(0.0, 0.0)]
    for speed in speed_levels(v_pref, spacing):
        for steering in steerings:
            actions.append(Action(speed, steering))
    return ActionSet(actions=tuple(actions), v_pref=float(v_pref))


def step_kinematics(robot: RobotState, action: Action, dt: float) -> RobotState:
    """Advance the unicycle one step.

    The planar velocity uses the pre-update heading; the steering increment
    takes effect from the following step onward.
    """
    if action.speed > robot.v_pref + 1e-9:
        raise ValueError(
            f"action speed {action.speed} exceeds robot v_pref {robot.v_pref}"
        )
    vx = action.speed * math.cos(robot.heading)
    vy = action.speed * math.sin(robot.heading)
    new_heading = wrap_angle(robot.heading + action.steering)
    new_position = robot.position + np.array([vx, vy]) * dt
    return RobotState(
        position=new_position,
        velocity=np.array([vx, vy]),
        radius=robot.radius,
        v_pref=robot.v_pref,
        heading=new_heading,
        goal=robot.goal,
    )
