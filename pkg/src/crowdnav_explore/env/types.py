"""Core state, action and configuration types for the crowd-navigation MDP."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_angle(theta: float) -> float:
    """Normalize an angle to [0, 2*pi)."""
    return float(theta) % TWO_PI


def wrap_to_pi(theta: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    wrapped = wrap_angle(theta)
    if wrapped > math.pi:
        wrapped -= TWO_PI
    return wrapped


def _as_vec2(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (2,):
        raise ValueError(f"{name} must be a 2-vector, got shape {arr.shape}")
    out = arr.copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class RobotState:
    """Full robot state: pose, body and goal.

    ``heading`` is stored normalized to [0, 2*pi); the planar velocity is the
    velocity realized during the last step.
    """

    position: np.ndarray
    velocity: np.ndarray
    radius: float
    v_pref: float
    heading: float
    goal: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "position", _as_vec2(self.position, "position"))
        object.__setattr__(self, "velocity", _as_vec2(self.velocity, "velocity"))
        object.__setattr__(self, "goal", _as_vec2(self.goal, "goal"))
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "v_pref", float(self.v_pref))
        object.__setattr__(self, "heading", wrap_angle(self.heading))
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.v_pref <= 0:
            raise ValueError("v_pref must be positive")
        speed = float(np.hypot(self.velocity[0], self.velocity[1]))
        if speed > self.v_pref + 1e-9:
            raise ValueError(f"speed {speed} exceeds v_pref {self.v_pref}")

    def goal_distance(self) -> float:
        return float(np.hypot(*(self.goal - self.position)))


@dataclass(frozen=True, eq=False)
class HumanState:
    """Observable state of one human: position, velocity and radius."""

    position: np.ndarray
    velocity: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "position", _as_vec2(self.position, "position"))
        object.__setattr__(self, "velocity", _as_vec2(self.velocity, "velocity"))
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius <= 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True, eq=False)
class JointState:
    """Robot state plus all observable human states at one time step."""

    robot: RobotState
    humans: tuple[HumanState, ...]
    time: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "humans", tuple(self.humans))
        object.__setattr__(self, "time", float(self.time))
        if self.time < 0:
            raise ValueError("time must be nonnegative")


@dataclass(frozen=True)
class Action:
    """Commanded speed plus heading increment, both applied for one step."""

    speed: float
    steering: float

    def __post_init__(self):
        object.__setattr__(self, "speed", float(self.speed))
        object.__setattr__(self, "steering", wrap_angle(self.steering))
        if self.speed < 0:
            raise ValueError("speed must be nonnegative")


class OutcomeKind(Enum):
    SUCCESS = "success"
    COLLISION = "collision"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class EpisodeOutcome:
    kind: OutcomeKind
    navigation_time: float
    discounted_return: float


@dataclass(frozen=True)
class EnvConfig:
    """Simulation constants; defaults follow the common crowd-sim setup."""

    dt: float = 0.25
    t_max: float = 25.0
    n_humans: int = 10
    circle_radius: float = 4.0
    square_half_side: float = 5.0
    human_radius: float = 0.3
    human_v_pref: float = 1.0
    robot_radius: float = 0.3
    robot_v_pref: float = 1.0
    goal_tolerance: float | None = None
    gamma: float = 0.9
    speed_spacing: str = "linear"

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        steps = self.t_max / self.dt
        if abs(steps - round(steps)) > 1e-9:
            raise ValueError("t_max must be a multiple of dt")
        if self.n_humans < 0:
            raise ValueError("n_humans must be nonnegative")
        if self.speed_spacing not in ("linear", "exponential"):
            raise ValueError("speed_spacing must be 'linear' or 'exponential'")
        if self.goal_tolerance is None:
            object.__setattr__(self, "goal_tolerance", self.robot_radius)

    @property
    def max_steps(self) -> int:
        return round(self.t_max / self.dt)
