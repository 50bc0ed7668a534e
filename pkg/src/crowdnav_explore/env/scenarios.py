"""Seeded scenario generation for circle and square crossings."""

from __future__ import annotations

import math

import numpy as np

from .types import EnvConfig, HumanState, JointState, RobotState

# Stream tags keep the scenario, goal-reassignment and evaluation RNG
# sequences independent for the same master seed.
SCENARIO_STREAM = 0x5C01
_CLEARANCE = 0.2
_MAX_ATTEMPTS = 200

KINDS = ("circle", "square")


def scenario_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([SCENARIO_STREAM, int(seed) % 2**63])


def _too_close(pos, placed, min_gaps) -> bool:
    for other, gap in zip(placed, min_gaps):
        if float(np.hypot(*(pos - other))) < gap:
            return True
    return False


def _place(rng, sampler, placed, min_gaps):
    pos = sampler(rng)
    for _ in range(_MAX_ATTEMPTS):
        if not _too_close(pos, placed, min_gaps):
            break
        pos = sampler(rng)
    return pos


def random_goal(rng: np.random.Generator, position, half_side: float,
                min_dist: float = 2.0) -> np.ndarray:
    """Uniform goal in the room at least min_dist from the given position."""
    for _ in range(_MAX_ATTEMPTS):
        goal = rng.uniform(-half_side, half_side, size=2)
        if float(np.hypot(*(goal - position))) >= min_dist:
            return goal
    return -np.asarray(position, dtype=float)


def generate_scenario(
    kind: str, cfg: EnvConfig, seed: int
) -> tuple[JointState, list[np.ndarray]]:
    """Build the initial joint state and the humans' goal list.

    Circle scenarios put half the humans on the crossing circle with
    antipodal goals and scatter the rest in the room with long random
    crossings.  Square scenarios start every human in one lateral half of the
    room with a goal in the opposite half.  The same seed always reproduces
    the same scenario.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown scenario kind {kind!r}")
    rng = scenario_rng(seed)
    radius = cfg.circle_radius
    half = cfg.square_half_side

    robot_pos = np.array([0.0, -radius])
    robot_goal = np.array([0.0, radius])
    robot = RobotState(
        position=robot_pos,
        velocity=np.zeros(2),
        radius=cfg.robot_radius,
        v_pref=cfg.robot_v_pref,
        heading=math.atan2(*(robot_goal - robot_pos)[::-1]),
        goal=robot_goal,
    )

    placed = [robot_pos]
    placed_radii = [cfg.robot_radius]

    humans: list[HumanState] = []
    goals: list[np.ndarray] = []

    def gaps_for():
        return [cfg.human_radius + r + _CLEARANCE for r in placed_radii]

    def add_human(pos, goal):
        placed.append(pos)
        placed_radii.append(cfg.human_radius)
        humans.append(
            HumanState(position=pos, velocity=np.zeros(2), radius=cfg.human_radius)
        )
        goals.append(np.asarray(goal, dtype=float))

    if kind == "circle":
        n_circle = cfg.n_humans - cfg.n_humans // 2
        for _ in range(n_circle):
            def on_circle(r):
                angle = r.uniform(0.0, 2.0 * math.pi)
                return radius * np.array([math.cos(angle), math.sin(angle)])

            pos = _place(rng, on_circle, placed, gaps_for())
            add_human(pos, -pos)
        for _ in range(cfg.n_humans - n_circle):
            pos = _place(
                rng, lambda r: r.uniform(-half, half, size=2), placed, gaps_for()
            )
            add_human(pos, random_goal(rng, pos, half, min_dist=half))
    else:
        for _ in range(cfg.n_humans):
            side = 1.0 if rng.random() < 0.5 else -1.0

            def in_half(r, s=side):
                return np.array([s * r.uniform(0.0, half), r.uniform(-half, half)])

            pos = _place(rng, in_half, placed, gaps_for())
            goal = np.array(
                [-side * rng.uniform(0.0, half), rng.uniform(-half, half)]
            )
            add_human(pos, goal)

    return JointState(robot=robot, humans=tuple(humans), time=0.0), goals
