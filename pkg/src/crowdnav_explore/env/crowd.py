"""The ORCA-driven human crowd.

Humans avoid each other reciprocally but never see the robot: their neighbor
lists contain humans only, so the robot bears the whole avoidance burden.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..orca import OrcaParams, orca_velocity
from .scenarios import random_goal
from .types import EnvConfig, HumanState


@dataclass
class _HumanAgent:
    position: np.ndarray
    velocity: np.ndarray
    radius: float
    v_pref: float
    goal: np.ndarray


class Crowd:
    """Synchronous stepping of all humans against a pre-step snapshot."""

    def __init__(
        self,
        humans: tuple[HumanState, ...],
        goals: list[np.ndarray],
        cfg: EnvConfig,
        params: OrcaParams,
        goal_rng: np.random.Generator,
    ):
        self._agents = [
            _HumanAgent(
                position=np.array(h.position, dtype=float),
                velocity=np.array(h.velocity, dtype=float),
                radius=h.radius,
                v_pref=cfg.human_v_pref,
                goal=np.array(g, dtype=float),
            )
            for h, g in zip(humans, goals)
        ]
        self._params = params
        self._half_side = cfg.square_half_side
        self._rng = goal_rng

    def observable(self) -> tuple[HumanState, ...]:
        return tuple(
            HumanState(position=a.position, velocity=a.velocity, radius=a.radius)
            for a in self._agents
        )

    def goals(self) -> list[np.ndarray]:
        return [np.array(a.goal) for a in self._agents]

    def step(self, dt: float) -> tuple[HumanState, ...]:
        """Advance every human one step; reassign goals reached this step."""
        snapshot = self.observable()
        velocities = []
        for i, agent in enumerate(self._agents):
            neighbors = [s for j, s in enumerate(snapshot) if j != i]
            velocities.append(orca_velocity(agent, neighbors, self._params))
        for agent, velocity in zip(self._agents, velocities):
            agent.velocity = velocity
            agent.position = agent.position + velocity * dt
        for agent in self._agents:
            if float(np.hypot(*(agent.goal - agent.position))) < agent.radius:
                agent.goal = random_goal(self._rng, agent.position, self._half_side)
        return self.observable()
