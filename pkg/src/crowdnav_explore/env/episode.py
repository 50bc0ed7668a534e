"""Synchronous episode rollout."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..agent.replay import Transition
from ..orca import OrcaParams
from .crowd import Crowd
from .features import encode_state
from .kinematics import build_action_space, step_kinematics
from .reward import compute_reward, detect_outcome
from .scenarios import generate_scenario
from .types import Action, EnvConfig, EpisodeOutcome, JointState, OutcomeKind

GOAL_STREAM = 0x60A1


class PolicyContractError(RuntimeError):
    """Raised when a policy emits an action outside the discrete action set."""


@dataclass(frozen=True)
class AgentPose:
    """One agent's pose row for trajectory export (agent 0 is the robot)."""

    x: float
    y: float
    vx: float
    vy: float
    radius: float
    goal_x: float
    goal_y: float


@dataclass(frozen=True)
class TrajectoryStep:
    time: float
    poses: tuple[AgentPose, ...]


@dataclass
class EpisodeRecord:
    """Everything one episode produced.

    ``trajectory`` holds the post-step snapshots, one per transition, so its
    length equals navigation_time / dt; the starting configuration lives in
    ``initial``.
    """

    kind: str
    seed: int
    initial: TrajectoryStep
    trajectory: list[TrajectoryStep]
    transitions: list[Transition]
    outcome: EpisodeOutcome


def _snapshot(state: JointState, goals: list[np.ndarray]) -> TrajectoryStep:
    robot = state.robot
    poses = [
        AgentPose(
            x=float(robot.position[0]),
            y=float(robot.position[1]),
            vx=float(robot.velocity[0]),
            vy=float(robot.velocity[1]),
            radius=robot.radius,
            goal_x=float(robot.goal[0]),
            goal_y=float(robot.goal[1]),
        )
    ]
    for human, goal in zip(state.humans, goals):
        poses.append(
            AgentPose(
                x=float(human.position[0]),
                y=float(human.position[1]),
                vx=float(human.velocity[0]),
                vy=float(human.velocity[1]),
                radius=human.radius,
                goal_x=float(goal[0]),
                goal_y=float(goal[1]),
            )
        )
    return TrajectoryStep(time=state.time, poses=tuple(poses))


def _holonomic_command(policy, state: JointState, action_set):
    """Velocity request of a holonomic policy plus a bookkeeping action index."""
    from ..agent.learner import nearest_action

    velocity = np.asarray(policy(state), dtype=float)
    if velocity.shape != (2,):
        raise PolicyContractError(
            f"holonomic policy must return a velocity 2-vector, got {velocity!r}"
        )
    speed = float(np.hypot(*velocity))
    if speed > state.robot.v_pref + 1e-9:
        raise PolicyContractError(
            f"holonomic speed {speed} exceeds v_pref {state.robot.v_pref}"
        )
    recorded = nearest_action(action_set, velocity, state.robot.heading)
    return velocity, action_set.index_of(recorded)


def _step_holonomic(robot, velocity: np.ndarray, dt: float):
    from .types import RobotState

    speed = float(np.hypot(*velocity))
    heading = (
        float(np.arctan2(velocity[1], velocity[0])) if speed > 1e-12 else robot.heading
    )
    return RobotState(
        position=robot.position + velocity * dt,
        velocity=velocity,
        radius=robot.radius,
        v_pref=robot.v_pref,
        heading=heading,
        goal=robot.goal,
    )


def run_episode(
    policy,
    kind: str,
    cfg: EnvConfig,
    seed: int,
    orca_params: OrcaParams | None = None,
) -> EpisodeRecord:
    """Roll one episode to its terminal outcome.

    ``policy`` maps a JointState to an Action belonging to the robot's action
    set.  A policy whose ``holonomic`` attribute is true instead returns a
    planar velocity that the robot integrates directly (used by the ORCA
    baseline).  All agents step synchronously every cfg.dt; humans replan
    with ORCA against each other only.  The same (policy, kind, cfg, seed)
    always reproduces the same record provided the policy is deterministic or
    owns its own seeded randomness.
    """
    if orca_params is None:
        orca_params = OrcaParams(time_step=cfg.dt)
    state, goals = generate_scenario(kind, cfg, seed)
    crowd = Crowd(
        state.humans,
        goals,
        cfg,
        orca_params,
        goal_rng=np.random.default_rng([GOAL_STREAM, int(seed) % 2**63]),
    )
    action_set = build_action_space(cfg.robot_v_pref, cfg.speed_spacing)

    initial = _snapshot(state, crowd.goals())
    trajectory: list[TrajectoryStep] = []
    transitions: list[Transition] = []
    features = encode_state(state)
    rewards: list[float] = []

    holonomic = bool(getattr(policy, "holonomic", False))

    step = 0
    while True:
        if holonomic:
            velocity, action_index = _holonomic_command(policy, state, action_set)
        else:
            action = policy(state)
            if not isinstance(action, Action) or action not in action_set:
                raise PolicyContractError(
                    f"policy returned {action!r}, not a member of the action set"
                )
            action_index = action_set.index_of(action)

        new_humans = crowd.step(cfg.dt)
        if holonomic:
            new_robot = _step_holonomic(state.robot, velocity, cfg.dt)
        else:
            new_robot = step_kinematics(state.robot, action, cfg.dt)
        step += 1
        next_state = JointState(robot=new_robot, humans=new_humans, time=step * cfg.dt)

        outcome_kind = detect_outcome(next_state, cfg)
        reward = compute_reward(state, next_state, outcome_kind)
        next_features = encode_state(next_state)
        transitions.append(
            Transition(
                state=features,
                action=action_index,
                reward=reward,
                next_state=next_features,
                terminal=outcome_kind is not None,
                raw_state=state,
                raw_next=next_state,
            )
        )
        trajectory.append(_snapshot(next_state, crowd.goals()))
        rewards.append(reward)
        state = next_state
        features = next_features

        if outcome_kind is not None:
            discounted = sum(r * cfg.gamma**t for t, r in enumerate(rewards))
            outcome = EpisodeOutcome(
                kind=outcome_kind,
                navigation_time=state.time,
                discounted_return=float(discounted),
            )
            return EpisodeRecord(
                kind=kind,
                seed=seed,
                initial=initial,
                trajectory=trajectory,
                transitions=transitions,
                outcome=outcome,
            )
