"""Double-DQN learning updates, target sync and imitation pretraining."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..env.kinematics import ActionSet
from ..env.types import Action
from ..nn import Adam
from .qnet import QNetwork
from .replay import ReplayBuffer, Transition


@dataclass(frozen=True)
class TrainConfig:
    episodes: int = 10_000
    target_update: int = 50
    batch_size: int = 128
    gamma: float = 0.9
    n_step: int = 1
    train_steps_per_episode: int = 0  # 0: one update per environment step
    warmup: int = 2_000
    buffer_capacity: int = 100_000
    learning_rate: float = 1e-3
    validation_interval: int = 500
    validation_episodes: int = 100
    checkpoint_interval: int = 1_000
    il_episodes: int = 0
    il_epochs: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.episodes <= 0:
            raise ValueError("episodes must be positive")
        if self.n_step < 1:
            raise ValueError("n_step must be >= 1")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")


def td_target(
    transition: Transition,
    online: QNetwork,
    target: QNetwork,
    gamma: float,
    *,
    noise: str = "zero",
    rng: np.random.Generator | None = None,
) -> float:
    """Bootstrapped regression target for one transition.

    The online network picks the successor action, the target network
    evaluates it; terminal transitions return their accumulated reward alone.
    Multi-step transitions discount the bootstrap by gamma**steps.
    """
    if transition.terminal:
        return float(transition.reward)
    q_online = online.q_values(transition.next_state, noise=noise, rng=rng)
    best = int(np.argmax(q_online))
    q_target = target.q_values(transition.next_state, noise=noise, rng=rng)
    return float(transition.reward) + gamma**transition.steps * float(q_target[best])


def td_targets_batch(
    transitions: list[Transition],
    online: QNetwork,
    target: QNetwork,
    gamma: float,
    rewards: np.ndarray | None = None,
    *,
    noise: str = "zero",
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Vectorized td_target; ``rewards`` overrides the stored rewards."""
    next_states = np.stack([t.next_state for t in transitions])
    if rewards is None:
        rewards = np.array([t.reward for t in transitions])
    terminal = np.array([t.terminal for t in transitions])
    steps = np.array([t.steps for t in transitions])
    q_online = online.q_values(next_states, noise=noise, rng=rng)
    best = np.argmax(q_online, axis=1)
    q_target = target.q_values(next_states, noise=noise, rng=rng)
    bootstrap = q_target[np.arange(len(transitions)), best]
    return rewards + np.where(terminal, 0.0, gamma**steps * bootstrap)


def train_step(
    buffer: ReplayBuffer,
    online: QNetwork,
    target: QNetwork,
    opt: Adam,
    batch_size: int,
    gamma: float,
    *,
    reward_fn=None,
    train: bool = False,
    noise: str = "zero",
    rng: np.random.Generator | None = None,
    batch: list[Transition] | None = None,
) -> float | None:
    """One squared-error regression step of Q(s, a) toward its target.

    Returns the batch loss, or None when the buffer cannot fill a batch yet.
    ``reward_fn`` maps the sampled transitions to the (possibly augmented)
    rewards used in the targets.  ``train``/``noise`` control the stochastic
    forward modes of the regression pass for dropout and noisy layers.
    Passing ``batch`` skips sampling (callers that share the batch with other
    updates).
    """
    if batch is None:
        if len(buffer) < batch_size:
            return None
        batch = buffer.sample(batch_size)
    rewards = None if reward_fn is None else np.asarray(reward_fn(batch), dtype=float)
    targets = td_targets_batch(
        batch, online, target, gamma, rewards, noise=noise, rng=rng
    )
    states = np.stack([t.state for t in batch])
    actions = np.array([t.action for t in batch])
    q = online.q_values(states, train=train, noise=noise, rng=rng)
    taken = q[np.arange(len(batch)), actions]
    residual = taken - targets
    loss = float(np.mean(residual**2))
    grad_q = np.zeros_like(q)
    grad_q[np.arange(len(batch)), actions] = 2.0 * residual / len(batch)
    online.backward_from_q(grad_q)
    opt.step(online.grads())
    online.post_update()
    return loss


def sync_target(
    online: QNetwork,
    target: QNetwork,
    counter: int | None = None,
    interval: int | None = None,
) -> bool:
    """Hard-copy online weights into the target net.

    With a counter and interval, the copy only happens when the counter is a
    multiple of the interval; returns whether a copy was performed.
    """
    if counter is not None:
        if interval is None or interval <= 0:
            raise ValueError("interval must be positive when a counter is given")
        if counter % interval != 0:
            return False
    target.copy_from(online)
    return True


def nearest_action(action_set: ActionSet, velocity, heading: float) -> Action:
    """Discrete action whose commanded velocity best matches ``velocity``.

    The commanded velocity of (speed, steering) points along the post-steering
    heading; ties keep the lowest-index action.
    """
    vx, vy = float(velocity[0]), float(velocity[1])
    best = None
    best_dist = math.inf
    for action in action_set:
        ax = action.speed * math.cos(heading + action.steering)
        ay = action.speed * math.sin(heading + action.steering)
        dist = (ax - vx) ** 2 + (ay - vy) ** 2
        if dist < best_dist - 1e-15:
            best_dist = dist
            best = action
    return best


def monte_carlo_returns(transitions: list[Transition], gamma: float) -> np.ndarray:
    """Discounted reward-to-go of every step of one episode."""
    returns = np.zeros(len(transitions))
    acc = 0.0
    for i in range(len(transitions) - 1, -1, -1):
        acc = transitions[i].reward + gamma * acc
        returns[i] = acc
    return returns


def il_pretrain(
    demos: list[list[Transition]],
    net: QNetwork,
    opt: Adam,
    epochs: int,
    gamma: float,
    batch_size: int = 128,
    rng: np.random.Generator | None = None,
) -> QNetwork:
    """Regress Q(s, a_demo) toward observed discounted returns.

    ``demos`` holds per-episode transition lists from a demonstration policy.
    Zero epochs leave the network untouched.
    """
    if not demos or not any(demos):
        raise ValueError("demonstration set is empty")
    states = np.stack([t.state for ep in demos for t in ep])
    actions = np.array([t.action for ep in demos for t in ep])
    returns = np.concatenate([monte_carlo_returns(ep, gamma) for ep in demos])
    if rng is None:
        rng = np.random.default_rng(0)
    n = len(states)
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start:start + batch_size]
            q = net.q_values(states[idx])
            taken = q[np.arange(len(idx)), actions[idx]]
            residual = taken - returns[idx]
            grad_q = np.zeros_like(q)
            grad_q[np.arange(len(idx)), actions[idx]] = 2.0 * residual / len(idx)
            net.backward_from_q(grad_q)
            opt.step(net.grads())
            net.post_update()
    return net
