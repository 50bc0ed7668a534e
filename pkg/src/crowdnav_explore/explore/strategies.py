"""The five exploration strategies behind one small interface.

Epsilon-greedy explores through random actions on a decaying schedule; noisy
and dropout strategies explore through stochastic forward passes of the
Q-network; the curiosity strategies (forward-model error and random-encoder
state entropy) keep greedy action selection and explore through an intrinsic
reward added to the learning signal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

DROPOUT_RATE_START = 0.5
DROPOUT_RATE_END = 0.01
DROPOUT_DECAY_EPISODES = 7_000


@dataclass(frozen=True)
class EpsilonGreedy:
    epsilon_start: float = 0.5
    epsilon_end: float = 0.1
    decay_episodes: int = 4_000

    def __post_init__(self):
        for eps in (self.epsilon_start, self.epsilon_end):
            if not 0.0 <= eps <= 1.0:
                raise ValueError("epsilon must lie in [0, 1]")
        if self.decay_episodes < 0:
            raise ValueError("decay_episodes must be nonnegative")

    def epsilon(self, episode: int) -> float:
        return linear_schedule(
            episode, self.epsilon_start, self.epsilon_end, self.decay_episodes
        )


@dataclass(frozen=True)
class NoisyNet:
    """Parameter-space noise; no schedule, noise scales are learned."""


@dataclass(frozen=True)
class DropoutSchedule:
    rate_start: float = DROPOUT_RATE_START
    rate_end: float = DROPOUT_RATE_END
    decay_episodes: int = DROPOUT_DECAY_EPISODES

    def __post_init__(self):
        for rate in (self.rate_start, self.rate_end):
            if not 0.0 <= rate <= 1.0:
                raise ValueError("dropout rate must lie in [0, 1]")

    def rate(self, episode: int) -> float:
        return linear_schedule(
            episode, self.rate_start, self.rate_end, self.decay_episodes
        )


@dataclass(frozen=True)
class IcmConfig:
    beta: float = 0.01
    loss_mix: float = 0.2  # weight of the inverse (action-prediction) loss
    embed_dim: int = 128
    recompute: bool = False  # recompute intrinsic rewards at training time
    stacked_epsilon: float = 0.0

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        if not 0.0 <= self.loss_mix <= 1.0:
            raise ValueError("loss_mix must lie in [0, 1]")


@dataclass(frozen=True)
class Re3Config:
    beta: float = 0.01
    k: int = 3
    capacity: int = 10_000
    embed_dim: int = 128
    average_knn: bool = False  # average the k nearest instead of taking the k-th
    stacked_epsilon: float = 0.0

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        if self.k < 1:
            raise ValueError("k must be >= 1")


Strategy = Union[EpsilonGreedy, NoisyNet, DropoutSchedule, IcmConfig, Re3Config]

STRATEGY_NAMES = {
    "epsilon": EpsilonGreedy,
    "noisy": NoisyNet,
    "dropout": DropoutSchedule,
    "icm": IcmConfig,
    "re3": Re3Config,
}


def strategy_name(strategy: Strategy) -> str:
    for name, cls in STRATEGY_NAMES.items():
        if isinstance(strategy, cls):
            return name
    raise TypeError(f"unknown strategy {strategy!r}")


def linear_schedule(episode: int, start: float, end: float, decay: int) -> float:
    """Linear interpolation from start to end over ``decay`` episodes."""
    if episode < 0:
        raise ValueError("episode must be nonnegative")
    if decay <= 0 or episode >= decay:
        return end
    return start + (end - start) * episode / decay


def dropout_rate(
    episode: int,
    start: float = DROPOUT_RATE_START,
    end: float = DROPOUT_RATE_END,
    decay: int = DROPOUT_DECAY_EPISODES,
) -> float:
    """Scheduled dropout rate: 0.5 at episode 0 down to 0.01 at 7000."""
    return linear_schedule(episode, start, end, decay)


def exploration_epsilon(strategy: Strategy, episode: int) -> float:
    """Probability of a uniformly random action for this strategy/episode."""
    if isinstance(strategy, EpsilonGreedy):
        return strategy.epsilon(episode)
    if isinstance(strategy, (IcmConfig, Re3Config)):
        return strategy.stacked_epsilon
    return 0.0


def select_action(
    strategy: Strategy,
    q_values: np.ndarray,
    episode: int,
    rng: np.random.Generator,
) -> int:
    """Pick an action index from the (possibly stochastic) Q-values.

    Only epsilon-bearing strategies consume randomness here; noisy and
    dropout exploration already acted through the forward pass that produced
    ``q_values``, and the curiosity strategies act through the reward.
    """
    epsilon = exploration_epsilon(strategy, episode)
    if epsilon > 0.0 and rng.random() < epsilon:
        return int(rng.integers(len(q_values)))
    return int(np.argmax(q_values))


def q_forward_mode(strategy: Strategy, episode: int) -> dict:
    """Forward-pass switches for computing decision-time Q-values."""
    if isinstance(strategy, NoisyNet):
        return {"train": False, "noise": "sampled"}
    if isinstance(strategy, DropoutSchedule):
        return {"train": True, "noise": "zero"}
    return {"train": False, "noise": "zero"}
