"""Experience transitions and the FIFO replay buffer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Transition:
    """One environment step as seen by the learner.

    ``reward`` is the extrinsic reward (accumulated over ``steps`` steps for
    multi-step transitions); ``intrinsic`` carries a curiosity bonus frozen at
    collection time.  The raw joint states stay attached for the
    intrinsic-reward machinery.
    """

    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    terminal: bool
    raw_state: object = None
    raw_next: object = None
    intrinsic: float = 0.0
    steps: int = 1

    def __post_init__(self):
        if not 0 <= self.action:
            raise ValueError("action index must be nonnegative")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")


class ReplayBuffer:
    """Bounded FIFO of transitions with a seeded uniform sampler."""

    def __init__(self, capacity: int = 100_000, seed: int = 0):
        if capacity <= 0:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._items: list[Transition] = []
        self._head = 0  # insertion point once full
        self._rng = np.random.default_rng([0xB0FF, int(seed) % 2**63])

    def __len__(self) -> int:
        return len(self._items)

    def push(self, transition: Transition) -> None:
        if len(self._items) < self.capacity:
            self._items.append(transition)
        else:
            self._items[self._head] = transition
            self._head = (self._head + 1) % self.capacity

    def __iter__(self):
        """Iterate oldest to newest."""
        yield from self._items[self._head:]
        yield from self._items[: self._head]

    def sample(self, batch_size: int) -> list[Transition]:
        if batch_size > len(self._items):
            raise ValueError("not enough transitions to sample")
        indices = self._rng.choice(len(self._items), size=batch_size, replace=False)
        return [self._items[i] for i in indices]
