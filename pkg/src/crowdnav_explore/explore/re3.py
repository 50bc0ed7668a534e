"""State-entropy exploration with a frozen random encoder.

A randomly initialized encoder (never trained) embeds visited states into a
128-dimensional space; the log of (1 + distance to the k-th nearest stored
embedding) estimates local state-visitation novelty and serves as the
intrinsic reward.  Embeddings live in a bounded ring buffer.
"""

from __future__ import annotations

import hashlib

import numpy as np

from ..nn import Network


class Re3Module:
    """Frozen encoder plus a ring buffer of visited-state embeddings."""

    def __init__(
        self,
        feature_dim: int,
        embed_dim: int = 128,
        k: int = 3,
        capacity: int = 10_000,
        rng: np.random.Generator | None = None,
        average_knn: bool = False,
        dtype=np.float32,
    ):
        if rng is None:
            rng = np.random.default_rng(0)
        if k < 1:
            raise ValueError("k must be >= 1")
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.k = k
        self.capacity = capacity
        self.average_knn = average_knn
        self.encoder = Network.mlp([feature_dim, 256, embed_dim], rng, dtype=dtype)
        self._store = np.zeros((capacity, embed_dim), dtype=np.float32)
        self._norms = np.zeros(capacity, dtype=np.float32)
        self._size = 0
        self._head = 0

    def __len__(self) -> int:
        return self._size

    def weights_fingerprint(self) -> str:
        """Digest of the encoder weights; must never change during training."""
        digest = hashlib.sha256()
        for param in self.encoder.params():
            digest.update(np.ascontiguousarray(param).tobytes())
        return digest.hexdigest()

    def embed(self, states: np.ndarray) -> np.ndarray:
        return self.encoder.forward(states)

    def insert(self, embedding: np.ndarray) -> None:
        self._store[self._head] = embedding
        self._norms[self._head] = float(embedding @ embedding)
        self._head = (self._head + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def _knn_distance(self, embeddings: np.ndarray) -> np.ndarray:
        """k-th nearest (or mean of k nearest) store distance per query row."""
        store = self._store[: self._size]
        norms = self._norms[: self._size]
        sq = (
            norms[None, :]
            - 2.0 * embeddings @ store.T
            + np.sum(embeddings**2, axis=1, keepdims=True)
        )
        np.maximum(sq, 0.0, out=sq)
        kth = min(self.k, self._size)
        part = np.partition(sq, kth - 1, axis=1)
        if self.average_knn:
            return np.sqrt(part[:, :kth]).mean(axis=1)
        return np.sqrt(part[:, kth - 1])

    def query(self, states: np.ndarray) -> np.ndarray | float:
        """Intrinsic reward of states against the current store (no insert)."""
        single = np.asarray(states).ndim == 1
        arr = np.atleast_2d(np.asarray(states, dtype=np.float32))
        if self._size == 0:
            out = np.zeros(len(arr))
            return float(out[0]) if single else out
        embeddings = np.atleast_2d(self.embed(arr))
        out = np.log1p(self._knn_distance(embeddings))
        return float(out[0]) if single else out

    def observe(self, state: np.ndarray) -> float:
        """Reward the state against the store, then record its embedding."""
        arr = np.asarray(state, dtype=np.float32)
        embedding = np.atleast_2d(self.embed(np.atleast_2d(arr)))
        if self._size == 0:
            reward = 0.0
        else:
            reward = float(np.log1p(self._knn_distance(embedding))[0])
        self.insert(embedding[0])
        return reward


def re3_intrinsic(re3: Re3Module, state: np.ndarray) -> float:
    """Reward-then-insert convenience wrapper used during rollouts."""
    return re3.observe(state)
