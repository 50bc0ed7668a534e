"""Dueling Q-network over encoded joint states."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..nn import Network, restore_networks, save_networks

N_ACTIONS = 81


@dataclass(frozen=True)
class QNetworkConfig:
    encoder_hidden: tuple[int, ...] = (256, 128)
    value_hidden: tuple[int, ...] = (128,)
    advantage_hidden: tuple[int, ...] = (128,)
    n_actions: int = N_ACTIONS
    use_noisy: bool = False
    dropout: bool = False

    def __post_init__(self):
        object.__setattr__(self, "encoder_hidden", tuple(self.encoder_hidden))
        object.__setattr__(self, "value_hidden", tuple(self.value_hidden))
        object.__setattr__(self, "advantage_hidden", tuple(self.advantage_hidden))
        if self.n_actions < 2:
            raise ValueError("need at least two actions")
        if not self.encoder_hidden:
            raise ValueError("encoder needs at least one hidden layer")


class QNetwork:
    """Shared encoder with value and advantage heads.

    Q(s, a) = V(s) + A(s, a) - mean_a A(s, a), which pins the mean advantage
    to zero and makes Q invariant to constant shifts of the advantage head.
    """

    def __init__(self, in_dim: int, config: QNetworkConfig,
                 rng: np.random.Generator | None, dtype=np.float32):
        from ..nn import Dropout, Relu

        self.in_dim = in_dim
        self.config = config
        dropout = 0.0 if config.dropout else None
        trunk = config.encoder_hidden[-1]
        encoder = Network.mlp(
            [in_dim, *config.encoder_hidden], rng, noisy=config.use_noisy,
            dropout=dropout, dtype=dtype,
        )
        # the trunk output is itself an activation: rectify (and mask) it too
        encoder.layers.append(Relu())
        if dropout is not None:
            encoder.layers.append(Dropout(dropout))
        self.encoder = encoder
        self.value = Network.mlp(
            [trunk, *config.value_hidden, 1], rng, noisy=config.use_noisy,
            dropout=dropout, dtype=dtype,
        )
        self.advantage = Network.mlp(
            [trunk, *config.advantage_hidden, config.n_actions], rng,
            noisy=config.use_noisy, dropout=dropout, dtype=dtype,
        )

    def _nets(self) -> dict[str, Network]:
        return {"encoder": self.encoder, "value": self.value, "advantage": self.advantage}

    def q_values(
        self,
        x: np.ndarray,
        *,
        train: bool = False,
        noise: str = "zero",
        rng: np.random.Generator | None = None,
    ) -> np.ndarray:
        kwargs = {"train": train, "noise": noise, "rng": rng}
        h = self.encoder.forward(x, **kwargs)
        v = self.value.forward(h, **kwargs)
        a = self.advantage.forward(h, **kwargs)
        return v + a - a.mean(axis=-1, keepdims=True)

    def greedy_action(self, x: np.ndarray) -> int:
        return int(np.argmax(self.q_values(x)))

    def backward_from_q(self, grad_q: np.ndarray) -> None:
        """Backpropagate a dL/dQ of the last forward pass into all parameters."""
        grad_q = np.asarray(grad_q)
        batched = grad_q.ndim == 2
        g2 = grad_q if batched else grad_q[None, :]
        # dQ/dA has the mean subtracted; dQ/dV sums over actions
        grad_a = g2 - g2.sum(axis=-1, keepdims=True) / g2.shape[-1]
        grad_v = g2.sum(axis=-1, keepdims=True)
        if not batched:
            grad_a, grad_v = grad_a[0], grad_v[0]
        grad_h = self.value.backward(grad_v) + self.advantage.backward(grad_a)
        self.encoder.backward(grad_h)

    def params(self) -> list[np.ndarray]:
        return [p for net in self._nets().values() for p in net.params()]

    def grads(self) -> list[np.ndarray]:
        return [g for net in self._nets().values() for g in net.grads()]

    def post_update(self) -> None:
        for net in self._nets().values():
            net.post_update()

    def set_dropout_rate(self, rate: float) -> None:
        for net in self._nets().values():
            net.set_dropout_rate(rate)

    def architecture(self) -> tuple:
        return tuple((name, net.architecture()) for name, net in sorted(self._nets().items()))

    def copy_from(self, other: "QNetwork") -> None:
        if self.architecture() != other.architecture():
            raise ValueError("architecture mismatch between Q-networks")
        for mine, theirs in zip(self.params(), other.params()):
            mine[...] = theirs

    def save_bytes(self) -> bytes:
        return save_networks(self._nets())

    def restore_bytes(self, blob: bytes) -> None:
        restore_networks(blob, self._nets())

    @classmethod
    def from_bytes(cls, blob: bytes) -> "QNetwork":
        """Reconstruct a saved Q-network, inferring its layout from the blob."""
        from ..nn import load_networks

        nets = load_networks(blob)
        missing = {"encoder", "value", "advantage"} - set(nets)
        if missing:
            from ..nn import SerializationError

            raise SerializationError(f"checkpoint lacks networks: {sorted(missing)}")
        instance = cls.__new__(cls)
        instance.encoder = nets["encoder"]
        instance.value = nets["value"]
        instance.advantage = nets["advantage"]
        instance.in_dim = nets["encoder"].in_dim
        instance.config = None
        return instance


def q_values(net: QNetwork, features: np.ndarray, **modes) -> np.ndarray:
    """Functional alias for QNetwork.q_values."""
    return net.q_values(features, **modes)
