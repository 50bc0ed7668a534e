"""Sequential network container with exact reverse-mode gradients."""

from __future__ import annotations

import numpy as np

from .layers import Dense, Dropout, ForwardContractError, Mode, NoisyDense, Relu, ShapeError

_LAYER_KINDS = {
    "dense": Dense,
    "noisy_dense": NoisyDense,
    "dropout": Dropout,
    "relu": Relu,
}


class Network:
    """A stack of layers sharing one forward/backward cache.

    ``forward`` accepts a single vector or a batch; ``backward`` propagates a
    loss gradient of the same shape as the last output and fills every
    layer's parameter gradients.  Passing ``noise='frozen'`` reuses the noise
    samples and dropout masks of the previous pass, which makes the network a
    deterministic function for finite-difference checks.
    """

    def __init__(self, layers: list, dtype=np.float32):
        self.layers = list(layers)
        self.dtype = np.dtype(dtype)
        self._batched = False
        self._forwarded = False
        dims = [l for l in self.layers if isinstance(l, Dense)]
        self.in_dim = dims[0].in_dim if dims else None
        self.out_dim = dims[-1].out_dim if dims else None

    @classmethod
    def mlp(
        cls,
        sizes: list[int],
        rng: np.random.Generator | None,
        *,
        noisy: bool = False,
        dropout: float | None = None,
        dtype=np.float32,
    ) -> "Network":
        """Fully connected stack with a rectifier between affine layers.

        ``dropout`` inserts a dropout layer after each hidden activation.
        """
        if len(sizes) < 2:
            raise ValueError("need at least input and output sizes")
        dense_cls = NoisyDense if noisy else Dense
        layers: list = []
        for i in range(len(sizes) - 1):
            layers.append(dense_cls(sizes[i], sizes[i + 1], rng, dtype))
            if i < len(sizes) - 2:
                layers.append(Relu())
                if dropout is not None:
                    layers.append(Dropout(dropout))
        return cls(layers, dtype)

    def forward(
        self,
        x: np.ndarray,
        *,
        train: bool = False,
        noise: str = "zero",
        rng: np.random.Generator | None = None,
    ) -> np.ndarray:
        mode = Mode(train=train, noise=noise, rng=rng)
        arr = np.asarray(x, dtype=self.dtype)
        self._batched = arr.ndim == 2
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.ndim != 2 or (self.in_dim is not None and arr.shape[1] != self.in_dim):
            raise ShapeError(
                f"expected input of length {self.in_dim}, got shape {np.shape(x)}"
            )
        for layer in self.layers:
            arr = layer.forward(arr, mode)
        self._forwarded = True
        return arr if self._batched else arr[0]

    def backward(self, grad_out: np.ndarray) -> np.ndarray:
        if not self._forwarded:
            raise ForwardContractError("backward requires a cached forward pass")
        grad = np.asarray(grad_out, dtype=self.dtype)
        if grad.ndim == 1:
            grad = grad[None, :]
        for layer in reversed(self.layers):
            grad = layer.backward(grad)
        return grad if self._batched else grad[0]

    def params(self) -> list[np.ndarray]:
        return [p for layer in self.layers for p in layer.params()]

    def grads(self) -> list[np.ndarray]:
        return [g for layer in self.layers for g in layer.grads()]

    def post_update(self) -> None:
        for layer in self.layers:
            layer.post_update()

    def set_dropout_rate(self, rate: float) -> None:
        if not 0.0 <= rate <= 1.0:
            raise ValueError("dropout rate must lie in [0, 1]")
        for layer in self.layers:
            if isinstance(layer, Dropout):
                layer.rate = rate

    def descriptor(self) -> list[dict]:
        return [layer.descriptor() for layer in self.layers]

    def architecture(self) -> tuple:
        """Shape-defining fingerprint (mutable knobs like dropout rate excluded)."""
        fingerprint = []
        for desc in self.descriptor():
            fingerprint.append(
                (desc["kind"], desc.get("in"), desc.get("out"))
            )
        return tuple(fingerprint)

    def copy_weights_from(self, other: "Network") -> None:
        if self.architecture() != other.architecture():
            raise ValueError("cannot copy weights between different architectures")
        for mine, theirs in zip(self.params(), other.params()):
            mine[...] = theirs

    @classmethod
    def from_descriptor(cls, descriptor: list[dict], dtype=np.float32) -> "Network":
        layers = []
        for desc in descriptor:
            kind = desc.get("kind")
            if kind in ("dense", "noisy_dense"):
                layers.append(_LAYER_KINDS[kind](desc["in"], desc["out"], None, dtype))
            elif kind == "dropout":
                layers.append(Dropout(desc.get("rate", 0.5)))
            elif kind == "relu":
                layers.append(Relu())
            else:
                raise ValueError(f"unknown layer kind {kind!r}")
        return cls(layers, dtype)
