"""Layers of the minimal feed-forward engine.

Every layer caches what its backward pass needs during forward; backward
overwrites the parameter gradients.  All parameters live in the layer's
dtype (float32 by default).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class ShapeError(ValueError):
    """Input dimensions disagree with the layer."""


class ForwardContractError(RuntimeError):
    """Backward called without a cached forward pass."""


@dataclass
class Mode:
    """Forward-pass behavior switches.

    ``train`` enables dropout masking; ``noise`` selects how noisy layers
    draw their perturbation ('zero', 'sampled' or 'frozen'); ``rng`` feeds
    sampling.  ``frozen`` reuses the masks and noise of the previous pass,
    which finite-difference checks rely on.
    """

    train: bool = False
    noise: str = "zero"
    rng: np.random.Generator | None = None

    def __post_init__(self):
        if self.noise not in ("zero", "sampled", "frozen"):
            raise ValueError(f"unknown noise mode {self.noise!r}")


EVAL_MODE = Mode()


def _scaled_noise(rng: np.random.Generator, n: int) -> np.ndarray:
    """Factorized-Gaussian helper f(x) = sign(x) * sqrt(|x|)."""
    x = rng.standard_normal(n)
    return np.sign(x) * np.sqrt(np.abs(x))


class Dense:
    kind = "dense"

    def __init__(self, in_dim: int, out_dim: int, rng: np.random.Generator | None,
                 dtype=np.float32):
        self.in_dim = in_dim
        self.out_dim = out_dim
        self.dtype = np.dtype(dtype)
        limit = 1.0 / math.sqrt(in_dim)
        if rng is None:
            self.w = np.zeros((in_dim, out_dim), self.dtype)
            self.b = np.zeros(out_dim, self.dtype)
        else:
            self.w = rng.uniform(-limit, limit, (in_dim, out_dim)).astype(self.dtype)
            self.b = np.zeros(out_dim, self.dtype)
        self.dw = np.zeros_like(self.w)
        self.db = np.zeros_like(self.b)
        self._x = None

    def forward(self, x: np.ndarray, mode: Mode) -> np.ndarray:
        self._x = x
        return x @ self.w + self.b

    def backward(self, grad: np.ndarray) -> np.ndarray:
        if self._x is None:
            raise ForwardContractError("backward before forward")
        self.dw[...] = self._x.T @ grad
        self.db[...] = grad.sum(axis=0)
        return grad @ self.w.T

    def params(self):
        return [self.w, self.b]

    def grads(self):
        return [self.dw, self.db]

    def descriptor(self) -> dict:
        return {"kind": self.kind, "in": self.in_dim, "out": self.out_dim}

    def post_update(self):
        pass


class NoisyDense(Dense):
    """Dense layer with factorized Gaussian parameter noise.

    Effective weights are w + sigma_w * eps_w with eps_w the outer product of
    two scaled normal vectors resampled on demand; sigma starts at
    0.5 / sqrt(fan_in) and is trained like any parameter (clamped to stay
    nonnegative after each update).
    """

    kind = "noisy_dense"
    SIGMA_INIT = 0.5

    def __init__(self, in_dim, out_dim, rng, dtype=np.float32):
        super().__init__(in_dim, out_dim, rng, dtype)
        sigma = self.SIGMA_INIT / math.sqrt(in_dim)
        self.sigma_w = np.full((in_dim, out_dim), sigma, self.dtype)
        self.sigma_b = np.full(out_dim, sigma, self.dtype)
        self.dsigma_w = np.zeros_like(self.sigma_w)
        self.dsigma_b = np.zeros_like(self.sigma_b)
        self._eps_w = np.zeros((in_dim, out_dim), self.dtype)
        self._eps_b = np.zeros(out_dim, self.dtype)
        self._w_eff = self.w
        self._noisy = False

    def sample_noise(self, rng: np.random.Generator) -> None:
        eps_in = _scaled_noise(rng, self.in_dim)
        eps_out = _scaled_noise(rng, self.out_dim)
        self._eps_w = np.outer(eps_in, eps_out).astype(self.dtype)
        self._eps_b = eps_out.astype(self.dtype)
        self._noisy = True

    def zero_noise(self) -> None:
        self._eps_w = np.zeros((self.in_dim, self.out_dim), self.dtype)
        self._eps_b = np.zeros(self.out_dim, self.dtype)
        self._noisy = False

    def forward(self, x, mode: Mode):
        if mode.noise == "sampled":
            if mode.rng is None:
                raise ValueError("sampled noise requires an rng")
            self.sample_noise(mode.rng)
        elif mode.noise == "zero":
            self.zero_noise()
        self._x = x
        if self._noisy:
            self._w_eff = self.w + self.sigma_w * self._eps_w
            return x @ self._w_eff + (self.b + self.sigma_b * self._eps_b)
        self._w_eff = self.w
        return x @ self.w + self.b

    def backward(self, grad):
        if self._x is None:
            raise ForwardContractError("backward before forward")
        dw = self._x.T @ grad
        db = grad.sum(axis=0)
        self.dw[...] = dw
        self.db[...] = db
        self.dsigma_w[...] = dw * self._eps_w
        self.dsigma_b[...] = db * self._eps_b
        return grad @ self._w_eff.T

    def params(self):
        return [self.w, self.b, self.sigma_w, self.sigma_b]

    def grads(self):
        return [self.dw, self.db, self.dsigma_w, self.dsigma_b]

    def post_update(self):
        np.maximum(self.sigma_w, 0.0, out=self.sigma_w)
        np.maximum(self.sigma_b, 0.0, out=self.sigma_b)


class Dropout:
    kind = "dropout"

    def __init__(self, rate: float = 0.5):
        if not 0.0 <= rate <= 1.0:
            raise ValueError("dropout rate must lie in [0, 1]")
        self.rate = rate
        self._mask = None
        self._active = False

    def forward(self, x, mode: Mode):
        if mode.noise == "frozen" and mode.train:
            if self._mask is None or self._mask.shape != x.shape:
                raise ForwardContractError("no reusable dropout mask")
            return x * self._mask
        if not mode.train or self.rate == 0.0:
            self._active = False
            self._mask = None
            return x
        if mode.rng is None:
            raise ValueError("train-mode dropout requires an rng")
        keep = 1.0 - self.rate
        if keep <= 0.0:
            self._mask = np.zeros(x.shape, x.dtype)
        else:
            # inverted scaling keeps the expectation of the output unchanged
            self._mask = (mode.rng.random(x.shape) < keep).astype(x.dtype) / keep
        self._active = True
        return x * self._mask

    def backward(self, grad):
        if self._active:
            return grad * self._mask
        return grad

    def params(self):
        return []

    def grads(self):
        return []

    def descriptor(self) -> dict:
        return {"kind": self.kind, "rate": self.rate}

    def post_update(self):
        pass


class Relu:
    kind = "relu"

    def __init__(self):
        self._mask = None

    def forward(self, x, mode: Mode):
        self._mask = x > 0
        return np.maximum(x, 0.0)

    def backward(self, grad):
        if self._mask is None:
            raise ForwardContractError("backward before forward")
        return grad * self._mask

    def params(self):
        return []

    def grads(self):
        return []

    def descriptor(self) -> dict:
        return {"kind": self.kind}

    def post_update(self):
        pass
