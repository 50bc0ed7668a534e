"""Curiosity through forward-model prediction error.

A learned encoder maps state features to a 128-vector; an inverse head
predicts the taken action from consecutive embeddings and a forward head
predicts the next embedding from the current one plus the action.  The mean
squared forward-prediction error is the intrinsic reward, so states whose
dynamics the module cannot yet predict pay an exploration bonus.
"""

from __future__ import annotations

import numpy as np

from ..nn import Adam, Network


def _one_hot(actions: np.ndarray, n: int, dtype) -> np.ndarray:
    out = np.zeros((len(actions), n), dtype=dtype)
    out[np.arange(len(actions)), actions] = 1.0
    return out


class IcmModule:
    """Encoder, inverse model and forward model trained jointly."""

    def __init__(
        self,
        feature_dim: int,
        n_actions: int = 81,
        embed_dim: int = 128,
        rng: np.random.Generator | None = None,
        lr: float = 1e-3,
        loss_mix: float = 0.2,
        dtype=np.float32,
    ):
        if rng is None:
            rng = np.random.default_rng(0)
        if not 0.0 <= loss_mix <= 1.0:
            raise ValueError("loss_mix must lie in [0, 1]")
        self.feature_dim = feature_dim
        self.n_actions = n_actions
        self.embed_dim = embed_dim
        self.loss_mix = loss_mix
        self.dtype = np.dtype(dtype)
        self.encoder = Network.mlp([feature_dim, 256, embed_dim], rng, dtype=dtype)
        self.inverse = Network.mlp(
            [2 * embed_dim, 256, 128, n_actions], rng, dtype=dtype
        )
        self.forward = Network.mlp(
            [embed_dim + n_actions, 256, 128, embed_dim], rng, dtype=dtype
        )
        self.opt = Adam(
            self.encoder.params() + self.inverse.params() + self.forward.params(),
            lr=lr,
        )

    def embed(self, states: np.ndarray) -> np.ndarray:
        return self.encoder.forward(states)

    def intrinsic(
        self, states: np.ndarray, actions, next_states: np.ndarray
    ) -> np.ndarray | float:
        """Mean squared error between predicted and actual next embeddings."""
        single = np.asarray(states).ndim == 1
        s = np.atleast_2d(np.asarray(states, dtype=self.dtype))
        s_next = np.atleast_2d(np.asarray(next_states, dtype=self.dtype))
        a = np.atleast_1d(np.asarray(actions, dtype=int))
        phi = self.encoder.forward(np.concatenate([s, s_next], axis=0))
        phi_s, phi_next = phi[: len(s)], phi[len(s):]
        pred = self.forward.forward(
            np.concatenate([phi_s, _one_hot(a, self.n_actions, self.dtype)], axis=1)
        )
        errors = np.mean((phi_next - pred) ** 2, axis=1)
        return float(errors[0]) if single else errors

    def update(
        self, states: np.ndarray, actions, next_states: np.ndarray
    ) -> tuple[float, float]:
        """One optimizer step on mixed inverse + forward losses.

        Returns (inverse loss, forward loss).  The encoder receives gradients
        from both heads; the forward regression target is held constant.
        """
        s = np.atleast_2d(np.asarray(states, dtype=self.dtype))
        s_next = np.atleast_2d(np.asarray(next_states, dtype=self.dtype))
        a = np.atleast_1d(np.asarray(actions, dtype=int))
        batch = len(s)
        if batch == 0:
            raise ValueError("empty batch")

        # one stacked encoder pass covers both s and s' and lets a single
        # backward accumulate their shared-weight gradients exactly
        phi = self.encoder.forward(np.concatenate([s, s_next], axis=0))
        phi_s, phi_next = phi[:batch], phi[batch:]

        logits = self.inverse.forward(
            np.concatenate([phi_s, phi_next], axis=1)
        )
        shifted = logits - logits.max(axis=1, keepdims=True)
        exp = np.exp(shifted)
        probs = exp / exp.sum(axis=1, keepdims=True)
        picked = np.clip(probs[np.arange(batch), a], 1e-12, None)
        inverse_loss = float(np.mean(-np.log(picked)))

        one_hot = _one_hot(a, self.n_actions, self.dtype)
        pred = self.forward.forward(np.concatenate([phi_s, one_hot], axis=1))
        diff = pred - phi_next
        forward_loss = float(np.mean(diff**2))

        grad_logits = probs.copy()
        grad_logits[np.arange(batch), a] -= 1.0
        grad_logits *= self.loss_mix / batch
        grad_inverse_in = self.inverse.backward(grad_logits)

        grad_pred = (1.0 - self.loss_mix) * 2.0 * diff / diff.size
        grad_forward_in = self.forward.backward(grad_pred)

        d = self.embed_dim
        grad_phi_s = grad_inverse_in[:, :d] + grad_forward_in[:, :d]
        grad_phi_next = grad_inverse_in[:, d:]
        self.encoder.backward(np.concatenate([grad_phi_s, grad_phi_next], axis=0))

        self.opt.step(
            self.encoder.grads() + self.inverse.grads() + self.forward.grads()
        )
        return inverse_loss, forward_loss


def icm_intrinsic(icm: IcmModule, state, action, next_state):
    return icm.intrinsic(state, action, next_state)


def icm_update(icm: IcmModule, states, actions, next_states) -> tuple[float, float]:
    return icm.update(states, actions, next_states)
