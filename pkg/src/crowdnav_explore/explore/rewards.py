"""Total-reward composition r = r_ex + beta * r_in."""

from __future__ import annotations

from .strategies import IcmConfig, Re3Config, Strategy


def augment_reward(strategy: Strategy, r_ex: float, r_in: float) -> float:
    """Learning reward for one transition.

    Only the curiosity strategies blend in the intrinsic term; reported
    metrics always use the extrinsic reward alone.
    """
    if isinstance(strategy, (IcmConfig, Re3Config)):
        return r_ex + strategy.beta * r_in
    return r_ex
