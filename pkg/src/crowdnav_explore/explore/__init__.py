from .icm import IcmModule, icm_intrinsic, icm_update
from .re3 import Re3Module, re3_intrinsic
from .rewards import augment_reward
from .strategies import (
    DropoutSchedule,
    EpsilonGreedy,
    IcmConfig,
    NoisyNet,
    Re3Config,
    STRATEGY_NAMES,
    Strategy,
    dropout_rate,
    exploration_epsilon,
    linear_schedule,
    q_forward_mode,
    select_action,
    strategy_name,
)

__all__ = [
    "DropoutSchedule",
    "EpsilonGreedy",
    "IcmConfig",
    "IcmModule",
    "NoisyNet",
    "Re3Config",
    "Re3Module",
    "STRATEGY_NAMES",
    "Strategy",
    "augment_reward",
    "dropout_rate",
    "exploration_epsilon",
    "icm_intrinsic",
    "icm_update",
    "linear_schedule",
    "q_forward_mode",
    "re3_intrinsic",
    "select_action",
    "strategy_name",
]
