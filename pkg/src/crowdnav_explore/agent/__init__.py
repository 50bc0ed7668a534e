from .learner import (
    TrainConfig,
    il_pretrain,
    monte_carlo_returns,
    nearest_action,
    sync_target,
    td_target,
    td_targets_batch,
    train_step,
)
from .qnet import N_ACTIONS, QNetwork, QNetworkConfig, q_values
from .replay import ReplayBuffer, Transition

__all__ = [
    "N_ACTIONS",
    "QNetwork",
    "QNetworkConfig",
    "ReplayBuffer",
    "TrainConfig",
    "Transition",
    "il_pretrain",
    "monte_carlo_returns",
    "nearest_action",
    "q_values",
    "sync_target",
    "td_target",
    "td_targets_batch",
    "train_step",
]
