from .config import (
    ConfigError,
    OrcaSection,
    QnetSection,
    RunConfig,
    StrategySection,
    build_run_config,
    canonical_lines,
    config_hash,
    parse_config_text,
)
from .evaluation import evaluate, format_summary, load_policy, write_trajectory
from .metrics import (
    COLUMNS,
    MetricsRow,
    MetricsWriter,
    read_metrics,
    smooth,
    summarize,
)
from .plotting import label_times, plot_file, plot_trajectories, read_trajectory
from .policies import (
    BUILTIN_POLICIES,
    OrcaRobotPolicy,
    QPolicy,
    StopPolicy,
    StraightPolicy,
    make_builtin,
)
from .training import Trainer, TrainResult, derive_rng, episode_seed

__all__ = [
    "BUILTIN_POLICIES",
    "COLUMNS",
    "ConfigError",
    "MetricsRow",
    "MetricsWriter",
    "OrcaRobotPolicy",
    "OrcaSection",
    "QPolicy",
    "QnetSection",
    "RunConfig",
    "StopPolicy",
    "StraightPolicy",
    "StrategySection",
    "Trainer",
    "TrainResult",
    "build_run_config",
    "canonical_lines",
    "config_hash",
    "derive_rng",
    "episode_seed",
    "evaluate",
    "format_summary",
    "label_times",
    "load_policy",
    "make_builtin",
    "parse_config_text",
    "plot_file",
    "plot_trajectories",
    "read_metrics",
    "read_trajectory",
    "smooth",
    "summarize",
    "write_trajectory",
]
