"""Seeded evaluation rollouts and trajectory export."""

from __future__ import annotations

from pathlib import Path

from ..agent import QNetwork
from ..env import EpisodeRecord, run_episode
from ..nn import SerializationError
from .config import ConfigError, RunConfig, config_hash
from .metrics import MetricsRow, MetricsWriter, read_metrics, summarize
from .policies import BUILTIN_POLICIES, QPolicy, make_builtin
from .training import _EVAL_EP_STREAM, episode_seed

TRAJECTORY_COLUMNS = (
    "episode",
    "t",
    "agent_id",
    "x",
    "y",
    "vx",
    "vy",
    "radius",
    "goal_x",
    "goal_y",
)


def load_policy(spec: str, cfg: RunConfig):
    """Resolve a builtin name or checkpoint path into a policy."""
    if spec in BUILTIN_POLICIES:
        return make_builtin(
            spec,
            cfg.env.dt,
            cfg.orca.robot_params(cfg.env.dt),
            cfg.env.speed_spacing,
        )
    path = Path(spec)
    if not path.exists():
        raise ConfigError(
            f"policy {spec!r} is neither builtin ({'|'.join(BUILTIN_POLICIES)}) "
            "nor an existing checkpoint file"
        )
    try:
        net = QNetwork.from_bytes(path.read_bytes())
    except SerializationError as exc:
        raise ConfigError(f"cannot load checkpoint {path}: {exc}") from None
    from ..env import feature_length

    expected = feature_length(cfg.env.n_humans)
    if net.in_dim != expected:
        raise ConfigError(
            f"checkpoint expects feature length {net.in_dim}, environment "
            f"produces {expected} (n_humans={cfg.env.n_humans})"
        )
    return QPolicy(net, cfg.env.dt, cfg.env.speed_spacing)


def write_trajectory(records: list[EpisodeRecord], path: Path) -> None:
    """Per-step pose rows for every agent of the given episode records."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(TRAJECTORY_COLUMNS) + "\n")
        for index, record in enumerate(records):
            for step in [record.initial, *record.trajectory]:
                for agent_id, pose in enumerate(step.poses):
                    fh.write(
                        ",".join(
                            [
                                str(index),
                                repr(step.time),
                                str(agent_id),
                                repr(pose.x),
                                repr(pose.y),
                                repr(pose.vx),
                                repr(pose.vy),
                                repr(pose.radius),
                                repr(pose.goal_x),
                                repr(pose.goal_y),
                            ]
                        )
                        + "\n"
                    )


def evaluate(
    cfg: RunConfig,
    policy,
    episodes: int,
    *,
    metrics_path: Path | None = None,
    trajectory_path: Path | None = None,
    record_episodes: int = 0,
    log=None,
) -> dict[str, float]:
    """Greedy rollouts on freshly seeded scenarios; returns the summary."""
    rows: list[MetricsRow] = []
    kept: list[EpisodeRecord] = []
    crowd_params = cfg.orca.crowd_params(cfg.env.dt)
    writer = (
        MetricsWriter(metrics_path, config_hash(cfg)) if metrics_path else None
    )
    try:
        for i in range(episodes):
            record = run_episode(
                policy,
                cfg.scenario,
                cfg.env,
                episode_seed(cfg.seed, _EVAL_EP_STREAM, i),
                orca_params=crowd_params,
            )
            row = MetricsRow.from_outcome(
                i,
                record.outcome,
                sum(t.reward for t in record.transitions),
            )
            rows.append(row)
            if writer:
                writer.append(row)
            if i < record_episodes:
                kept.append(record)
            if log and (i + 1) % 100 == 0:
                log(f"evaluated {i + 1}/{episodes} episodes")
    finally:
        if writer:
            writer.close()
    if trajectory_path and kept:
        write_trajectory(kept, trajectory_path)
    return summarize(rows)


def format_summary(name: str, summary: dict[str, float]) -> str:
    return (
        f"{name}: episodes {summary['episodes']:.0f}  "
        f"return {summary['return_discounted']:.4f} "
        f"(undiscounted {summary['return_undiscounted']:.4f})  "
        f"success {summary['success_rate']:.3f}  "
        f"collision {summary['collision_rate']:.3f}  "
        f"timeout {summary['timeout_rate']:.3f}  "
        f"nav time {summary['navigation_time']:.3f}s"
    )
