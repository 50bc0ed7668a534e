"""Trajectory rendering to vector graphics.

Conventions: solid trails for the robot and humans, squares on reached
(intermediate) human goals, stars on the unreached final goals and the
robot's target, and elapsed-time labels along the paths every five seconds
plus the final time.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

LABEL_INTERVAL = 5.0


@dataclass
class AgentTrack:
    agent_id: int
    times: list[float]
    xs: list[float]
    ys: list[float]
    goals: list[tuple[float, float]]
    radius: float


def label_times(duration: float, interval: float = LABEL_INTERVAL) -> list[float]:
    """Times to annotate: every ``interval`` seconds plus the final time."""
    if duration <= 0:
        return [0.0]
    ticks = []
    t = interval
    while t < duration - 1e-9:
        ticks.append(t)
        t += interval
    ticks.append(duration)
    return ticks


def read_trajectory(path: Path, episode: int = 0) -> list[AgentTrack]:
    tracks: dict[int, AgentTrack] = {}
    with open(path, encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            if int(row["episode"]) != episode:
                continue
            agent_id = int(row["agent_id"])
            track = tracks.get(agent_id)
            if track is None:
                track = AgentTrack(agent_id, [], [], [], [], float(row["radius"]))
                tracks[agent_id] = track
            track.times.append(float(row["t"]))
            track.xs.append(float(row["x"]))
            track.ys.append(float(row["y"]))
            track.goals.append((float(row["goal_x"]), float(row["goal_y"])))
    if not tracks:
        raise FileNotFoundError(f"no rows for episode {episode} in {path}")
    return [tracks[k] for k in sorted(tracks)]


def _pose_at(track: AgentTrack, t: float) -> tuple[float, float]:
    best = min(range(len(track.times)), key=lambda i: abs(track.times[i] - t))
    return track.xs[best], track.ys[best]


def plot_trajectories(
    tracks: list[AgentTrack],
    out_path: Path,
    title: str | None = None,
) -> Path:
    fig, ax = plt.subplots(figsize=(7, 7))
    duration = max(track.times[-1] for track in tracks)
    ticks = label_times(duration)

    for track in tracks:
        is_robot = track.agent_id == 0
        color = "tab:orange" if is_robot else "tab:blue"
        ax.plot(
            track.xs,
            track.ys,
            color=color,
            linewidth=1.8 if is_robot else 1.0,
            alpha=1.0 if is_robot else 0.7,
            label="robot" if is_robot else None,
        )
        ax.add_patch(
            plt.Circle(
                (track.xs[-1], track.ys[-1]),
                track.radius,
                fill=is_robot,
                color=color,
                alpha=0.5,
            )
        )
        # goal markers: squares where an intermediate goal was swapped out,
        # a star on the goal still pending at the end
        seen = track.goals[0]
        for goal in track.goals[1:]:
            if goal != seen:
                ax.plot(
                    seen[0], seen[1], marker="s", color=color, markersize=6,
                    linestyle="none",
                )
                seen = goal
        ax.plot(
            seen[0], seen[1], marker="*", color=color, markersize=12,
            linestyle="none",
        )
        for t in ticks:
            x, y = _pose_at(track, t)
            ax.annotate(
                f"{t:g}",
                (x, y),
                fontsize=7,
                color=color,
                textcoords="offset points",
                xytext=(3, 3),
            )

    ax.set_aspect("equal")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, format=out_path.suffix.lstrip(".") or "svg")
    plt.close(fig)
    return out_path


def plot_file(trajectory_path: Path, out_path: Path, episode: int = 0) -> Path:
    tracks = read_trajectory(trajectory_path, episode)
    return plot_trajectories(tracks, out_path, title=f"episode {episode}")
