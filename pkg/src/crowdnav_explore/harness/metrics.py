"""Per-episode metrics files, summaries and curve smoothing.

Metrics files are comma-separated with a commented header carrying the
config hash; rows append as training progresses, so a crashed run keeps
everything it earned.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from ..env import EpisodeOutcome

COLUMNS = (
    "episode",
    "return_discounted",
    "return_undiscounted",
    "outcome",
    "navigation_time",
    "exploration_rate",
    "mean_intrinsic",
)


@dataclass(frozen=True)
class MetricsRow:
    episode: int
    return_discounted: float
    return_undiscounted: float
    outcome: str
    navigation_time: float
    exploration_rate: float
    mean_intrinsic: float

    @classmethod
    def from_outcome(
        cls,
        episode: int,
        outcome: EpisodeOutcome,
        undiscounted: float,
        exploration_rate: float = 0.0,
        mean_intrinsic: float = 0.0,
    ) -> "MetricsRow":
        return cls(
            episode=episode,
            return_discounted=outcome.discounted_return,
            return_undiscounted=undiscounted,
            outcome=outcome.kind.value,
            navigation_time=outcome.navigation_time,
            exploration_rate=exploration_rate,
            mean_intrinsic=mean_intrinsic,
        )

    def as_csv(self) -> str:
        return ",".join(
            [
                str(self.episode),
                repr(self.return_discounted),
                repr(self.return_undiscounted),
                self.outcome,
                repr(self.navigation_time),
                repr(self.exploration_rate),
                repr(self.mean_intrinsic),
            ]
        )


class MetricsWriter:
    """Append-only CSV writer with a self-describing commented header."""

    def __init__(self, path: Path, config_hash: str):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "w", encoding="utf-8", newline="\n")
        self._fh.write(f"# config_hash={config_hash}\n")
        self._fh.write(",".join(COLUMNS) + "\n")
        self._fh.flush()

    def append(self, row: MetricsRow) -> None:
        self._fh.write(row.as_csv() + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False


def read_metrics(path: Path) -> tuple[list[MetricsRow], dict[str, str]]:
    meta: dict[str, str] = {}
    rows: list[MetricsRow] = []
    with open(path, encoding="utf-8") as fh:
        header: list[str] | None = None
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, value = body.split("=", 1)
                    meta[key.strip()] = value.strip()
                continue
            parts = next(csv.reader([line]))
            if header is None:
                header = parts
                if tuple(header) != COLUMNS:
                    raise ValueError(f"unexpected metrics columns in {path}")
                continue
            rows.append(
                MetricsRow(
                    episode=int(parts[0]),
                    return_discounted=float(parts[1]),
                    return_undiscounted=float(parts[2]),
                    outcome=parts[3],
                    navigation_time=float(parts[4]),
                    exploration_rate=float(parts[5]),
                    mean_intrinsic=float(parts[6]),
                )
            )
    return rows, meta


def smooth(series, factor: float = 0.99) -> list[float]:
    """Exponential smoothing: y_0 = x_0, y_t = factor*y_{t-1} + (1-factor)*x_t."""
    if not 0.0 <= factor < 1.0:
        raise ValueError("factor must lie in [0, 1)")
    out: list[float] = []
    prev = None
    for x in series:
        prev = float(x) if prev is None else factor * prev + (1.0 - factor) * float(x)
        out.append(prev)
    return out


def summarize(rows: list[MetricsRow]) -> dict[str, float]:
    """Aggregate metrics the way the comparison tables report them."""
    n = len(rows)
    if n == 0:
        raise ValueError("no rows to summarize")
    successes = [r for r in rows if r.outcome == "success"]
    collisions = [r for r in rows if r.outcome == "collision"]
    timeouts = [r for r in rows if r.outcome == "timeout"]
    nav = (
        sum(r.navigation_time for r in successes) / len(successes)
        if successes
        else float("nan")
    )
    return {
        "episodes": n,
        "return_discounted": sum(r.return_discounted for r in rows) / n,
        "return_undiscounted": sum(r.return_undiscounted for r in rows) / n,
        "success_rate": len(successes) / n,
        "collision_rate": len(collisions) / n,
        "timeout_rate": len(timeouts) / n,
        "navigation_time": nav,
    }
