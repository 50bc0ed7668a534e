"""Flat key = value run configuration with dotted namespaces.

Every key in the config file can also be given as a CLI flag of the same
name (``--train.episodes 500``).  Unknown keys fail before any compute.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields
from pathlib import Path

from ..agent import QNetworkConfig, TrainConfig
from ..env import EnvConfig
from ..explore import (
    DropoutSchedule,
    EpsilonGreedy,
    IcmConfig,
    NoisyNet,
    Re3Config,
    Strategy,
    strategy_name,
)
from ..orca import OrcaParams


class ConfigError(ValueError):
    """Invalid, unknown or inconsistent configuration input."""


@dataclass(frozen=True)
class OrcaSection:
    time_horizon: float = 5.0
    neighbor_dist: float = 10.0
    max_neighbors: int = 10
    safety_margin: float = 0.0
    robot_safety_margin: float = 0.25

    def crowd_params(self, dt: float) -> OrcaParams:
        return OrcaParams(
            time_horizon=self.time_horizon,
            neighbor_dist=self.neighbor_dist,
            max_neighbors=self.max_neighbors,
            time_step=dt,
            safety_margin=self.safety_margin,
        )

    def robot_params(self, dt: float) -> OrcaParams:
        return OrcaParams(
            time_horizon=self.time_horizon,
            neighbor_dist=self.neighbor_dist,
            max_neighbors=self.max_neighbors,
            time_step=dt,
            safety_margin=self.robot_safety_margin,
        )


@dataclass(frozen=True)
class StrategySection:
    kind: str = "epsilon"
    epsilon_start: float = 0.5
    epsilon_end: float = 0.1
    epsilon_decay: int = 4_000
    dropout_start: float = 0.5
    dropout_end: float = 0.01
    dropout_decay: int = 7_000
    beta: float = 0.01
    icm_loss_mix: float = 0.2
    icm_recompute: bool = False
    re3_k: int = 3
    re3_capacity: int = 10_000
    re3_average: bool = False
    stacked_epsilon: float = 0.0

    def build(self) -> Strategy:
        if self.kind == "epsilon":
            return EpsilonGreedy(
                self.epsilon_start, self.epsilon_end, self.epsilon_decay
            )
        if self.kind == "noisy":
            return NoisyNet()
        if self.kind == "dropout":
            return DropoutSchedule(
                self.dropout_start, self.dropout_end, self.dropout_decay
            )
        if self.kind == "icm":
            return IcmConfig(
                beta=self.beta,
                loss_mix=self.icm_loss_mix,
                recompute=self.icm_recompute,
                stacked_epsilon=self.stacked_epsilon,
            )
        if self.kind == "re3":
            return Re3Config(
                beta=self.beta,
                k=self.re3_k,
                capacity=self.re3_capacity,
                average_knn=self.re3_average,
                stacked_epsilon=self.stacked_epsilon,
            )
        raise ConfigError(
            f"unknown strategy kind {self.kind!r} "
            "(choose epsilon|noisy|dropout|icm|re3)"
        )


@dataclass(frozen=True)
class QnetSection:
    encoder_hidden: tuple[int, ...] = (256, 128)
    value_hidden: tuple[int, ...] = (128,)
    advantage_hidden: tuple[int, ...] = (128,)

    def build(self, strategy_kind: str) -> QNetworkConfig:
        return QNetworkConfig(
            encoder_hidden=self.encoder_hidden,
            value_hidden=self.value_hidden,
            advantage_hidden=self.advantage_hidden,
            use_noisy=strategy_kind == "noisy",
            dropout=strategy_kind == "dropout",
        )


@dataclass(frozen=True)
class RunConfig:
    scenario: str = "circle"
    seed: int = 0
    out: Path = Path("runs")
    env: EnvConfig = EnvConfig()
    orca: OrcaSection = OrcaSection()
    strategy_section: StrategySection = StrategySection()
    qnet_section: QnetSection = QnetSection()
    train: TrainConfig = TrainConfig()

    def strategy(self) -> Strategy:
        return self.strategy_section.build()

    def qnet_config(self) -> QNetworkConfig:
        return self.qnet_section.build(self.strategy_section.kind)


_TRAIN_FIELDS = {
    f.name for f in fields(TrainConfig) if f.name != "seed"
}

_SECTIONS = {
    "env": (EnvConfig, {f.name for f in fields(EnvConfig)}),
    "orca": (OrcaSection, {f.name for f in fields(OrcaSection)}),
    "strategy": (StrategySection, {f.name for f in fields(StrategySection)}),
    "qnet": (QnetSection, {f.name for f in fields(QnetSection)}),
    "train": (TrainConfig, _TRAIN_FIELDS),
}

_RUN_KEYS = {"run.scenario", "run.seed", "run.out"}


def parse_config_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; '#' starts a comment."""
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        mapping[key.strip()] = value.strip()
    return mapping


def _parse_value(key: str, raw: str, annotation: str):
    try:
        if annotation in ("int",):
            return int(raw)
        if annotation in ("float",):
            return float(raw)
        if annotation in ("float | None",):
            return None if raw in ("", "none", "None") else float(raw)
        if annotation in ("bool",):
            lowered = raw.lower()
            if lowered in ("true", "1", "yes"):
                return True
            if lowered in ("false", "0", "no"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if annotation.startswith("tuple"):
            return tuple(int(part) for part in raw.split(",") if part.strip())
        return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {exc}") from None


def build_run_config(mapping: dict[str, str]) -> RunConfig:
    """Typed, validated RunConfig from a flat string mapping."""
    sections: dict[str, dict] = {name: {} for name in _SECTIONS}
    run_kwargs: dict = {}

    for key, raw in mapping.items():
        if key in _RUN_KEYS:
            name = key.split(".", 1)[1]
            if name == "seed":
                run_kwargs["seed"] = _parse_value(key, raw, "int")
            elif name == "out":
                run_kwargs["out"] = Path(raw)
            else:
                if raw not in ("circle", "square"):
                    raise ConfigError(
                        f"run.scenario must be circle or square, got {raw!r}"
                    )
                run_kwargs["scenario"] = raw
            continue
        if "." not in key:
            raise ConfigError(f"unknown config key {key!r}")
        section, name = key.split(".", 1)
        if section not in _SECTIONS or name not in _SECTIONS[section][1]:
            raise ConfigError(f"unknown config key {key!r}")
        cls = _SECTIONS[section][0]
        annotation = {f.name: f.type for f in fields(cls)}[name]
        sections[section][name] = _parse_value(key, raw, annotation)

    try:
        env = EnvConfig(**sections["env"])
        orca = OrcaSection(**sections["orca"])
        strategy_section = StrategySection(**sections["strategy"])
        qnet_section = QnetSection(**sections["qnet"])
        train_kwargs = dict(sections["train"])
        train_kwargs.setdefault("gamma", env.gamma)
        train = TrainConfig(seed=run_kwargs.get("seed", 0), **train_kwargs)
        cfg = RunConfig(
            env=env,
            orca=orca,
            strategy_section=strategy_section,
            qnet_section=qnet_section,
            train=train,
            **run_kwargs,
        )
        cfg.strategy()  # validates kind and hyperparameters
        return cfg
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def canonical_lines(cfg: RunConfig) -> list[str]:
    """Fully resolved configuration as sorted ``key = value`` lines."""
    out: dict[str, object] = {
        "run.scenario": cfg.scenario,
        "run.seed": cfg.seed,
    }
    pairs = [
        ("env", cfg.env),
        ("orca", cfg.orca),
        ("strategy", cfg.strategy_section),
        ("qnet", cfg.qnet_section),
        ("train", cfg.train),
    ]
    for prefix, section in pairs:
        for f in fields(section):
            if prefix == "train" and f.name == "seed":
                continue
            value = getattr(section, f.name)
            if isinstance(value, tuple):
                value = ",".join(str(v) for v in value)
            out[f"{prefix}.{f.name}"] = value
    return [f"{key} = {out[key]}" for key in sorted(out)]


def config_hash(cfg: RunConfig) -> str:
    text = "\n".join(canonical_lines(cfg))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]
