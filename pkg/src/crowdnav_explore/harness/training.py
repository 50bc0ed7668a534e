"""The training loop: rollouts, reward augmentation, updates, checkpoints."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..agent import (
    QNetwork,
    ReplayBuffer,
    il_pretrain,
    sync_target,
    train_step,
)
from ..env import build_action_space, encode_state, feature_length, run_episode
from ..explore import (
    DropoutSchedule,
    EpsilonGreedy,
    IcmConfig,
    IcmModule,
    NoisyNet,
    Re3Config,
    Re3Module,
    exploration_epsilon,
    q_forward_mode,
    select_action,
    strategy_name,
)
from ..nn import Adam
from .config import RunConfig, config_hash
from .metrics import MetricsRow, MetricsWriter
from .policies import QPolicy, StraightPolicy
from ..orca import orca_velocity

# Sub-stream tags of the master seed.
_NET_STREAM = 0
_TARGET_STREAM = 1
_TRAIN_EP_STREAM = 10
_VAL_EP_STREAM = 11
_EVAL_EP_STREAM = 12
_ACTION_STREAM = 13
_TRAIN_RNG_STREAM = 14
_ICM_STREAM = 15
_RE3_STREAM = 16
_IL_STREAM = 17


def derive_rng(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) % 2**63, *tags])


def episode_seed(seed: int, stream: int, index: int) -> int:
    """Counter-derived per-episode seed, reproducible in isolation."""
    mix = np.random.SeedSequence([int(seed) % 2**63, stream, index])
    return int(mix.generate_state(1, np.uint64)[0] % 2**63)


class _TrainingPolicy:
    """Strategy-driven action selection against the online network."""

    def __init__(self, trainer: "Trainer"):
        self._trainer = trainer
        self.episode = 0
        self.rng = None

    def __call__(self, state):
        t = self._trainer
        features = encode_state(state)
        mode = q_forward_mode(t.strategy, self.episode)
        q = t.online.q_values(features, rng=self.rng, **mode)
        index = select_action(t.strategy, q, self.episode, self.rng)
        return t.action_set[index]


class _DemoOrcaPolicy:
    """ORCA velocity mapped to the nearest discrete action (for imitation)."""

    def __init__(self, action_set, params):
        self._action_set = action_set
        self._params = params

    def __call__(self, state):
        from ..agent import nearest_action

        velocity = orca_velocity(state.robot, state.humans, self._params)
        return nearest_action(self._action_set, velocity, state.robot.heading)


@dataclass
class TrainResult:
    metrics_path: Path
    final_checkpoint: Path
    best_checkpoint: Path | None
    best_validation: float | None
    episodes: int


class Trainer:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.env_cfg = cfg.env
        self.strategy = cfg.strategy()
        self.train_cfg = cfg.train
        self.crowd_params = cfg.orca.crowd_params(cfg.env.dt)
        self.hash = config_hash(cfg)

        in_dim = feature_length(cfg.env.n_humans)
        qnet_cfg = cfg.qnet_config()
        seed = cfg.seed
        self.online = QNetwork(in_dim, qnet_cfg, derive_rng(seed, _NET_STREAM))
        self.target = QNetwork(in_dim, qnet_cfg, derive_rng(seed, _TARGET_STREAM))
        self.opt = Adam(self.online.params(), lr=self.train_cfg.learning_rate)
        self.buffer = ReplayBuffer(self.train_cfg.buffer_capacity, seed=seed)
        self.action_set = build_action_space(cfg.env.robot_v_pref, cfg.env.speed_spacing)
        self.train_rng = derive_rng(seed, _TRAIN_RNG_STREAM)

        self.icm: IcmModule | None = None
        self.re3: Re3Module | None = None
        if isinstance(self.strategy, IcmConfig):
            self.icm = IcmModule(
                in_dim,
                n_actions=qnet_cfg.n_actions,
                embed_dim=self.strategy.embed_dim,
                rng=derive_rng(seed, _ICM_STREAM),
                lr=self.train_cfg.learning_rate,
                loss_mix=self.strategy.loss_mix,
            )
        elif isinstance(self.strategy, Re3Config):
            self.re3 = Re3Module(
                in_dim,
                embed_dim=self.strategy.embed_dim,
                k=self.strategy.k,
                capacity=self.strategy.capacity,
                rng=derive_rng(seed, _RE3_STREAM),
                average_knn=self.strategy.average_knn,
            )

    # -- reward augmentation hooks -------------------------------------

    def _reward_fn(self):
        if isinstance(self.strategy, IcmConfig):
            beta = self.strategy.beta
            if self.strategy.recompute:
                icm = self.icm

                def recompute(batch):
                    states = np.stack([t.state for t in batch])
                    actions = [t.action for t in batch]
                    nexts = np.stack([t.next_state for t in batch])
                    return [
                        t.reward + beta * r
                        for t, r in zip(batch, icm.intrinsic(states, actions, nexts))
                    ]

                return recompute
            return lambda batch: [t.reward + beta * t.intrinsic for t in batch]
        if isinstance(self.strategy, Re3Config):
            beta = self.strategy.beta
            re3 = self.re3

            def against_store(batch):
                nexts = np.stack([t.next_state for t in batch])
                return [
                    t.reward + beta * r for t, r in zip(batch, re3.query(nexts))
                ]

            return against_store
        return None

    def _train_mode(self) -> dict:
        if isinstance(self.strategy, NoisyNet):
            return {"noise": "sampled", "rng": self.train_rng}
        if isinstance(self.strategy, DropoutSchedule):
            return {"train": True, "rng": self.train_rng}
        return {}

    # -- per-episode bookkeeping ---------------------------------------

    def _collect_intrinsic(self, transitions) -> float:
        """Attach collection-time intrinsic rewards; returns the episode mean."""
        if self.icm is not None and transitions:
            states = np.stack([t.state for t in transitions])
            actions = [t.action for t in transitions]
            nexts = np.stack([t.next_state for t in transitions])
            rewards = np.atleast_1d(self.icm.intrinsic(states, actions, nexts))
            for transition, r in zip(transitions, rewards):
                transition.intrinsic = float(r)
            return float(np.mean(rewards))
        if self.re3 is not None and transitions:
            rewards = [self.re3.observe(t.next_state) for t in transitions]
            return float(np.mean(rewards))
        return 0.0

    def _exploration_rate(self, episode: int) -> float:
        if isinstance(self.strategy, EpsilonGreedy):
            return self.strategy.epsilon(episode)
        if isinstance(self.strategy, DropoutSchedule):
            return self.strategy.rate(episode)
        return exploration_epsilon(self.strategy, episode)

    def _updates_per_episode(self, n_transitions: int) -> int:
        if self.train_cfg.train_steps_per_episode > 0:
            return self.train_cfg.train_steps_per_episode
        return n_transitions

    # -- validation and checkpoints ------------------------------------

    def validate(self) -> float:
        policy = QPolicy(self.online, self.env_cfg.dt, self.env_cfg.speed_spacing)
        successes = 0
        n = self.train_cfg.validation_episodes
        for i in range(n):
            record = run_episode(
                policy,
                self.cfg.scenario,
                self.env_cfg,
                episode_seed(self.cfg.seed, _VAL_EP_STREAM, i),
                orca_params=self.crowd_params,
            )
            successes += record.outcome.kind.value == "success"
        return successes / n if n else 0.0

    def _save_checkpoint(self, path: Path, episode: int, score: float | None):
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(self.online.save_bytes())
        meta = {
            "episode": episode,
            "config_hash": self.hash,
            "strategy": strategy_name(self.strategy),
            "validation_score": score,
            "n_humans": self.env_cfg.n_humans,
        }
        path.with_suffix(path.suffix + ".meta").write_text(
            json.dumps(meta, sort_keys=True) + "\n", encoding="utf-8"
        )

    # -- imitation pretraining ------------------------------------------

    def _imitation_stage(self):
        n = self.train_cfg.il_episodes
        if n <= 0:
            return
        demo_policy = _DemoOrcaPolicy(self.action_set, self.crowd_params)
        demos = []
        for i in range(n):
            record = run_episode(
                demo_policy,
                self.cfg.scenario,
                self.env_cfg,
                episode_seed(self.cfg.seed, _IL_STREAM, i),
                orca_params=self.crowd_params,
            )
            demos.append(record.transitions)
        il_pretrain(
            demos,
            self.online,
            self.opt,
            self.train_cfg.il_epochs,
            self.train_cfg.gamma,
            self.train_cfg.batch_size,
            derive_rng(self.cfg.seed, _IL_STREAM),
        )
        sync_target(self.online, self.target)

    # -- main loop --------------------------------------------------------

    def run(self, out_dir: Path | None = None, log=None) -> TrainResult:
        out = Path(out_dir) if out_dir is not None else Path(self.cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        metrics_path = out / "train_metrics.csv"
        checkpoints = out / "checkpoints"
        best_path: Path | None = None
        best_score: float | None = None

        self._imitation_stage()

        policy = _TrainingPolicy(self)
        reward_fn = self._reward_fn()
        train_mode = self._train_mode()
        tc = self.train_cfg

        with MetricsWriter(metrics_path, self.hash) as writer:
            for episode in range(tc.episodes):
                if isinstance(self.strategy, DropoutSchedule):
                    self.online.set_dropout_rate(self.strategy.rate(episode))
                sync_target(self.online, self.target, episode, tc.target_update)

                policy.episode = episode
                policy.rng = derive_rng(self.cfg.seed, _ACTION_STREAM, episode)
                record = run_episode(
                    policy,
                    self.cfg.scenario,
                    self.env_cfg,
                    episode_seed(self.cfg.seed, _TRAIN_EP_STREAM, episode),
                    orca_params=self.crowd_params,
                )
                mean_intrinsic = self._collect_intrinsic(record.transitions)
                for transition in record.transitions:
                    self.buffer.push(transition)

                if len(self.buffer) >= max(tc.warmup, tc.batch_size):
                    for _ in range(self._updates_per_episode(len(record.transitions))):
                        batch = self.buffer.sample(tc.batch_size)
                        train_step(
                            self.buffer,
                            self.online,
                            self.target,
                            self.opt,
                            tc.batch_size,
                            tc.gamma,
                            reward_fn=reward_fn,
                            batch=batch,
                            **train_mode,
                        )
                        if self.icm is not None:
                            self.icm.update(
                                np.stack([t.state for t in batch]),
                                [t.action for t in batch],
                                np.stack([t.next_state for t in batch]),
                            )

                undiscounted = sum(t.reward for t in record.transitions)
                writer.append(
                    MetricsRow.from_outcome(
                        episode,
                        record.outcome,
                        undiscounted,
                        exploration_rate=self._exploration_rate(episode),
                        mean_intrinsic=mean_intrinsic,
                    )
                )

                is_last = episode == tc.episodes - 1
                if tc.validation_interval > 0 and (
                    (episode + 1) % tc.validation_interval == 0 or is_last
                ):
                    score = self.validate()
                    if best_score is None or score >= best_score:
                        best_score = score
                        best_path = checkpoints / "best.ckpt"
                        self._save_checkpoint(best_path, episode, score)
                    if log:
                        log(f"episode {episode + 1}: validation success {score:.3f}")
                if tc.checkpoint_interval > 0 and (
                    (episode + 1) % tc.checkpoint_interval == 0
                ):
                    self._save_checkpoint(
                        checkpoints / f"ep{episode + 1:06d}.ckpt", episode, None
                    )

        final_path = checkpoints / "final.ckpt"
        self._save_checkpoint(final_path, tc.episodes - 1, best_score)
        return TrainResult(
            metrics_path=metrics_path,
            final_checkpoint=final_path,
            best_checkpoint=best_path,
            best_validation=best_score,
            episodes=tc.episodes,
        )
