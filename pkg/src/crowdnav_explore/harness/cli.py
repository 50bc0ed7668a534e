"""Command-line front end: train, evaluate, compare, plot."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, build_run_config, canonical_lines, parse_config_text
from .metrics import read_metrics, smooth, summarize

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _split_overrides(tokens: list[str]) -> dict[str, str]:
    """Dotted config overrides given as '--section.key value' or '=value'."""
    overrides: dict[str, str] = {}
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if not token.startswith("--") or "." not in token:
            raise ConfigError(f"unrecognized argument {token!r}")
        body = token[2:]
        if "=" in body:
            key, value = body.split("=", 1)
            i += 1
        else:
            key = body
            if i + 1 >= len(tokens):
                raise ConfigError(f"missing value for override {token!r}")
            value = tokens[i + 1]
            i += 2
        overrides[key] = value
    return overrides


def _load_mapping(args, overrides: dict[str, str]) -> dict[str, str]:
    mapping: dict[str, str] = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        mapping.update(parse_config_text(path.read_text(encoding="utf-8")))
    mapping.update(overrides)
    if getattr(args, "seed", None) is not None:
        mapping["run.seed"] = str(args.seed)
    if getattr(args, "scenario", None):
        mapping["run.scenario"] = args.scenario
    if getattr(args, "strategy", None):
        mapping["strategy.kind"] = args.strategy
    if getattr(args, "episodes", None) is not None and args.command == "train":
        mapping["train.episodes"] = str(args.episodes)
    if getattr(args, "out", None):
        mapping["run.out"] = args.out
    return mapping


def _add_common(parser: _Parser, *, episodes_default=None):
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--episodes", type=int, default=episodes_default)
    parser.add_argument("--scenario", choices=("circle", "square"))
    parser.add_argument("--out", help="output directory")


def cmd_train(args, overrides) -> int:
    from .training import Trainer

    cfg = build_run_config(_load_mapping(args, overrides))
    trainer = Trainer(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(
        "\n".join(canonical_lines(cfg)) + "\n", encoding="utf-8"
    )
    result = trainer.run(out, log=lambda msg: print(msg, flush=True))
    print(f"metrics: {result.metrics_path}")
    print(f"final checkpoint: {result.final_checkpoint}")
    if result.best_checkpoint:
        print(
            f"best checkpoint: {result.best_checkpoint} "
            f"(validation success {result.best_validation:.3f})"
        )
    return EXIT_OK


def cmd_evaluate(args, overrides) -> int:
    from .evaluation import evaluate, format_summary, load_policy

    cfg = build_run_config(_load_mapping(args, overrides))
    policy = load_policy(args.policy, cfg)
    episodes = args.episodes if args.episodes else 1000
    out = Path(cfg.out) if args.out else None
    metrics_path = out / "eval_metrics.csv" if out else None
    trajectory_path = out / "trajectories.csv" if out and args.record else None
    summary = evaluate(
        cfg,
        policy,
        episodes,
        metrics_path=metrics_path,
        trajectory_path=trajectory_path,
        record_episodes=args.record,
        log=lambda msg: print(msg, flush=True),
    )
    print(format_summary(args.policy, summary))
    if metrics_path:
        print(f"metrics: {metrics_path}")
    if trajectory_path:
        print(f"trajectories: {trajectory_path}")
    return EXIT_OK


def cmd_compare(args, overrides) -> int:
    if overrides:
        raise ConfigError(f"compare takes no overrides: {sorted(overrides)}")
    if len(args.metrics) < 2:
        raise ConfigError("compare needs at least two metrics files")
    runs = []
    for path in args.metrics:
        rows, _meta = read_metrics(Path(path))
        runs.append((Path(path).stem, rows))
    lengths = {len(rows) for _name, rows in runs}
    common = min(lengths)
    if len(lengths) > 1:
        print(
            f"warning: episode counts differ {sorted(lengths)}; "
            f"truncating to {common}",
            file=sys.stderr,
        )
    runs = [(name, rows[:common]) for name, rows in runs]

    out = Path(args.out) if args.out else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    series_of = {
        "return": lambda r: r.return_discounted,
        "success": lambda r: 1.0 if r.outcome == "success" else 0.0,
        "navigation_time": lambda r: r.navigation_time,
    }
    finals = {}
    for metric, getter in series_of.items():
        curves = {
            name: smooth([getter(r) for r in rows], args.factor)
            for name, rows in runs
        }
        path = out / f"compare_{metric}.csv"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            names = [name for name, _ in runs]
            fh.write("episode," + ",".join(names) + "\n")
            for i in range(common):
                fh.write(
                    f"{i}," + ",".join(repr(curves[name][i]) for name in names) + "\n"
                )
        finals[metric] = {name: curves[name][-1] for name, _ in runs}
        print(f"wrote {path}")

    header = (
        f"{'run':<24} {'return':>8} {'success':>8} {'nav time':>9} "
        f"{'smoothed success':>17}"
    )
    print(header)
    for name, rows in runs:
        agg = summarize(rows)
        print(
            f"{name:<24} {agg['return_discounted']:>8.4f} "
            f"{agg['success_rate']:>8.3f} {agg['navigation_time']:>9.3f} "
            f"{finals['success'][name]:>17.3f}"
        )
    return EXIT_OK


def cmd_plot(args, overrides) -> int:
    if overrides:
        raise ConfigError(f"plot takes no overrides: {sorted(overrides)}")
    from .plotting import plot_file

    record = Path(args.record_file)
    if not record.exists():
        raise ConfigError(f"trajectory file not found: {record}")
    out = Path(args.out) if args.out else record.with_suffix(".svg")
    written = plot_file(record, out, episode=args.episode)
    print(f"wrote {written}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="crowdnav-explore")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="run a training loop")
    _add_common(p_train)
    p_train.add_argument(
        "--strategy", choices=("epsilon", "noisy", "dropout", "icm", "re3")
    )

    p_eval = sub.add_parser("evaluate", help="evaluate a checkpoint or builtin")
    p_eval.add_argument("policy", help="checkpoint path or orca|stop|straight")
    _add_common(p_eval)
    p_eval.add_argument(
        "--record", type=int, default=0,
        help="export trajectories of the first N episodes",
    )

    p_cmp = sub.add_parser("compare", help="compare training metrics files")
    p_cmp.add_argument("metrics", nargs="+")
    p_cmp.add_argument("--out", help="directory for the smoothed curves")
    p_cmp.add_argument("--factor", type=float, default=0.99)

    p_plot = sub.add_parser("plot", help="render a trajectory file")
    p_plot.add_argument("record_file")
    p_plot.add_argument("--out", help="output vector-graphics file")
    p_plot.add_argument("--episode", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        overrides = _split_overrides(extra)
        handler = {
            "train": cmd_train,
            "evaluate": cmd_evaluate,
            "compare": cmd_compare,
            "plot": cmd_plot,
        }[args.command]
        return handler(args, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
