"""Command-line front end.

Subcommands::

    holorl run     --config FILE [--seeds a,b,c] [--parallel K] [--out DIR]
    holorl ablate  --config FILE [--seeds a,b,c] [--parallel K] [--out DIR]
    holorl sweep   --config FILE --grid FILE [--parallel K] [--out DIR]
    holorl presets list

Exit codes: 0 success, 1 configuration error, 2 runtime error. The default
output directory comes from $HOLORL_OUT, falling back to ./results.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from .config import ConfigError, load_config_file, load_grid_file, parse_seed_list
from .harness import emit_results, run_ablation_suite, run_experiment, sweep
from .presets import PRESETS

OUT_ENV_VAR = "HOLORL_OUT"


def _default_out() -> str:
    return os.environ.get(OUT_ENV_VAR, "results")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holorl",
        description="Run maze experiments for the holographic working-memory agent.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="INI experiment file")
        p.add_argument("--seeds", help="comma-separated seed override")
        p.add_argument("--parallel", type=int, default=1, help="worker count")
        p.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV_VAR} or ./results)")

    run_p = sub.add_parser("run", help="run every experiment section of a config file")
    add_common(run_p)

    ablate_p = sub.add_parser("ablate", help="run the four switching modes of a pono config")
    add_common(ablate_p)

    sweep_p = sub.add_parser("sweep", help="rank grid points by mean accuracy")
    add_common(sweep_p)
    sweep_p.add_argument("--grid", required=True, help="INI file with a [grid] section")

    presets_p = sub.add_parser("presets", help="preset utilities")
    presets_p.add_argument("action", choices=["list"])
    return parser


def _load_configs(args):
    configs = load_config_file(args.config, PRESETS)
    if args.seeds:
        seeds = parse_seed_list(args.seeds)
        configs = [dataclasses.replace(c, seeds=seeds) for c in configs]
        for c in configs:
            c.validate()
    return configs


def _cmd_run(args) -> int:
    configs = _load_configs(args)
    out = args.out or _default_out()
    runs = []
    for config in configs:
        results = run_experiment(config, args.parallel)
        runs.append((config, results))
    paths = emit_results(runs, out)
    for config, results in runs:
        from .harness import accuracies
        accs = accuracies(results, config)
        print(f"{config.name}: {len(results)} seeds, mean accuracy {sum(accs)/len(accs):.4f}")
    print(f"wrote {paths['summary']}")
    return 0


def _cmd_ablate(args) -> int:
    configs = _load_configs(args)
    if len(configs) != 1:
        raise ConfigError("ablate expects a config file with exactly one section")
    out = args.out or _default_out()
    table = run_ablation_suite(configs[0], args.parallel)
    runs = []
    for mode, mean_acc, results in table:
        variant = dataclasses.replace(
            configs[0], name=f"{configs[0].name}_{mode}", ablation_mode=mode
        )
        runs.append((variant, results))
        print(f"{mode}: mean accuracy {mean_acc:.4f}")
    emit_results(runs, out)
    ablation_path = os.path.join(out, "ablation.csv")
    with open(ablation_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("ablation_mode,mean_accuracy\n")
        for mode, mean_acc, _ in table:
            fh.write(f"{mode},{mean_acc}\n")
    print(f"wrote {ablation_path}")
    return 0


def _cmd_sweep(args) -> int:
    configs = _load_configs(args)
    if len(configs) != 1:
        raise ConfigError("sweep expects a config file with exactly one section")
    grid = load_grid_file(args.grid)
    out = args.out or _default_out()
    ranked = sweep(configs[0], grid, args.parallel)
    runs = []
    for i, (point, mean_acc, results) in enumerate(ranked):
        variant = dataclasses.replace(
            configs[0], name=f"{configs[0].name}_rank{i}", **point
        )
        runs.append((variant, results))
        print(f"#{i + 1} {point}: mean accuracy {mean_acc:.4f}")
    emit_results(runs, out)
    ranking_path = os.path.join(out, "sweep.csv")
    with open(ranking_path, "w", encoding="utf-8", newline="\n") as fh:
        keys = sorted({k for point, _, _ in ranked for k in point})
        fh.write(",".join(keys + ["mean_accuracy"]) + "\n")
        for point, mean_acc, _ in ranked:
            fh.write(",".join(str(point[k]) for k in keys) + f",{mean_acc}\n")
    print(f"wrote {ranking_path}")
    return 0


def _cmd_presets(args) -> int:
    for name in sorted(PRESETS):
        cfg = PRESETS[name]
        print(
            f"{name}: task={cfg.task} n={cfg.hrr_length} episodes={cfg.episodes} "
            f"threshold={cfg.threshold_mode} seeds={len(cfg.seeds)}"
        )
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "ablate": _cmd_ablate,
        "sweep": _cmd_sweep,
        "presets": _cmd_presets,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console()
