"""Multi-seed execution, accuracy, ablations, sweeps, and result emission.

Each seed gets its own agent, environment, and RNG streams, so results are
bit-identical for a fixed seed no matter how many workers run them or in
which order. An episode counts as accurate when its step count equals the
shortest-path distance from the spawn cell; accuracy is the fraction of
accurate episodes over the final 10% (the test phase, run with the test
learning rate and exploration).

Outputs per run directory:

* ``summary.csv``   one row per (config, seed):
  ``seed,task,method,threshold_mode,ablation_mode,accuracy,episodes,growth_events``
* ``episodes.csv``  optional per-episode rows:
  ``seed,episode,context,signal,start,steps,optimal,switched``
* ``manifest.txt``  the fully resolved configuration, evaluation counters,
  and accuracy summaries, in a stable human-readable layout.
"""

from __future__ import annotations

import dataclasses
import itertools
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .agent import EpisodeRecord, GrowthEvent, HrrAgent
from .config import ConfigError, ExperimentConfig
from .mazes import MazeEnv

SUMMARY_HEADER = "seed,task,method,threshold_mode,ablation_mode,accuracy,episodes,growth_events"
EPISODES_HEADER = "seed,episode,context,signal,start,steps,optimal,switched"

ABLATION_ORDER = ("both", "none", "positive_only", "negative_only")


@dataclass
class RunResult:
    seed: int
    episodes: list[EpisodeRecord]
    eval_count: int
    growth_events: list[GrowthEvent] = field(default_factory=list)


def train_single(config: ExperimentConfig, seed: int) -> tuple[HrrAgent, RunResult]:
    """Run one seed and hand back the trained agent with its result."""
    agent_rng = np.random.default_rng([seed, 0])
    env_rng = np.random.default_rng([seed, 1])
    agent = HrrAgent(config.agent_config(), agent_rng)
    env = MazeEnv(config.build_task(), config.max_steps, env_rng)
    test_start = config.episodes - config.test_window()
    records = []
    for episode in range(config.episodes):
        mode = "train" if episode < test_start else "test"
        records.append(agent.run_episode(env, mode))
    return agent, RunResult(
        seed=seed,
        episodes=records,
        eval_count=agent.eval_count,
        growth_events=list(agent.growth_events),
    )


def _run_seed(args: tuple[ExperimentConfig, int]) -> RunResult:
    config, seed = args
    return train_single(config, seed)[1]


def run_experiment(config: ExperimentConfig, parallel: int = 1) -> list[RunResult]:
    """One independent run per seed; the worker count never changes values."""
    config.validate()
    jobs = [(config, seed) for seed in config.seeds]
    if parallel <= 1 or len(jobs) == 1:
        return [_run_seed(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=parallel) as pool:
        return list(pool.map(_run_seed, jobs))


def compute_accuracy(result: RunResult, config: ExperimentConfig) -> float:
    """Fraction of the final test-phase episodes solved in the optimal number
    of steps. Episodes right after a hidden context switch count too."""
    window = config.test_window()
    tail = result.episodes[-window:]
    return sum(1 for r in tail if r.steps == r.optimal) / len(tail)


def accuracies(results: list[RunResult], config: ExperimentConfig) -> list[float]:
    return [compute_accuracy(r, config) for r in results]


def run_ablation_suite(
    config: ExperimentConfig, parallel: int = 1
) -> list[tuple[str, float, list[RunResult]]]:
    """Re-run the config under every switching mode, all else equal."""
    if config.task != "pono":
        raise ConfigError("the ablation suite expects a pono config")
    table = []
    for mode in ABLATION_ORDER:
        variant = dataclasses.replace(
            config, name=f"{config.name}_{mode}", ablation_mode=mode
        )
        results = run_experiment(variant, parallel)
        mean_acc = statistics.fmean(accuracies(results, variant))
        table.append((mode, mean_acc, results))
    return table


def sweep(
    config: ExperimentConfig,
    grid: dict[str, list],
    parallel: int = 1,
) -> list[tuple[dict, float, list[RunResult]]]:
    """Evaluate every grid point and rank by mean accuracy, best first."""
    if not grid:
        raise ConfigError("grid must not be empty")
    keys = sorted(grid)
    points = [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]
    scored = []
    for i, point in enumerate(points):
        variant = dataclasses.replace(config, name=f"{config.name}_grid{i}", **point)
        variant.validate()
        results = run_experiment(variant, parallel)
        mean_acc = statistics.fmean(accuracies(results, variant))
        scored.append((point, mean_acc, results))
    scored.sort(key=lambda item: -item[1])
    return scored


# -- emission --------------------------------------------------------------------


def summary_rows(config: ExperimentConfig, results: list[RunResult]) -> list[str]:
    rows = []
    for result in results:
        acc = compute_accuracy(result, config)
        rows.append(
            f"{result.seed},{config.task},{config.growth_method},"
            f"{config.threshold_mode},{config.ablation_mode},{acc},"
            f"{config.episodes},{len(result.growth_events)}"
        )
    return rows


def episode_rows(config: ExperimentConfig, results: list[RunResult]) -> list[str]:
    rows = []
    for result in results:
        for i, rec in enumerate(result.episodes):
            signal = rec.signal if rec.signal is not None else ""
            rows.append(
                f"{result.seed},{i},{rec.context},{signal},{rec.start},"
                f"{rec.steps},{rec.optimal},{len(rec.switches)}"
            )
    return rows


def _manifest_text(runs: list[tuple[ExperimentConfig, list[RunResult]]]) -> str:
    lines = ["run manifest", "============", ""]
    for config, results in runs:
        lines.append(f"[experiment {config.name}]")
        for key, value in config.manifest_items():
            lines.append(f"{key} = {value}")
        accs = accuracies(results, config)
        lines.append(f"accuracy_mean = {statistics.fmean(accs)}")
        lines.append(f"accuracy_median = {statistics.median(accs)}")
        lines.append(
            f"evaluation_budget_per_seed = {config.evaluation_budget_per_seed()}"
        )
        for result in results:
            lines.append(
                f"seed {result.seed}: evaluations = {result.eval_count}, "
                f"accuracy = {compute_accuracy(result, config)}, "
                f"growth_events = {len(result.growth_events)}"
            )
        lines.append("")
    return "\n".join(lines)


def emit_results(
    runs: list[tuple[ExperimentConfig, list[RunResult]]],
    out_dir: str,
) -> dict[str, str]:
    """Write summary.csv, manifest.txt, and episodes.csv when requested.

    Emission is a pure function of the results: identical runs produce
    byte-identical files.
    """
    if not runs:
        raise ValueError("nothing to emit")
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir!r}: {exc}") from exc

    paths = {}
    summary_path = os.path.join(out_dir, "summary.csv")
    lines = [SUMMARY_HEADER]
    for config, results in runs:
        lines.extend(summary_rows(config, results))
    _write(summary_path, lines)
    paths["summary"] = summary_path

    if any(config.emit_episodes for config, _ in runs):
        episodes_path = os.path.join(out_dir, "episodes.csv")
        ep_lines = [EPISODES_HEADER]
        for config, results in runs:
            if config.emit_episodes:
                ep_lines.extend(episode_rows(config, results))
        _write(episodes_path, ep_lines)
        paths["episodes"] = episodes_path

    manifest_path = os.path.join(out_dir, "manifest.txt")
    _write(manifest_path, [_manifest_text(runs)])
    paths["manifest"] = manifest_path
    return paths


def _write(path: str, lines: list[str]) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines))
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write {path!r}: {exc}") from exc
