"""Experiment configuration: one flat record per run, file round-tripping.

Config files are INI-style: each section defines one experiment, keys are
the field names below, and a ``preset`` key pulls defaults from a named
preset before the section's own keys are applied. Goal layouts are written
the way the tables read:

* po    goals = R:3, G:10, B:14
* no    goals = 0, 4, 7, 10, 13
* pono  goals = R:2, G:5; R:8, G:13     (contexts separated by ';')
"""

from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass
from typing import Mapping, Optional

from .agent import ABLATION_MODES, COUNT_MODES, GROWTH_METHODS, THRESHOLD_MODES, AgentConfig
from .mazes import TASK_KINDS, TOPOLOGIES, MazeTask, no_task, po_task, pono_task


class ConfigError(ValueError):
    """A configuration problem detected before any run starts."""


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    task: str
    hrr_length: int
    gamma: float
    alpha_train: float
    episodes: int
    switch_rate: int
    goals: str
    alpha_test: float = 0.01
    epsilon_train: float = 1e-5
    epsilon_test: float = 0.0
    threshold: float = 0.3
    threshold_mode: str = "static"
    trace_lambda: float = 0.0
    atr_alpha: float = 0.0
    threshold_alpha: float = -0.5
    growth_floor: float = -0.5
    atr_count_mode: str = "static"
    atr_count: int = 1
    growth_method: str = "transfer"
    ablation_mode: str = "both"
    max_steps: int = 100
    maze_size: int = 15
    topology: str = "cycle"
    bootstrap_sign: float = 1.0
    update_threshold_on_switch: bool = False
    seeds: tuple[int, ...] = tuple(range(20))
    emit_episodes: bool = False

    def validate(self) -> None:
        if self.task not in TASK_KINDS:
            raise ConfigError(f"unknown task {self.task!r}; expected one of {TASK_KINDS}")
        if self.episodes < 1:
            raise ConfigError("episodes must be >= 1")
        if not self.seeds:
            raise ConfigError("seed list must be non-empty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seed list contains duplicates")
        if self.max_steps < 1:
            raise ConfigError("max_steps must be >= 1")
        if self.topology not in TOPOLOGIES:
            raise ConfigError(f"unknown topology {self.topology!r}")
        try:
            self.agent_config().validate()
            self.build_task()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    # -- derived pieces -------------------------------------------------------

    def agent_config(self) -> AgentConfig:
        return AgentConfig(
            hrr_length=self.hrr_length,
            gamma=self.gamma,
            alpha_train=self.alpha_train,
            alpha_test=self.alpha_test,
            epsilon_train=self.epsilon_train,
            epsilon_test=self.epsilon_test,
            trace_lambda=self.trace_lambda,
            threshold_mode=self.threshold_mode,
            threshold=self.threshold,
            threshold_alpha=self.threshold_alpha,
            growth_floor=self.growth_floor,
            atr_alpha=self.atr_alpha,
            atr_count_mode=self.atr_count_mode,
            atr_count=self.atr_count,
            growth_method=self.growth_method,
            ablation_mode=self.ablation_mode,
            bootstrap_sign=self.bootstrap_sign,
            update_threshold_on_switch=self.update_threshold_on_switch,
        )

    def build_task(self) -> MazeTask:
        if self.task == "po":
            return po_task(
                size=self.maze_size,
                goals=parse_po_goals(self.goals),
                switch_rate=self.switch_rate,
                topology=self.topology,
            )
        if self.task == "no":
            return no_task(
                goals=parse_no_goals(self.goals),
                size=self.maze_size,
                switch_rate=self.switch_rate,
                topology=self.topology,
            )
        return pono_task(
            goal_map=parse_pono_goals(self.goals),
            size=self.maze_size,
            switch_rate=self.switch_rate,
            topology=self.topology,
        )

    def test_window(self) -> int:
        """Length of the final test phase: the last 10% of the episodes."""
        return math.ceil(0.1 * self.episodes)

    def evaluation_budget_per_seed(self) -> int:
        """Upper bound on critic evaluations for one seed.

        Per step: one score of the current input, at most 2 moves x 3 memory
        candidates, one re-score after an exploratory move, and at most one
        score per context for a positive switch. Growth can raise the context
        count, so budget generously against episodes * max_steps.
        """
        per_step = 2 * 3 + 1 + 1 + max(self.atr_count, 16)
        return self.episodes * self.max_steps * per_step

    def manifest_items(self) -> list[tuple[str, str]]:
        items = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name == "seeds":
                value = ",".join(str(s) for s in value)
            items.append((f.name, str(value)))
        return items


# -- goal layout parsing -------------------------------------------------------


def parse_po_goals(text: str) -> dict[str, int]:
    goals: dict[str, int] = {}
    for part in _split(text, ","):
        sig, _, pos = part.partition(":")
        if not _:
            raise ConfigError(f"po goals need 'signal:cell' entries, got {part!r}")
        goals[sig.strip()] = _cell(pos)
    if not goals:
        raise ConfigError("po goals must not be empty")
    return goals


def parse_no_goals(text: str) -> tuple[int, ...]:
    cells = tuple(_cell(part) for part in _split(text, ","))
    if not cells:
        raise ConfigError("no goals must not be empty")
    return cells


def parse_pono_goals(text: str) -> dict[tuple[int, str], int]:
    goal_map: dict[tuple[int, str], int] = {}
    for ctx, group in enumerate(_split(text, ";")):
        for part in _split(group, ","):
            sig, _, pos = part.partition(":")
            if not _:
                raise ConfigError(
                    f"pono goals need 'signal:cell' entries, got {part!r}"
                )
            goal_map[(ctx, sig.strip())] = _cell(pos)
    if len({ctx for ctx, _ in goal_map}) < 2:
        raise ConfigError("pono goals need at least two ';'-separated contexts")
    return goal_map


def format_po_goals(goals: Mapping[str, int]) -> str:
    return ", ".join(f"{sig}:{pos}" for sig, pos in goals.items())


def format_pono_goals(goal_map: Mapping[tuple[int, str], int]) -> str:
    contexts = sorted({ctx for ctx, _ in goal_map})
    groups = []
    for ctx in contexts:
        entries = [(sig, pos) for (c, sig), pos in goal_map.items() if c == ctx]
        groups.append(", ".join(f"{sig}:{pos}" for sig, pos in sorted(entries)))
    return "; ".join(groups)


def _split(text: str, sep: str) -> list[str]:
    return [part.strip() for part in text.split(sep) if part.strip()]


def _cell(text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(f"expected an integer cell index, got {text!r}") from None


# -- config files ---------------------------------------------------------------

_BOOL_FIELDS = {"emit_episodes", "update_threshold_on_switch"}
_INT_FIELDS = {"hrr_length", "episodes", "switch_rate", "atr_count", "max_steps", "maze_size"}
_FLOAT_FIELDS = {
    "gamma", "alpha_train", "alpha_test", "epsilon_train", "epsilon_test",
    "threshold", "trace_lambda", "atr_alpha", "threshold_alpha", "growth_floor",
    "bootstrap_sign",
}


def parse_seed_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in _split(text, ","))
    except ValueError:
        raise ConfigError(f"seeds must be a comma-separated integer list, got {text!r}") from None


def _coerce(key: str, raw: str):
    if key in _BOOL_FIELDS:
        lowered = raw.strip().lower()
        if lowered in ("true", "yes", "1", "on"):
            return True
        if lowered in ("false", "no", "0", "off"):
            return False
        raise ConfigError(f"{key} must be a boolean, got {raw!r}")
    if key in _INT_FIELDS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {raw!r}") from None
    if key in _FLOAT_FIELDS:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{key} must be a number, got {raw!r}") from None
    if key == "seeds":
        return parse_seed_list(raw)
    return raw.strip()


def experiment_from_mapping(
    name: str,
    mapping: Mapping[str, str],
    presets: Mapping[str, "ExperimentConfig"] | None = None,
) -> ExperimentConfig:
    """Build a config from string key/values, optionally on top of a preset."""
    field_names = {f.name for f in dataclasses.fields(ExperimentConfig)}
    base: Optional[ExperimentConfig] = None
    overrides: dict[str, object] = {}
    for key, raw in mapping.items():
        if key == "preset":
            if presets is None or raw.strip() not in presets:
                raise ConfigError(f"unknown preset {raw.strip()!r}")
            base = presets[raw.strip()]
            continue
        if key not in field_names or key == "name":
            raise ConfigError(f"unknown config key {key!r}")
        overrides[key] = _coerce(key, raw)
    if base is not None:
        config = dataclasses.replace(base, name=name, **overrides)
    else:
        missing = {"task", "hrr_length", "gamma", "alpha_train", "episodes",
                   "switch_rate", "goals"} - set(overrides)
        if missing:
            raise ConfigError(
                f"section [{name}] is missing required keys: {sorted(missing)} "
                "(or use 'preset = <name>')"
            )
        config = ExperimentConfig(name=name, **overrides)  # type: ignore[arg-type]
    config.validate()
    return config


def load_config_file(
    path: str,
    presets: Mapping[str, "ExperimentConfig"] | None = None,
) -> list[ExperimentConfig]:
    """Read every experiment section of an INI-style config file."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    configs = []
    for section in parser.sections():
        configs.append(experiment_from_mapping(section, dict(parser[section]), presets))
    if not configs:
        raise ConfigError(f"config file {path} defines no experiment sections")
    return configs


def load_grid_file(path: str) -> dict[str, list]:
    """Read a [grid] section mapping field names to comma-separated values."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"grid file not found: {path}")
    if "grid" not in parser:
        raise ConfigError(f"grid file {path} needs a [grid] section")
    grid: dict[str, list] = {}
    for key, raw in parser["grid"].items():
        values = [_coerce(key, part) for part in _split(raw, ",")]
        if not values:
            raise ConfigError(f"grid key {key!r} lists no values")
        grid[key] = values
    if not grid:
        raise ConfigError("grid must not be empty")
    return grid
