"""One-dimensional maze task families with hidden context schedules.

Three flavors of the same cyclic (or bounded) array of cells:

* ``po``   - one context, a per-episode signal shown only on the first step
             tells the agent which goal pays off.
* ``no``   - no signals at all; the active goal is picked by a hidden context
             that rotates every ``switch_rate`` episodes.
* ``pono`` - both: transient signals whose meaning depends on the hidden
             context.

Rewards are -1 for entering any non-goal cell and 0 for entering the goal,
which also ends the episode. The agent is never told the context.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

TASK_KINDS = ("po", "no", "pono")
TOPOLOGIES = ("cycle", "line")


@dataclass(frozen=True)
class MazeTask:
    """Immutable task definition; freely shareable between runs.

    ``goal_map`` maps (context, signal) to a goal cell. NO tasks use None in
    the signal slot.
    """

    kind: str
    size: int
    signals: tuple[str, ...]
    contexts: int
    goal_map: Mapping[tuple[int, Optional[str]], int] = field(repr=False)
    switch_rate: int = 500
    topology: str = "cycle"

    def __post_init__(self):
        if self.kind not in TASK_KINDS:
            raise ValueError(f"unknown task kind {self.kind!r}")
        if self.topology not in TOPOLOGIES:
            raise ValueError(f"unknown topology {self.topology!r}")
        if self.size < 2:
            raise ValueError("maze size must be >= 2")
        if self.switch_rate < 1:
            raise ValueError("switch_rate must be >= 1")
        if self.contexts < 1:
            raise ValueError("contexts must be >= 1")
        if self.kind == "po" and (self.contexts != 1 or not self.signals):
            raise ValueError("po tasks need exactly one context and >= 1 signal")
        if self.kind == "no" and self.signals:
            raise ValueError("no tasks carry no signals")
        if self.kind == "pono" and (self.contexts < 2 or not self.signals):
            raise ValueError("pono tasks need >= 2 contexts and >= 1 signal")
        for (ctx, sig), goal in self.goal_map.items():
            if not 0 <= goal < self.size:
                raise ValueError(f"goal {goal} outside [0, {self.size})")
            if not 0 <= ctx < self.contexts:
                raise ValueError(f"context {ctx} outside [0, {self.contexts})")
            if sig is not None and sig not in self.signals:
                raise ValueError(f"unknown signal {sig!r} in goal map")

    def neighbors(self, position: int) -> list[int]:
        """Candidate cells one move away, in fixed (left, right) order."""
        if not 0 <= position < self.size:
            raise ValueError(f"position {position} outside [0, {self.size})")
        if self.topology == "cycle":
            return [(position - 1) % self.size, (position + 1) % self.size]
        return [p for p in (position - 1, position + 1) if 0 <= p < self.size]

    def goal_cells(self) -> frozenset[int]:
        """Every cell that pays under some (context, signal)."""
        return frozenset(self.goal_map.values())

    def goal_for(self, context: int, signal: Optional[str]) -> int:
        try:
            return self.goal_map[(context, signal)]
        except KeyError:
            raise ValueError(
                f"no goal defined for context={context}, signal={signal!r}"
            ) from None

    def context_at(self, episode_index: int) -> int:
        """Hidden context schedule: a pure function of the episode index."""
        return (episode_index // self.switch_rate) % self.contexts

    def optimal_steps(self, start: int, context: int, signal: Optional[str]) -> int:
        """Shortest number of moves from ``start`` to the active goal."""
        goal = self.goal_for(context, signal)
        if self.topology == "cycle":
            d = (start - goal) % self.size
            return min(d, self.size - d)
        return abs(start - goal)


def po_task(
    size: int = 15,
    goals: Mapping[str, int] | None = None,
    switch_rate: int = 500,
    topology: str = "cycle",
) -> MazeTask:
    """Single-context task with first-step signals naming the goal."""
    goals = dict(goals) if goals is not None else {"R": 3, "G": 10, "B": 14}
    return MazeTask(
        kind="po",
        size=size,
        signals=tuple(goals),
        contexts=1,
        goal_map={(0, sig): pos for sig, pos in goals.items()},
        switch_rate=switch_rate,
        topology=topology,
    )


def no_task(
    goals: tuple[int, ...] = (0, 4, 7, 10, 13),
    size: int = 15,
    switch_rate: int = 500,
    topology: str = "cycle",
) -> MazeTask:
    """Signal-free task; one hidden context per goal."""
    return MazeTask(
        kind="no",
        size=size,
        signals=(),
        contexts=len(goals),
        goal_map={(i, None): pos for i, pos in enumerate(goals)},
        switch_rate=switch_rate,
        topology=topology,
    )


def pono_task(
    goal_map: Mapping[tuple[int, str], int] | None = None,
    size: int = 15,
    switch_rate: int = 1000,
    topology: str = "cycle",
) -> MazeTask:
    """Signals whose meaning flips with the hidden context."""
    if goal_map is None:
        goal_map = {(0, "R"): 2, (0, "G"): 5, (1, "R"): 8, (1, "G"): 13}
    contexts = max(ctx for ctx, _ in goal_map) + 1
    signals = tuple(sorted({sig for _, sig in goal_map}))
    return MazeTask(
        kind="pono",
        size=size,
        signals=signals,
        contexts=contexts,
        goal_map=dict(goal_map),
        switch_rate=switch_rate,
        topology=topology,
    )


class MazeEnv:
    """Mutable episode state over an immutable task. One env per agent.

    The env owns its RNG stream and its episode counter; ``reset()`` spawns
    the agent uniformly, draws the episode's signal (if any), and advances
    the hidden context schedule. The signal is exposed only through the reset
    observation, never again during the episode.
    """

    def __init__(self, task: MazeTask, max_steps: int, rng: np.random.Generator):
        if max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        self.task = task
        self.max_steps = max_steps
        self.rng = rng
        self.episode_index = -1
        self.position = 0
        self.step_count = 0
        self.signal: Optional[str] = None
        self.context = 0

    def reset(self) -> tuple[int, Optional[str]]:
        """Start the next episode; returns (position, signal) as observed."""
        self.episode_index += 1
        self.context = self.task.context_at(self.episode_index)
        self.position = int(self.rng.integers(self.task.size))
        if self.task.signals:
            self.signal = self.task.signals[int(self.rng.integers(len(self.task.signals)))]
        else:
            self.signal = None
        self.step_count = 0
        return self.position, self.signal

    @property
    def goal(self) -> int:
        return self.task.goal_for(self.context, self.signal)

    def at_goal(self) -> bool:
        return self.position == self.goal

    def step(self, move: int) -> tuple[float, bool, bool]:
        """Move to an adjacent cell; returns (reward, goal_token, done)."""
        if move not in self.task.neighbors(self.position):
            raise ValueError(
                f"illegal move {move} from position {self.position}"
            )
        self.position = move
        self.step_count += 1
        if self.position == self.goal:
            return 0.0, True, True
        return -1.0, False, self.step_count >= self.max_steps
