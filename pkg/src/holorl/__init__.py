"""TD learning over holographic compound representations.

A linear critic scores compounds built by circular convolution from state,
signal, working-memory, and task-context symbols. Transient signals survive
through a gated working-memory slot, hidden task changes are tracked by
switching context symbols on large TD errors, and the representation space
can grow (with or without transferring the learned values) when no existing
context fits.
"""

from .agent import AgentConfig, AtrBank, EpisodeRecord, GrowthEvent, HrrAgent
from .config import ConfigError, ExperimentConfig
from .critic import EligibilityTrace, ValueNetwork, logmod, td_error
from .harness import (
    RunResult,
    compute_accuracy,
    emit_results,
    run_ablation_suite,
    run_experiment,
    sweep,
    train_single,
)
from .hrr import (
    DimensionError,
    SymbolLedger,
    convolve,
    dot,
    grow_dimension,
    identity_hrr,
    random_hrr,
    stack_and_solve,
)
from .mazes import MazeEnv, MazeTask, no_task, po_task, pono_task
from .presets import PRESETS, get_preset

__version__ = "0.1.0"

__all__ = [
    "AgentConfig",
    "AtrBank",
    "ConfigError",
    "DimensionError",
    "EligibilityTrace",
    "EpisodeRecord",
    "ExperimentConfig",
    "GrowthEvent",
    "HrrAgent",
    "MazeEnv",
    "MazeTask",
    "PRESETS",
    "RunResult",
    "SymbolLedger",
    "ValueNetwork",
    "compute_accuracy",
    "convolve",
    "dot",
    "emit_results",
    "get_preset",
    "grow_dimension",
    "identity_hrr",
    "logmod",
    "no_task",
    "po_task",
    "pono_task",
    "random_hrr",
    "run_ablation_suite",
    "run_experiment",
    "stack_and_solve",
    "sweep",
    "td_error",
    "train_single",
]
