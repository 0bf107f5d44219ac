"""Named experiment presets.

The ``*_full`` presets carry the published-scale parameterization of each
task family (vector lengths in the tens of thousands, 100k episodes, 100
seeds); they are cluster workloads. Every full preset has a ``*_desk``
sibling with the vector length divided by 4, episodes divided by 10, and 20
seeds, which is what the acceptance suite runs on a single desktop core.

PO presets disable error switching outright: with a single context there is
nothing to switch to, and the score/threshold machinery is parameterized off
in the published tables.
"""

from __future__ import annotations

import dataclasses

from .config import ExperimentConfig

FULL_SEEDS = tuple(range(100))
DESK_SEEDS = tuple(range(20))

PO_GOALS = "R:3, G:10, B:14"
NO_GOALS = "0, 4, 7, 10, 13"
NO_GOALS_THREE = "0, 5, 10"
PONO_GOALS = "R:2, G:5; R:8, G:13"


def _desk(config: ExperimentConfig, name: str) -> ExperimentConfig:
    return dataclasses.replace(
        config,
        name=name,
        hrr_length=config.hrr_length // 4,
        episodes=config.episodes // 10,
        seeds=DESK_SEEDS,
    )


def _build() -> dict[str, ExperimentConfig]:
    po_static = ExperimentConfig(
        name="po_full",
        task="po",
        hrr_length=10240,
        gamma=0.9,
        alpha_train=0.3,
        episodes=100_000,
        switch_rate=500,
        goals=PO_GOALS,
        trace_lambda=0.0,
        threshold=0.3,
        threshold_mode="static",
        atr_alpha=0.0,
        atr_count=1,
        atr_count_mode="static",
        ablation_mode="none",
        seeds=FULL_SEEDS,
    )
    po_dynamic = dataclasses.replace(
        po_static,
        name="po_dynamic_full",
        hrr_length=15360,
        threshold_mode="dynamic",
    )
    no_static = ExperimentConfig(
        name="no_full",
        task="no",
        hrr_length=6144,
        gamma=0.7,
        alpha_train=0.1,
        episodes=100_000,
        switch_rate=500,
        goals=NO_GOALS,
        trace_lambda=0.0,
        threshold=0.3,
        threshold_mode="static",
        atr_alpha=0.00065,
        atr_count=5,
        atr_count_mode="static",
        ablation_mode="both",
        seeds=FULL_SEEDS,
    )
    no_dynamic = dataclasses.replace(
        no_static,
        name="no_dynamic_full",
        hrr_length=7168,
        threshold_mode="dynamic",
        atr_alpha=0.00063,
        atr_count_mode="dynamic",
        atr_count=1,
    )
    pono_static = ExperimentConfig(
        name="pono_full",
        task="pono",
        hrr_length=25600,
        gamma=0.7,
        alpha_train=0.1,
        episodes=100_000,
        switch_rate=1000,
        goals=PONO_GOALS,
        trace_lambda=0.01,
        threshold=0.3,
        threshold_mode="static",
        atr_alpha=0.00011,
        atr_count=2,
        atr_count_mode="static",
        ablation_mode="both",
        seeds=FULL_SEEDS,
    )
    pono_static_tuned = dataclasses.replace(
        pono_static, name="pono_tuned_full", switch_rate=2000
    )
    pono_dynamic = dataclasses.replace(
        pono_static,
        name="pono_dynamic_full",
        threshold_mode="dynamic",
        atr_count_mode="dynamic",
        atr_count=1,
    )
    pono_dynamic_tuned = dataclasses.replace(
        pono_dynamic,
        name="pono_dynamic_tuned_full",
        switch_rate=2000,
        atr_alpha=0.000105,
        trace_lambda=0.05,
    )
    # Sanity-scale single-goal task: no signals, no switching, one context.
    td_sanity = ExperimentConfig(
        name="td_sanity",
        task="no",
        hrr_length=1024,
        gamma=0.7,
        alpha_train=0.1,
        episodes=5000,
        switch_rate=5000,
        goals="7",
        trace_lambda=0.0,
        threshold=0.3,
        threshold_mode="static",
        atr_alpha=0.0,
        atr_count=1,
        atr_count_mode="static",
        ablation_mode="none",
        seeds=(0,),
    )

    presets = {}
    for cfg in (
        po_static, po_dynamic, no_static, no_dynamic,
        pono_static, pono_static_tuned, pono_dynamic, pono_dynamic_tuned,
    ):
        presets[cfg.name] = cfg
        desk_name = cfg.name.replace("_full", "_desk")
        presets[desk_name] = _desk(cfg, desk_name)
    presets["no_three_goal_desk"] = dataclasses.replace(
        presets["no_desk"], name="no_three_goal_desk", goals=NO_GOALS_THREE, atr_count=3
    )
    presets["td_sanity"] = td_sanity
    return presets


PRESETS: dict[str, ExperimentConfig] = _build()


def get_preset(name: str) -> ExperimentConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
