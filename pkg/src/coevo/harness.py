"""Experiment orchestration: seeded replicate grids, CSV reporting,
budget comparison, and the intransitivity search.

Replicate seeds derive deterministically from the base seed via seed
sequences, so a repeated experiment is byte-identical. Wall-clock timings
are measured but stay out of the canonical CSV unless explicitly
requested, since they can never replay byte-for-byte.
"""

from __future__ import annotations

import io
import json
import time
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from . import eda, grundy, switchability
from .games import GameSpec, nim_encode
from .graphs import GameGraph, Strategy, enumerate_strategies, play, strategy_space_size
from .ioutil import atomic_write_text

CSV_COLUMNS = [
    "family",
    "params",
    "n",
    "delta",
    "s_bar",
    "s_mode",
    "mu",
    "gamma",
    "seed",
    "replicate",
    "generations",
    "evaluations",
    "success",
    "theorem_eval_budget",
]


@dataclass(frozen=True)
class ExperimentConfig:
    game: GameSpec
    mu_grid: tuple[int, ...]
    gamma_rule: float | str = "theorem"  # "theorem" or a fixed border value
    replicates: int = 1
    base_seed: int = 0
    max_generations: int = 10_000
    stop_rule: str = "exact_optimal"
    switch_mode: str = "hybrid"
    switch_edge_limit: int = 20
    theorem_c: float = 1.0
    theorem_k: float = 1.0

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        if not self.mu_grid or list(self.mu_grid) != sorted(self.mu_grid):
            raise ValueError("mu_grid must be non-empty and ascending")


@dataclass(frozen=True)
class ExperimentRecord:
    family: str
    params: str
    n: int
    delta: int
    s_bar: int
    s_mode: str
    mu: int
    gamma: float
    seed: int
    replicate: int
    generations: int
    evaluations: int
    success: int
    theorem_eval_budget: float
    wall_ms: float


def _derive_seed(base_seed: int, *path: int) -> int:
    ss = np.random.SeedSequence((base_seed, *path))
    return int(ss.generate_state(1, np.uint64)[0])


def run_experiment(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """One game instance across the whole mu grid and every replicate.

    The game is built once; a second-player-win instance gets the forced
    start vertex before running. The reported ``n`` and ``delta`` columns
    describe the instance as parameterised (before that normalisation),
    and the theorem border rule uses those same values.
    """
    base_game = cfg.game.build()
    run_game = grundy.ensure_first_player_win(base_game)
    gd = grundy.grundy_values(run_game)
    profile = switchability.switchability_profile(
        run_game, mode=cfg.switch_mode, edge_limit=cfg.switch_edge_limit, gd=gd
    )

    if cfg.gamma_rule == "theorem":
        gamma = 1.0 / (20 * base_game.max_degree * base_game.n)
    else:
        gamma = float(cfg.gamma_rule)

    s_values = {v: r.value for v, r in profile.reports.items()}
    budget = eda.theorem_parameters(
        run_game, gd, s_values, K=cfg.theorem_k, C=cfg.theorem_c
    )

    records = []
    for mu_index, mu in enumerate(cfg.mu_grid):
        for replicate in range(cfg.replicates):
            seed = _derive_seed(cfg.base_seed, mu_index, replicate)
            run_cfg = eda.UmdaConfig(
                mu=mu,
                gamma=gamma,
                max_generations=cfg.max_generations,
                seed=seed,
                stop_rule=cfg.stop_rule,
            )
            started = time.perf_counter()
            result = eda.run_umda(run_game, run_cfg)
            wall_ms = (time.perf_counter() - started) * 1e3
            records.append(
                ExperimentRecord(
                    family=cfg.game.family,
                    params=cfg.game.params_string(),
                    n=base_game.n,
                    delta=base_game.max_degree,
                    s_bar=profile.s_bar,
                    s_mode=profile.mode_used,
                    mu=mu,
                    gamma=gamma,
                    seed=seed,
                    replicate=replicate,
                    generations=result.generations_used,
                    evaluations=result.evaluations,
                    success=int(result.succeeded),
                    theorem_eval_budget=budget.eval_budget,
                    wall_ms=wall_ms,
                )
            )
    return records


def records_to_csv(records: Iterable[ExperimentRecord], include_timings: bool = False) -> str:
    columns = CSV_COLUMNS + (["wall_ms"] if include_timings else [])
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for rec in records:
        row = [str(getattr(rec, col)) for col in columns]
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def write_records(path, records: Iterable[ExperimentRecord], include_timings: bool = False) -> None:
    atomic_write_text(path, records_to_csv(records, include_timings=include_timings))


def records_from_csv(text: str) -> list[ExperimentRecord]:
    lines = text.strip().splitlines()
    columns = lines[0].split(",")
    casts = {
        "family": str,
        "params": str,
        "s_mode": str,
        "gamma": float,
        "theorem_eval_budget": float,
        "wall_ms": float,
    }
    records = []
    for line in lines[1:]:
        values = line.split(",")
        kwargs = {
            col: casts.get(col, int)(raw) for col, raw in zip(columns, values)
        }
        kwargs.setdefault("wall_ms", 0.0)
        records.append(ExperimentRecord(**kwargs))
    return records


@dataclass
class SweepSummary:
    records: list[ExperimentRecord]
    plot: dict


def sweep_scaling(
    family: str,
    param_grid: Sequence[dict],
    cfg_template: ExperimentConfig,
) -> SweepSummary:
    """Run one experiment per instance and summarise scaling against n.

    The plot description carries one series of median evaluations per
    population size (failed replicates count at their capped cost) plus
    the theorem-shaped evaluation budget curve, on log-log axes.
    """
    all_records: list[ExperimentRecord] = []
    for instance_index, params in enumerate(param_grid):
        spec = GameSpec(family=family, params=dict(params))
        cfg = replace(
            cfg_template,
            game=spec,
            base_seed=_derive_seed(cfg_template.base_seed, instance_index),
        )
        all_records.extend(run_experiment(cfg))

    series = []
    for mu in cfg_template.mu_grid:
        xs, ys = [], []
        for params in param_grid:
            spec = GameSpec(family=family, params=dict(params))
            rows = [
                r
                for r in all_records
                if r.mu == mu and r.params == spec.params_string()
            ]
            if rows:
                xs.append(rows[0].n)
                ys.append(float(np.median([r.evaluations for r in rows])))
        series.append({"name": f"median-evaluations-mu{mu}", "x": xs, "y": ys})

    xs, ys = [], []
    for params in param_grid:
        spec = GameSpec(family=family, params=dict(params))
        rows = [r for r in all_records if r.params == spec.params_string()]
        if rows:
            xs.append(rows[0].n)
            ys.append(rows[0].theorem_eval_budget)
    series.append({"name": "theorem-budget", "x": xs, "y": ys})

    plot = {
        "series": series,
        "xlabel": "n",
        "ylabel": "evaluations",
        "xscale": "log",
        "yscale": "log",
    }
    return SweepSummary(records=all_records, plot=plot)


def write_sweep(out_dir, summary: SweepSummary, include_timings: bool = False) -> tuple[str, str]:
    from pathlib import Path

    out = Path(out_dir)
    csv_path = out / "records.csv"
    plot_path = out / "plot.json"
    write_records(csv_path, summary.records, include_timings=include_timings)
    atomic_write_text(plot_path, json.dumps(summary.plot, indent=2, sort_keys=True) + "\n")
    return str(csv_path), str(plot_path)


# ---------------------------------------------------------------------------
# Intransitivity.

def _beats_both_orders(g: GameGraph, a: Strategy, b: Strategy) -> bool:
    return play(g, a, b).winner == 1 and play(g, b, a).winner == -1


def intransitivity_search(
    g: GameGraph,
    triples: int = 1000,
    rng: np.random.Generator | None = None,
    exhaustive: bool | None = None,
) -> tuple[Strategy, Strategy, Strategy] | None:
    """Find strategies a, b, c with a > b > c > a, each dominance meaning
    a win both as first and as second mover.

    Exhaustive over the whole strategy space when it has at most 64
    members (or when forced); otherwise samples random triples from the
    uniform model.
    """
    size = strategy_space_size(g)
    if exhaustive is None:
        exhaustive = size <= 64

    if exhaustive:
        strategies = list(enumerate_strategies(g))
        m = len(strategies)
        beats = [[False] * m for _ in range(m)]
        for i in range(m):
            for j in range(m):
                if i != j:
                    beats[i][j] = _beats_both_orders(g, strategies[i], strategies[j])
        for i in range(m):
            for j in range(m):
                if not beats[i][j]:
                    continue
                for k in range(m):
                    if beats[j][k] and beats[k][i]:
                        return strategies[i], strategies[j], strategies[k]
        return None

    if rng is None:
        rng = np.random.default_rng(0)
    model = eda.uniform_model(g, gamma=0.0)
    for _ in range(triples):
        a = eda.sample_strategy(model, rng)
        b = eda.sample_strategy(model, rng)
        c = eda.sample_strategy(model, rng)
        if (
            _beats_both_orders(g, a, b)
            and _beats_both_orders(g, b, c)
            and _beats_both_orders(g, c, a)
        ):
            return a, b, c
    return None


def describe_intransitivity_witness(
    g: GameGraph, witness, nim_params: tuple[int, int] | None = None
) -> dict:
    if witness is None:
        return {"found": False, "strategies": None}
    payload: dict = {
        "found": True,
        "strategies": [
            {str(v): w for v, w in x.choice.items()} for x in witness
        ],
    }
    if nim_params is not None:
        n, k = nim_params
        payload["nim_strings"] = [nim_encode(x, n, k) for x in witness]
    return payload
