"""Multi-valued UMDA with binary tournament selection.

The model holds one categorical distribution per interior vertex, indexed
by canonical successor order. Each generation samples ``mu`` strategy
pairs from the product distribution, plays one game per pair (one payoff
evaluation each), collects the winners' per-vertex choice frequencies, and
clamps the resulting frequency vectors back onto the gamma-bordered
simplex. Sampling, playout, and stop-rule checks run vectorised over the
whole population; results depend only on the seed, never on scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from . import grundy as _grundy
from .graphs import GameGraph, Strategy, play
from .grundy import GrundyData, PreconditionViolated


class GammaTooLarge(ValueError):
    pass


class MissingSwitchability(ValueError):
    pass


RENORM_TOLERANCE = 1e-12


@dataclass
class ProbModel:
    """Per-vertex categorical distributions over successors.

    ``dists[v][i]`` is the probability of moving from ``v`` to
    ``graph.succ[v][i]``. Every vector sums to one (within 1e-12 for
    floats) and, after restriction, every entry is at least ``gamma``.
    """

    graph: GameGraph
    dists: dict[int, np.ndarray]
    gamma: float

    def copy(self) -> "ProbModel":
        return ProbModel(
            self.graph, {v: p.copy() for v, p in self.dists.items()}, self.gamma
        )

    def snapshot(self) -> dict:
        return {str(v): [float(x) for x in p] for v, p in sorted(self.dists.items())}


@dataclass(frozen=True)
class UmdaConfig:
    mu: int
    gamma: float
    max_generations: int
    seed: int
    stop_rule: str = "exact_optimal"  # exact_optimal | sufficient_optimal | generation_cap_only

    def __post_init__(self):
        if self.mu < 1:
            raise ValueError("mu must be at least 1")
        if self.stop_rule not in (
            "exact_optimal",
            "sufficient_optimal",
            "generation_cap_only",
        ):
            raise ValueError(f"unknown stop rule {self.stop_rule!r}")


@dataclass
class Population:
    """Selected individuals of one generation as a choice matrix.

    ``choices[v, j]`` is individual ``j``'s move at vertex ``v`` (or -1 on
    sink rows). Columns are complete strategies.
    """

    graph: GameGraph
    choices: np.ndarray

    def __len__(self) -> int:
        return self.choices.shape[1]

    def strategy(self, j: int) -> Strategy:
        return Strategy({v: int(self.choices[v, j]) for v in self.graph.interior})


@dataclass
class RunResult:
    generations_used: int
    evaluations: int
    succeeded: bool
    final_model: ProbModel
    optimal_witness: Strategy | None
    trace: list[tuple[int, dict]] = field(default_factory=list)


class EvalCounter:
    """Mutable payoff-evaluation tally (one per game played)."""

    def __init__(self):
        self.count = 0

    def add(self, n: int = 1) -> None:
        self.count += n


# ---------------------------------------------------------------------------
# The border restriction.

def beta_plus(p: Sequence, gamma):
    return sum(max(x - gamma, 0 * x) for x in p)


def beta_minus(p: Sequence, gamma):
    return sum(max(gamma - x, 0 * x) for x in p)


def restrict(p, gamma):
    """Clamp a distribution onto the simplex with per-entry floor ``gamma``.

    Entries at or below the floor are raised to exactly ``gamma``; the
    surplus is paid for by shrinking the remaining entries' excess over
    ``gamma`` by the common factor ``1 - beta_minus/beta_plus``, which
    keeps the total at one. With two entries this reduces to clamping
    into ``[gamma, 1-gamma]``, and that form is used verbatim so the
    binary case agrees exactly. Accepts a float array (returns an array)
    or any sequence of numbers, including Fractions (returns a list and
    stays exact).
    """
    size = len(p)
    if size and not gamma * size < 1:
        raise GammaTooLarge(f"gamma {gamma} too large for {size} outcomes")
    if isinstance(p, np.ndarray):
        if size == 2:
            out = np.clip(p, gamma, 1 - gamma)
        else:
            bplus = np.maximum(p - gamma, 0.0).sum()
            bminus = np.maximum(gamma - p, 0.0).sum()
            out = np.where(p <= gamma, gamma, gamma + (1 - bminus / bplus) * (p - gamma))
        total = out.sum()
        if abs(total - 1.0) > RENORM_TOLERANCE:
            out = out / total
        return out
    if size == 2:
        return [min(max(x, gamma), 1 - gamma) for x in p]
    bplus = beta_plus(p, gamma)
    bminus = beta_minus(p, gamma)
    scale = 1 - bminus / bplus
    return [gamma if x <= gamma else gamma + scale * (x - gamma) for x in p]


def uniform_model(g: GameGraph, gamma: float) -> ProbModel:
    """Initial model: the uniform distribution at every interior vertex."""
    if g.max_degree and not gamma * g.max_degree < 1:
        raise GammaTooLarge(
            f"gamma {gamma} times max degree {g.max_degree} must stay below 1"
        )
    dists = {
        v: np.full(len(g.succ[v]), 1.0 / len(g.succ[v])) for v in g.interior
    }
    return ProbModel(graph=g, dists=dists, gamma=gamma)


# ---------------------------------------------------------------------------
# Vectorised engine. All randomness flows through numpy's PCG64 stream;
# draws happen per interior vertex in ascending id order, one uniform per
# (vertex, individual), converted by inverse CDF over the canonical
# successor order.

@dataclass(eq=False)
class _GraphTables:
    interior: tuple[int, ...]
    succ_arrays: dict[int, np.ndarray]
    sorted_succ: dict[int, np.ndarray]
    sort_order: dict[int, np.ndarray]
    sink_mask: np.ndarray


@lru_cache(maxsize=16)
def _tables(g: GameGraph) -> _GraphTables:
    succ_arrays = {}
    sorted_succ = {}
    sort_order = {}
    for v in g.interior:
        arr = np.asarray(g.succ[v], dtype=np.int64)
        order = np.argsort(arr, kind="stable")
        succ_arrays[v] = arr
        sorted_succ[v] = arr[order]
        sort_order[v] = order
    sink_mask = np.array([not g.succ[v] for v in range(g.n)], dtype=bool)
    return _GraphTables(
        interior=g.interior,
        succ_arrays=succ_arrays,
        sorted_succ=sorted_succ,
        sort_order=sort_order,
        sink_mask=sink_mask,
    )


def _sample_choice_matrix(model: ProbModel, rng: np.random.Generator, count: int) -> np.ndarray:
    g = model.graph
    t = _tables(g)
    out = np.full((g.n, count), -1, dtype=np.int64)
    for v in t.interior:
        cum = np.cumsum(model.dists[v])
        draws = rng.random(count)
        idx = np.searchsorted(cum, draws, side="right")
        np.clip(idx, 0, len(cum) - 1, out=idx)
        out[v] = t.succ_arrays[v][idx]
    return out


def _playout(g: GameGraph, cx: np.ndarray, cy: np.ndarray) -> np.ndarray:
    """Outcomes (+1/-1 for the first mover) of column-paired strategies."""
    t = _tables(g)
    count = cx.shape[1]
    pos = np.full(count, g.root, dtype=np.int64)
    result = np.zeros(count, dtype=np.int8)
    alive = ~t.sink_mask[pos]
    result[~alive] = -1
    moves = 0
    while alive.any():
        idx = np.flatnonzero(alive)
        mover = cx if moves % 2 == 0 else cy
        nxt = mover[pos[idx], idx]
        pos[idx] = nxt
        moves += 1
        stuck = t.sink_mask[nxt]
        done = idx[stuck]
        # After `moves` moves the player now to act is x iff moves is even.
        result[done] = -1 if moves % 2 == 0 else 1
        alive[done] = False
    return result


def population_optimal_mask(g: GameGraph, choices: np.ndarray) -> np.ndarray:
    """Exact-optimality flags for every column of a choice matrix.

    Vectorised form of the per-strategy best-response sweep: column j is
    optimal iff its strategy beats every opponent as first mover.
    """
    count = choices.shape[1]
    cols = np.arange(count)
    win = np.zeros((g.n, count), dtype=bool)
    safe = np.zeros((g.n, count), dtype=bool)
    for u in g.reverse_topo:
        succs = g.succ[u]
        if not succs:
            safe[u] = True
            continue
        win[u] = safe[choices[u], cols]
        acc = win[succs[0]].copy()
        for w in succs[1:]:
            acc &= win[w]
        safe[u] = acc
    return win[g.root]


def population_sufficient_mask(
    g: GameGraph, gd: GrundyData, choices: np.ndarray
) -> np.ndarray:
    """Critical-position certificate flags for every column."""
    count = choices.shape[1]
    ok = np.ones(count, dtype=bool)
    zero = np.zeros(g.n, dtype=bool)
    zero[list(gd.zero_set)] = True
    for v in gd.critical:
        ok &= zero[choices[v]]
    return ok


# ---------------------------------------------------------------------------
# Public sampling and selection operations.

def sample_strategy(model: ProbModel, rng: np.random.Generator) -> Strategy:
    """One independent categorical draw per interior vertex."""
    g = model.graph
    choice = {}
    for v in g.interior:
        cum = np.cumsum(model.dists[v])
        idx = int(np.searchsorted(cum, rng.random(), side="right"))
        idx = min(idx, len(cum) - 1)
        choice[v] = g.succ[v][idx]
    return Strategy(choice)


def tournament(
    model: ProbModel, rng: np.random.Generator, counter: EvalCounter | None = None
) -> Strategy:
    """Sample two strategies, play one game, return the winner."""
    x = sample_strategy(model, rng)
    y = sample_strategy(model, rng)
    if counter is not None:
        counter.add(1)
    return x if play(model.graph, x, y).winner == 1 else y


def generation_step(
    model: ProbModel, cfg: UmdaConfig, rng: np.random.Generator
) -> tuple[ProbModel, Population, int]:
    """One full generation: mu tournaments, frequency update, restriction.

    Returns the next model, the selected population (the mu winners,
    complete with their off-path choices), and the number of payoff
    evaluations spent (always exactly mu).
    """
    g = model.graph
    t = _tables(g)
    cx = _sample_choice_matrix(model, rng, cfg.mu)
    cy = _sample_choice_matrix(model, rng, cfg.mu)
    outcome = _playout(g, cx, cy)
    winners = np.where(outcome[None, :] == 1, cx, cy)

    new_dists = {}
    for v in t.interior:
        vals = winners[v]
        slots = t.sort_order[v][np.searchsorted(t.sorted_succ[v], vals)]
        counts = np.bincount(slots, minlength=len(g.succ[v]))
        q = counts / cfg.mu
        new_dists[v] = np.asarray(restrict(q, model.gamma))
    next_model = ProbModel(graph=g, dists=new_dists, gamma=model.gamma)
    return next_model, Population(graph=g, choices=winners), cfg.mu


def run_umda(g: GameGraph, cfg: UmdaConfig, trace_every: int = 0) -> RunResult:
    """Iterate generations until the selected population hits the target.

    The stop rule is checked on each generation's selected population;
    sampled-but-unselected losers never count. Requires a first-player-win
    game (extend with a forced start vertex first if necessary).
    """
    gd = _grundy.grundy_values(g)
    if gd.values[g.root] == 0:
        raise PreconditionViolated(
            "root has Grundy value 0; apply ensure_first_player_win first"
        )
    model = uniform_model(g, cfg.gamma)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed)))
    trace: list[tuple[int, dict]] = []
    evaluations = 0
    for t in range(1, cfg.max_generations + 1):
        model, population, spent = generation_step(model, cfg, rng)
        evaluations += spent
        if trace_every and t % trace_every == 0:
            trace.append((t, model.snapshot()))
        if cfg.stop_rule == "generation_cap_only":
            continue
        if cfg.stop_rule == "exact_optimal":
            mask = population_optimal_mask(g, population.choices)
        else:
            mask = population_sufficient_mask(g, gd, population.choices)
        if mask.any():
            witness = population.strategy(int(np.argmax(mask)))
            return RunResult(
                generations_used=t,
                evaluations=evaluations,
                succeeded=True,
                final_model=model,
                optimal_witness=witness,
                trace=trace,
            )
    return RunResult(
        generations_used=cfg.max_generations,
        evaluations=evaluations,
        succeeded=False,
        final_model=model,
        optimal_witness=None,
        trace=trace,
    )


# ---------------------------------------------------------------------------
# Parameterisation suggested by the runtime guarantee.

@dataclass(frozen=True)
class TheoremBudget:
    """Theorem-shaped parameter suggestions, never enforced as cutoffs.

    The guarantee's constant is existential, so callers supply ``C`` (and
    the confidence exponent ``K``); every budget carries its exact integer
    power base alongside the float value, which may be astronomically
    large at desk scale.
    """

    gamma: Fraction
    s_hat: int
    s_bar: int
    mu_min: float
    mu_min_base: int
    generation_budget: float
    generation_budget_base: int
    eval_budget: float
    eval_budget_base: int

    @property
    def gamma_float(self) -> float:
        return float(self.gamma)

    def desk_feasible(self, mu_limit: int = 10**7) -> bool:
        return self.mu_min <= mu_limit


def _to_float(value) -> float:
    try:
        return float(value)
    except OverflowError:
        return math.inf


def theorem_parameters(
    g: GameGraph,
    gd: GrundyData,
    s_values: Mapping[int, int],
    K: float = 1.0,
    C: float = 1.0,
) -> TheoremBudget:
    """Instantiate the runtime guarantee's parameter formulas.

    ``s_values`` maps vertices to switchability values or upper bounds and
    must cover every critical position (budgets are monotone in them, so
    upper bounds are safe). The border is ``1/(20 * Delta * n)``; the
    population lower bound and the generation/evaluation budgets follow
    the guarantee's formulas with ``s_hat`` the maximum over critical
    positions and ``s_bar`` the maximum over all supplied vertices.
    """
    if g.max_degree == 0:
        raise ValueError("degenerate game: no moves at all")
    missing = [v for v in gd.critical if v not in s_values]
    if missing:
        raise MissingSwitchability(f"no switchability value for vertices {missing}")
    base = 20 * g.max_degree * g.n
    log_n = math.log(g.n)
    s_hat = max((int(s_values[v]) for v in gd.critical), default=0)
    s_bar = max((int(s) for s in s_values.values()), default=0)

    mu_base = base ** (1 + 2 * s_hat)
    gen_base = sum(base ** int(s_values[v]) for v in gd.critical)
    eval_base = base ** (2 + 3 * s_bar)
    return TheoremBudget(
        gamma=Fraction(1, base),
        s_hat=s_hat,
        s_bar=s_bar,
        mu_min=C * (K + s_hat + 1) * _to_float(mu_base) * log_n,
        mu_min_base=mu_base,
        generation_budget=C * _to_float(gen_base) * log_n,
        generation_budget_base=gen_base,
        eval_budget=C * C * (K + s_bar + 1) * _to_float(eval_base) * log_n * log_n,
        eval_budget_base=eval_base,
    )
