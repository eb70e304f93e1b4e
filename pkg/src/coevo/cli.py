"""Command line entry point.

Subcommands: gen | solve | run | sweep | switch | analyze | intrans.
Exit codes: 0 success, 1 usage error, 2 runtime error. All file outputs
are written atomically; everything else prints deterministic JSON.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import eda, grundy, harness, oracles, switchability
from .games import FIXTURE_NAMES, GameSpec
from .graphs import game_to_dict, load_game, save_game, to_dot
from .ioutil import atomic_write_text

_FAMILY_PARAMS = {
    "subtraction_nim": ("n", "k"),
    "silver_dollar": ("m", "k"),
    "turning_turtles": ("m",),
    "chomp": ("m",),
}


def _add_game_arguments(parser: argparse.ArgumentParser, with_fixture: bool = True):
    parser.add_argument("--game", help="path to a game JSON file")
    parser.add_argument("--family", choices=sorted(_FAMILY_PARAMS))
    parser.add_argument("--n", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--m", type=int)
    if with_fixture:
        parser.add_argument("--fixture", choices=FIXTURE_NAMES)


def _resolve_game(args) -> tuple:
    """Returns (graph, spec-or-None). Exactly one source must be given."""
    sources = [
        bool(getattr(args, "game", None)),
        bool(getattr(args, "family", None)),
        bool(getattr(args, "fixture", None)),
    ]
    if sum(sources) != 1:
        raise UsageError("give exactly one of --game, --family, or --fixture")
    if getattr(args, "fixture", None):
        spec = GameSpec("fixture", {"name": args.fixture})
        return spec.build(), spec
    if args.game:
        return load_game(args.game), None
    wanted = _FAMILY_PARAMS[args.family]
    params = {}
    for name in wanted:
        value = getattr(args, name, None)
        if value is None:
            raise UsageError(f"--family {args.family} needs --{name}")
        params[name] = value
    spec = GameSpec(args.family, params)
    return spec.build(), spec


class UsageError(Exception):
    pass


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    g, _ = _resolve_game(args)
    if args.out:
        save_game(g, args.out)
    else:
        _emit(game_to_dict(g), None)
    if args.dot:
        atomic_write_text(args.dot, to_dot(g))
    return 0


def _cmd_solve(args) -> int:
    g, _ = _resolve_game(args)
    gd = grundy.grundy_values(g)
    first_player_win = gd.values[g.root] != 0
    canonical = None
    if first_player_win:
        x = grundy.canonical_optimal_strategy(g, gd)
        canonical = {str(v): w for v, w in sorted(x.choice.items())}
    _emit(
        {
            "n": g.n,
            "root": g.root,
            "grundy": list(gd.values),
            "zero_set": sorted(gd.zero_set),
            "critical": sorted(gd.critical),
            "first_player_win": first_player_win,
            "canonical_strategy": canonical,
        },
        args.out,
    )
    return 0


def _cmd_run(args) -> int:
    g, spec = _resolve_game(args)
    extended = False
    run_game = grundy.ensure_first_player_win(g)
    if run_game is not g:
        extended = True
    if args.gamma_theorem:
        gamma = 1.0 / (20 * g.max_degree * g.n)
    elif args.gamma is not None:
        gamma = args.gamma
    else:
        raise UsageError("give --gamma VALUE or --gamma-theorem")
    stop = {"exact": "exact_optimal", "sufficient": "sufficient_optimal", "cap": "generation_cap_only"}[args.stop]
    cfg = eda.UmdaConfig(
        mu=args.mu,
        gamma=gamma,
        max_generations=args.max_gen,
        seed=args.seed,
        stop_rule=stop,
    )
    result = eda.run_umda(run_game, cfg, trace_every=args.trace_every)
    witness = None
    if result.optimal_witness is not None:
        witness = {str(v): w for v, w in sorted(result.optimal_witness.choice.items())}
    payload = {
        "config": {
            "game": spec.family if spec else args.game,
            "params": spec.params if spec else None,
            "mu": cfg.mu,
            "gamma": cfg.gamma,
            "max_generations": cfg.max_generations,
            "seed": cfg.seed,
            "stop_rule": cfg.stop_rule,
        },
        "extended": extended,
        "result": {
            "succeeded": result.succeeded,
            "generations": result.generations_used,
            "evaluations": result.evaluations,
            "optimal_witness": witness,
            "final_model": {
                "gamma": result.final_model.gamma,
                "dists": result.final_model.snapshot(),
            },
        },
        "trace": [{"generation": t, "model": snap} for t, snap in result.trace],
    }
    _emit(payload, args.out)
    return 0


def _cmd_sweep(args) -> int:
    param_grid = []
    for chunk in args.instances.split(";"):
        params = {}
        for pair in chunk.split(","):
            key, value = pair.split("=")
            params[key.strip()] = int(value)
        param_grid.append(params)
    template = harness.ExperimentConfig(
        game=GameSpec(args.family, param_grid[0]),
        mu_grid=tuple(int(m) for m in args.mu_grid.split(",")),
        gamma_rule="theorem" if args.gamma_theorem else args.gamma,
        replicates=args.replicates,
        base_seed=args.seed,
        max_generations=args.max_gen,
        stop_rule={"exact": "exact_optimal", "sufficient": "sufficient_optimal", "cap": "generation_cap_only"}[args.stop],
    )
    summary = harness.sweep_scaling(args.family, param_grid, template)
    csv_path, plot_path = harness.write_sweep(
        args.out_dir, summary, include_timings=args.timings
    )
    _emit({"rows": len(summary.records), "csv": csv_path, "plot": plot_path}, None)
    return 0


def _cmd_switch(args) -> int:
    g, _ = _resolve_game(args)
    if args.vertex is not None:
        if args.mode == "bound":
            report = switchability.SwitchabilityReport(
                vertex=args.vertex,
                exact=None,
                upper_bound=switchability.upper_bound_switchability(g, args.vertex),
                witness=None,
                method="path_bound",
            )
        else:
            try:
                report = switchability.exact_switchability(
                    g, args.vertex, edge_limit=args.edge_limit
                )
            except switchability.TooLarge:
                if args.mode == "exact":
                    raise
                report = switchability.SwitchabilityReport(
                    vertex=args.vertex,
                    exact=None,
                    upper_bound=switchability.upper_bound_switchability(g, args.vertex),
                    witness=None,
                    method="path_bound",
                )
        _emit(
            {
                "vertex": report.vertex,
                "exact": report.exact,
                "upper_bound": report.upper_bound,
                "value": report.value,
                "method": report.method,
                "witness": sorted(list(e) for e in report.witness) if report.witness else None,
            },
            args.out,
        )
        return 0
    profile = switchability.switchability_profile(
        g, mode=args.mode, edge_limit=args.edge_limit
    )
    _emit(
        {
            "mode": profile.mode_used,
            "s_bar": profile.s_bar,
            "s_hat": profile.s_hat,
            "reports": {
                str(v): {
                    "exact": r.exact,
                    "upper_bound": r.upper_bound,
                    "value": r.value,
                    "method": r.method,
                }
                for v, r in sorted(profile.reports.items())
            },
        },
        args.out,
    )
    return 0


def _cmd_analyze(args) -> int:
    g, _ = _resolve_game(args)
    if args.model:
        with open(args.model) as fh:
            raw = json.load(fh)
        dists = {int(v): np.asarray(p, dtype=float) for v, p in raw["dists"].items()}
        gamma = float(raw.get("gamma", 0.0))
        model = eda.ProbModel(graph=g, dists=dists, gamma=gamma)
    else:
        model = eda.uniform_model(g, gamma=0.0)
    analysis = oracles.analyze_model(g, model)
    _emit(
        {
            "reach": {str(v): float(p) for v, p in sorted(analysis.reach.items())},
            "win": {str(v): float(p) for v, p in sorted(analysis.win.items())},
            "selection": {
                str(u): [float(p) for p in vec]
                for u, vec in sorted(analysis.selection.items())
            },
        },
        args.out,
    )
    return 0


def _cmd_intrans(args) -> int:
    g, spec = _resolve_game(args)
    rng = np.random.default_rng(args.seed)
    witness = harness.intransitivity_search(g, triples=args.triples, rng=rng)
    nim_params = None
    if spec and spec.family == "subtraction_nim":
        nim_params = (spec.params["n"], spec.params["k"])
    _emit(harness.describe_intransitivity_witness(g, witness, nim_params), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coevo",
        description="Impartial-game solvers and coevolutionary self-play experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a game graph as JSON")
    _add_game_arguments(p)
    p.add_argument("--out", help="output path (stdout when omitted)")
    p.add_argument("--dot", help="also write a DOT rendering here")
    p.set_defaults(handler=_cmd_gen)

    p = sub.add_parser("solve", help="Grundy values, critical set, canonical strategy")
    _add_game_arguments(p)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("run", help="run the self-play optimiser once")
    _add_game_arguments(p)
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--gamma", type=float)
    p.add_argument("--gamma-theorem", action="store_true")
    p.add_argument("--max-gen", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stop", choices=("exact", "sufficient", "cap"), default="exact")
    p.add_argument("--trace-every", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_run)

    p = sub.add_parser("sweep", help="replicate grid across game instances")
    p.add_argument("--family", choices=sorted(_FAMILY_PARAMS), required=True)
    p.add_argument("--instances", required=True, help='e.g. "n=8,k=2;n=16,k=2"')
    p.add_argument("--mu-grid", required=True, help='e.g. "256,1024"')
    p.add_argument("--replicates", type=int, default=5)
    p.add_argument("--gamma", type=float)
    p.add_argument("--gamma-theorem", action="store_true")
    p.add_argument("--max-gen", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stop", choices=("exact", "sufficient", "cap"), default="exact")
    p.add_argument("--timings", action="store_true", help="include wall_ms in the CSV")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("switch", help="switchability report")
    _add_game_arguments(p)
    p.add_argument("--vertex", type=int)
    p.add_argument("--mode", choices=("exact", "bound", "hybrid"), default="hybrid")
    p.add_argument("--edge-limit", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_switch)

    p = sub.add_parser("analyze", help="visit/win/selection analysis of a model")
    _add_game_arguments(p)
    p.add_argument("--model", help="model snapshot JSON (uniform when omitted)")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("intrans", help="search for an intransitive strategy triple")
    _add_game_arguments(p)
    p.add_argument("--triples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_intrans)

    return parser


def cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 2
    except Exception as exc:  # noqa: BLE001 - single CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli())


if __name__ == "__main__":
    main()
