"""Command-line interface.

Exit codes: 0 success, 2 usage error, 3 data or validation error,
4 time budget or combinatorial cap exceeded. Set ``SEWER_OSP_LOG`` (e.g.
``INFO``, ``DEBUG``) for progress logging on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .benchmark import compare
from .network import (
    InvalidNetworkError,
    NetworkFormatError,
    build_upstream_index,
    load_network_dir,
    validate_network,
    write_network_dir,
)
from .objectives import entry_set_sizes, evaluate_plan, make_plan
from .pareto import NormalizationBounds, front_hypervolume
from .results import (
    dataset_digest,
    entry_set_geojson,
    read_solutions,
    records_from_solutions,
    write_manifest,
    write_solutions,
)
from .search import CombinatorialCapExceeded, EGConfig, brute_force_pareto, run_eg, run_nmg
from .synthgen import (
    DEFAULT_DISTRIBUTION,
    BranchingDistribution,
    SynthConfig,
    fit_branching_distribution,
    generate_intree,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_BUDGET = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_DATA):
        super().__init__(message)
        self.code = code


def _positive(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return v


def _load_index(path):
    try:
        net = load_network_dir(path)
        return build_upstream_index(net)
    except FileNotFoundError as exc:
        raise CliError(f"missing network file: {exc.filename}") from None
    except (NetworkFormatError, InvalidNetworkError) as exc:
        raise CliError(str(exc)) from None


def _manifest(command: str, argv: list[str], config: dict, **extra) -> dict:
    return {"command": command, "argv": argv, "config": config, "tool_version": __version__, **extra}


def _argv_without_out(argv: list[str], *paths) -> list[str]:
    """Manifest copy of ``argv``: ``--out`` dropped, given path arguments made absolute."""
    absolute = {str(p): str(Path(p).resolve()) for p in paths if p}
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--out":
            skip = True
            continue
        if a.startswith("--out="):
            continue
        out.append(absolute.get(a, a))
    return out


# --------------------------------------------------------------------------
# commands


def cmd_synth(args, argv) -> int:
    if args.fit_from:
        dist = fit_branching_distribution(_load_index(args.fit_from).network)
    elif args.distribution:
        try:
            dist = BranchingDistribution.load(args.distribution)
        except (ValueError, json.JSONDecodeError) as exc:
            raise CliError(f"invalid distribution: {exc}") from None
    else:
        dist = DEFAULT_DISTRIBUTION
    try:
        net = generate_intree(SynthConfig(n=args.n, seed=args.seed, distribution=dist))
    except ValueError as exc:
        raise CliError(str(exc)) from None
    out = Path(args.out)
    write_network_dir(net, out)
    write_manifest(out / "manifest.json", _manifest(
        "synth", _argv_without_out(argv, args.fit_from, args.distribution), {"n": args.n, "seed": args.seed, "distribution": list(dist.probs)},
        seed=args.seed, dataset_digest=dataset_digest(out)))
    print(f"wrote {net.n} nodes, {net.num_edges} edges to {out}")
    return EXIT_OK


def cmd_validate(args, argv) -> int:
    try:
        net = load_network_dir(args.network)
    except (NetworkFormatError, FileNotFoundError) as exc:
        raise CliError(str(exc)) from None
    report = validate_network(net)
    if args.json:
        print(report.to_json())
    else:
        print(f"{net.n} nodes, {net.num_edges} edges")
        print(report.to_text())
    return EXIT_OK if report.ok else EXIT_DATA


def cmd_optimize(args, argv) -> int:
    idx = _load_index(args.network)
    if args.S > idx.n:
        raise CliError(f"S={args.S} exceeds network size n={idx.n}")
    config = {"algo": args.algo, "N": args.N, "S": args.S, "x": args.x, "seed": args.seed,
              "max_iterations": args.max_iterations, "time_budget": args.time_budget}
    start = time.perf_counter()
    extra = {}
    if args.algo == "oracle":
        try:
            front = brute_force_pareto(idx, args.S, cap=args.cap)
        except CombinatorialCapExceeded as exc:
            raise CliError(str(exc), EXIT_BUDGET) from None
        solutions = [(e.plan, e.objectives) for e in front]
        extra = {"evaluations": None, "optimal_plan_counts": [e.count for e in front]}
        code = EXIT_OK
    else:
        cfg = EGConfig(N=args.N, S=args.S, x=args.x, seed=args.seed,
                       max_iterations=args.max_iterations, time_budget=args.time_budget)
        result = (run_eg if args.algo == "eg" else run_nmg)(idx, cfg)
        solutions = result.solutions
        extra = {"evaluations": result.evaluations, "iterations": result.iterations,
                 "stop_reason": result.stop_reason, "incomplete": result.incomplete}
        code = EXIT_BUDGET if result.stop_reason == "time_budget" else EXIT_OK
    wall = time.perf_counter() - start
    out = Path(args.out)
    csv_path, json_path = write_solutions(out / "solutions.csv", records_from_solutions(solutions, idx.network))
    write_manifest(out / "manifest.json", _manifest(
        "optimize", _argv_without_out(argv, args.network), config, seed=args.seed,
        dataset_digest=dataset_digest(args.network), wall_time=wall,
        outputs=[csv_path.name, json_path.name], **extra))
    print(f"{len(solutions)} solutions written to {csv_path} ({wall:.2f}s)")
    return code


def _read_plan_labels(path) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    return [tok.strip() for tok in text.replace(";", "\n").replace(",", "\n").splitlines() if tok.strip()]


def cmd_evaluate(args, argv) -> int:
    idx = _load_index(args.network)
    net = idx.network
    if args.plan:
        labels = _read_plan_labels(args.plan)
    else:
        records = read_solutions(args.solutions)
        if not records:
            raise CliError("empty solution file")
        if args.plan_id is None:
            rec = max(records, key=lambda r: (r.coverage, -r.search_cost))
        else:
            matches = [r for r in records if r.plan_id == args.plan_id]
            if not matches:
                raise CliError(f"no plan_id {args.plan_id}")
            rec = matches[0]
        labels = rec.sensors
    if len(set(labels)) != len(labels):
        raise CliError("plan lists a sensor more than once")
    try:
        plan = make_plan(net.node_id(lab) for lab in labels)
    except KeyError as exc:
        raise CliError(str(exc.args[0])) from None
    obj = evaluate_plan(plan, idx)
    m = entry_set_sizes(plan, idx)
    per_sensor = {net.label(s): v for s, v in sorted(m.items(), key=lambda kv: net.label(kv[0]))}
    if args.json:
        print(json.dumps({"coverage": obj.coverage, "search_cost": obj.search_cost, "entry_set_sizes": per_sensor},
                         indent=2))
    else:
        print(f"sensors: {len(plan)}")
        print(f"coverage: {obj.coverage}")
        print(f"search_cost: {obj.search_cost:.6f}")
        for lab, v in per_sensor.items():
            print(f"  {lab}\t{v}")
    if args.geojson:
        if net.coords is None:
            raise CliError("network has no coordinates; cannot write GeoJSON")
        Path(args.geojson).write_text(json.dumps(entry_set_geojson(plan, idx)), encoding="utf-8")
    return EXIT_OK


def cmd_hv(args, argv) -> int:
    sets = {}
    for f in args.files:
        records = read_solutions(f)
        if not records:
            raise CliError(f"empty solution file: {f}")
        sets[f] = [r.objectives for r in records]
    bounds = NormalizationBounds.from_points(*sets.values())
    hvs = {f: front_hypervolume(objs, bounds) for f, objs in sets.items()}
    if args.json:
        print(json.dumps({"bounds": bounds.as_dict(), "reference": [1.0, 1.0], "hv": hvs}, indent=2))
    else:
        print(f"bounds: coverage [{bounds.cov_min:g}, {bounds.cov_max:g}], "
              f"search_cost [{bounds.cost_min:.6g}, {bounds.cost_max:.6g}]; reference (1, 1)")
        for f, v in hvs.items():
            print(f"{v:.6f}\t{f}")
    return EXIT_OK


def cmd_compare(args, argv) -> int:
    algos = set(args.algos)
    report = compare(args.sizes, args.x if "eg" in algos else [], args.seeds, include_nmg="nmg" in algos,
                     N=args.N, S=args.S, time_budget=args.time_budget)
    print("Standardized HV")
    print(report.table_text("hv"))
    print()
    print("Time (s)")
    print(report.table_text("time"))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "hv_table.csv").write_text(report.table_csv("hv"), encoding="utf-8")
        (out / "time_table.csv").write_text(report.table_csv("time"), encoding="utf-8")
        cells = [vars(r) for r in report.runs]
        (out / "cells.json").write_text(json.dumps(cells, indent=1) + "\n", encoding="utf-8")
        write_manifest(out / "manifest.json", _manifest(
            "compare", _argv_without_out(argv),
            {"sizes": args.sizes, "algos": sorted(algos), "x": args.x, "seeds": args.seeds,
             "N": args.N, "S": args.S, "time_budget": args.time_budget},
            seed=args.seeds))
    return EXIT_OK


def cmd_replay(args, argv) -> int:
    manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    if manifest.get("command") not in COMMANDS or manifest["command"] == "replay":
        raise CliError("manifest does not describe a replayable command")
    replay_argv = list(manifest["argv"]) + ["--out", str(args.out)]
    code = main(replay_argv)
    digest = manifest.get("dataset_digest")
    if manifest["command"] == "optimize" and digest:
        network = build_parser().parse_args(replay_argv).network
        if dataset_digest(network) != digest:
            print("warning: network files differ from the manifest's digest", file=sys.stderr)
    return code


COMMANDS = {
    "synth": cmd_synth,
    "validate": cmd_validate,
    "optimize": cmd_optimize,
    "evaluate": cmd_evaluate,
    "hv": cmd_hv,
    "compare": cmd_compare,
    "replay": cmd_replay,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sewer-osp", description="Sensor placement on sewer networks.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic in-tree network")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--distribution", help="JSON mapping child count -> probability")
    g.add_argument("--fit-from", help="network directory to fit the branching distribution from")

    p = sub.add_parser("validate", help="check a network against the in-tree model")
    p.add_argument("network")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("optimize", help="search for Pareto-optimal placements")
    p.add_argument("network")
    p.add_argument("--algo", choices=["eg", "nmg", "oracle"], default="eg")
    p.add_argument("--N", type=_positive, default=20)
    p.add_argument("--S", type=_positive, required=True)
    p.add_argument("--x", type=_positive, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iterations", type=_positive, default=None)
    p.add_argument("--time-budget", type=float, default=None, help="seconds")
    p.add_argument("--cap", type=_positive, default=2_000_000, help="oracle plan-count cap")
    p.add_argument("--out", required=True)

    p = sub.add_parser("evaluate", help="objectives and entry sets of one plan")
    p.add_argument("network")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--plan", help="file listing sensor labels")
    src.add_argument("--solutions", help="solutions CSV/JSON; picks max coverage unless --plan-id")
    p.add_argument("--plan-id", type=int)
    p.add_argument("--geojson")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("hv", help="hypervolume of solution files under joint normalisation")
    p.add_argument("files", nargs="+")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("compare", help="NMG vs EG(x) benchmark on synthetic networks")
    p.add_argument("--sizes", type=_positive, nargs="+", default=[100, 500])
    p.add_argument("--algos", nargs="+", choices=["nmg", "eg"], default=["nmg", "eg"])
    p.add_argument("--x", type=_positive, nargs="+", default=[5, 10, 15, 20, 25])
    p.add_argument("--seeds", type=int, nargs="+", default=[0])
    p.add_argument("--N", type=_positive, default=20)
    p.add_argument("--S", type=_positive, default=20)
    p.add_argument("--time-budget", type=float, default=600.0, help="seconds per run")
    p.add_argument("--out")

    p = sub.add_parser("replay", help="re-run a command from its manifest")
    p.add_argument("manifest")
    p.add_argument("--out", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    level = os.environ.get("SEWER_OSP_LOG")
    if level:
        logging.basicConfig(level=level.upper(), format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, argv)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
