"""Command line front end.

Single records come out as JSON, tables and curves as CSV. --out writes to
a file (relative paths resolve under $CAPVRP_OUT_DIR when set); without it
everything goes to stdout. Exit status is 0 exactly when the requested
computation completed; censored benchmark cells are results, not errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from . import __version__
from .bench import (
    ExperimentRecord,
    bench_crossover,
    bench_mutation,
    default_optima_path,
    load_optima,
    measure_speedup,
    prd,
    resolve_out_path,
    run_solve,
    tsp_prd,
)
from .costmodel import speedup_curve
from .exact2 import solve_capacity2
from .instance import Instance
from .memetic import CROSSOVER_KINDS, MemeticParams
from .oracle import brute_force_best_route, brute_force_best_route_plain
from .tsplib import (
    TsplibParseError,
    generate_random_instance,
    parse_tsplib_file,
    random_points,
    write_tsplib_euc2d,
)


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _emit(text: str, out: str | None) -> None:
    path = resolve_out_path(out)
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        path.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def _emit_json(payload, out: str | None) -> None:
    _emit(json.dumps(payload, indent=2, sort_keys=True), out)


def _emit_csv(rows: list[dict], columns: list[str], out: str | None) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row.get(k, "") for k in columns})
    _emit(buf.getvalue(), out)


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(",", " ").split()]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(",", " ").split()]


def _load_instance(args) -> Instance:
    if args.instance is not None and args.random is not None:
        raise SystemExit("error: give an instance path or --random, not both")
    if args.instance is not None:
        return parse_tsplib_file(args.instance)
    if args.random is not None:
        return generate_random_instance(
            args.random, seed=args.instance_seed, coord_bound=args.coord_bound
        )
    raise SystemExit("error: an instance path or --random N is required")


def _capacity_of(inst: Instance, raw: str) -> int:
    # "tsp" pins capacity to the client count: one trip visiting everyone.
    if raw == "tsp":
        return inst.num_clients
    cap = int(raw)
    if cap < 1:
        raise SystemExit("error: capacity must be >= 1 or 'tsp'")
    return cap


def _params_from_args(args) -> MemeticParams:
    return MemeticParams(
        population_size=args.pop_size,
        pr_cross=args.pr_cross,
        pr_mut=args.pr_mut,
        iterations=args.iterations,
        migration_freq=args.migration_freq,
        migration_count=args.migration_count,
        sa_initial_temp=args.sa_temp,
        sa_cooling=args.sa_cooling,
        sa_steps=args.sa_steps,
        crossover_kind=args.crossover,
        seed=args.seed,
        stagnation=args.stagnation,
    )


def _add_instance_source(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("instance", nargs="?", default=None, help="TSPLIB file path")
    p.add_argument("--random", type=int, metavar="N", help="generate a random N-vertex Euclidean instance instead of reading a file")
    p.add_argument("--instance-seed", type=int, default=0, help="seed for --random (default: 0)")
    p.add_argument("--coord-bound", type=int, default=1000, help="coordinate range for --random (default: 1000)")


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output path (default: stdout; relative paths resolve under $CAPVRP_OUT_DIR)")


def _add_memetic_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pop-size", type=int, default=64, help="genomes per island (default: 64)")
    p.add_argument("--iterations", type=int, default=500, help="evolution iterations per island (default: 500)")
    p.add_argument("--migration-freq", type=int, default=50, help="iterations between migrations (default: 50, empirically tuned)")
    p.add_argument("--migration-count", type=int, default=2, help="genomes broadcast per island at each migration (default: 2)")
    p.add_argument("--pr-cross", type=float, default=None, help="per-pair crossover probability (default: 2/pop-size)")
    p.add_argument("--pr-mut", type=float, default=0.15, help="per-genome mutation probability (default: 0.15, empirically tuned; values near 1 degrade results)")
    p.add_argument("--crossover", choices=CROSSOVER_KINDS, default="cx", help="crossover operator (default: cx, the fastest-converging of the three in benchmarks)")
    p.add_argument("--sa-steps", type=int, default=100, help="annealing steps per genome per iteration (default: 100)")
    p.add_argument("--sa-temp", type=float, default=None, help="initial annealing temperature (default: instance mean edge weight; 0 disables uphill moves)")
    p.add_argument("--sa-cooling", type=float, default=0.95, help="geometric cooling factor (default: 0.95)")
    p.add_argument("--seed", type=int, default=0, help="master seed (default: 0)")
    p.add_argument("--stagnation", type=int, default=None, help="stop after this many non-improving iterations (default: off)")


def _cmd_solve(args) -> int:
    inst = _load_instance(args)
    capacity = _capacity_of(inst, args.capacity)
    if args.exact:
        if capacity != 2:
            raise SystemExit("error: --exact applies only to --capacity 2")
        t0 = time.perf_counter()
        cover, weight = solve_capacity2(inst)
        wall = time.perf_counter() - t0
        record = ExperimentRecord(
            command="solve",
            instance=inst.name,
            params={"capacity": 2, "exact": True},
            weight=weight,
            optimum=args.optimum,
            prd_value=None if args.optimum is None else prd(weight, args.optimum),
            iterations_used=0,
            wall_time=wall,
        )
        payload = record.to_dict()
        payload["cycles"] = [list(cycle) for cycle in cover.cycles]
        _emit_json(payload, args.out)
        return 0
    params = _params_from_args(args)
    record, report = run_solve(
        inst,
        capacity,
        params,
        num_islands=args.islands,
        backend=args.backend,
        time_budget=args.time_budget,
        target_weight=args.target_weight,
        optimum=args.optimum,
    )
    payload = record.to_dict()
    payload["best_perm"] = list(report.best_genome.plan.perm)
    _emit_json(payload, args.out)
    if args.history:
        rows = [
            {"iteration": t + 1, "island": island, "best_weight": hist[t]}
            for island, hist in enumerate(report.per_island_history)
            for t in range(len(hist))
        ]
        _emit_csv(rows, ["iteration", "island", "best_weight"], args.history)
    return 0


def _cmd_exact2(args) -> int:
    inst = _load_instance(args)
    t0 = time.perf_counter()
    cover, weight = solve_capacity2(inst)
    wall = time.perf_counter() - t0
    _emit_json(
        {
            "command": "exact2",
            "instance": inst.name,
            "weight": weight,
            "cycles": [list(cycle) for cycle in cover.cycles],
            "wall_time": wall,
        },
        args.out,
    )
    return 0


def _cmd_oracle(args) -> int:
    inst = _load_instance(args)
    capacity = _capacity_of(inst, args.capacity)
    solver = brute_force_best_route_plain if args.plain else brute_force_best_route
    t0 = time.perf_counter()
    plan, weight = solver(inst, capacity)
    wall = time.perf_counter() - t0
    _emit_json(
        {
            "command": "oracle",
            "instance": inst.name,
            "capacity": capacity,
            "weight": weight,
            "perm": list(plan.perm),
            "wall_time": wall,
        },
        args.out,
    )
    return 0


def _cmd_bench_crossover(args) -> int:
    rows = bench_crossover(
        sizes=args.sizes,
        seeds=args.seeds,
        reference_quality=args.reference_quality,
        capacity=args.capacity if args.capacity == "tsp" else int(args.capacity),
        population_size=args.pop_size,
        iterations=args.iterations,
        sa_steps=args.sa_steps,
        instance_seed_base=args.instance_seed,
        coord_bound=args.coord_bound,
    )
    _emit_csv(
        rows,
        ["n", "operator", "median_iterations", "censored", "seeds", "reference_weight", "best_weight"],
        args.out,
    )
    return 0


def _cmd_bench_mutation(args) -> int:
    rows = bench_mutation(
        values=args.values,
        seeds=args.seeds,
        size=args.size,
        capacity=args.capacity if args.capacity == "tsp" else int(args.capacity),
        population_size=args.pop_size,
        iterations=args.iterations,
        sa_steps=args.sa_steps,
        instance_seed=args.instance_seed,
        coord_bound=args.coord_bound,
    )
    _emit_csv(rows, ["pr_mut", "iteration", "median_weight"], args.out)
    return 0


def _cmd_tsp_prd(args) -> int:
    instance_dir = Path(args.instances)
    if not instance_dir.is_dir():
        raise SystemExit(f"error: not a directory: {instance_dir}")
    paths = sorted(instance_dir.glob("*.tsp"))
    if not paths:
        raise SystemExit(f"error: no .tsp files in {instance_dir}")
    optima = load_optima(args.optima)
    rows = tsp_prd(
        paths,
        optima,
        budget=args.budget,
        num_islands=args.islands,
        population_size=args.pop_size,
        seed=args.seed,
        backend=args.backend,
        warn=_warn,
    )
    _emit_csv(rows, ["instance", "weight", "optimum", "prd", "wall_time", "iterations_used"], args.out)
    return 0


def _cmd_speedup(args) -> int:
    inst = _load_instance(args)
    g_values = [1]
    while g_values[-1] * 2 <= args.g_max:
        g_values.append(g_values[-1] * 2)
    rows = measure_speedup(
        g_values,
        inst,
        iterations=args.iterations,
        repeats=args.repeats,
        population_size=args.pop_size,
        sa_steps=args.sa_steps,
        seed=args.seed,
        backend=args.backend,
        f=args.migration_freq,
    )
    _emit_csv(
        rows,
        ["g", "s_theoretical", "s_measured", "seq_time", "par_time", "cpu_count"],
        args.out,
    )
    return 0


def _cmd_speedup_curve(args) -> int:
    rows = [
        {"g": g, "s_theoretical": s}
        for g, s in speedup_curve(args.g_max, f=args.migration_freq, log_base=args.log_base)
    ]
    _emit_csv(rows, ["g", "s_theoretical"], args.out)
    return 0


def _cmd_gen(args) -> int:
    points = random_points(args.n, seed=args.seed, coord_bound=args.coord_bound)
    text = write_tsplib_euc2d(f"random-n{args.n}-s{args.seed}", points)
    _emit(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capvrp",
        description="Capacitated vehicle routing: island memetic solver, exact capacity-2 solver, and benchmark protocols.",
    )
    parser.add_argument("--version", action="version", version=f"capvrp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the island memetic solver on one instance")
    _add_instance_source(p)
    p.add_argument("--capacity", required=True, help="clients per trip, or 'tsp' for a single trip")
    p.add_argument("--exact", action="store_true", help="use the exact solver (capacity 2 only)")
    p.add_argument("--islands", type=int, default=1, help="number of islands (default: 1)")
    p.add_argument("--backend", choices=("serial", "threads", "processes"), default="serial")
    p.add_argument("--time-budget", type=float, default=None, help="wall-clock stop in seconds")
    p.add_argument("--target-weight", type=int, default=None, help="stop once the best weight reaches this")
    p.add_argument("--optimum", type=int, default=None, help="known optimum, enables the prd field")
    p.add_argument("--history", help="also write a per-iteration best-weight CSV here")
    _add_memetic_params(p)
    _add_out(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("exact2", help="exact capacity-2 solve via matching")
    _add_instance_source(p)
    _add_out(p)
    p.set_defaults(func=_cmd_exact2)

    p = sub.add_parser("oracle", help="brute-force optimum for small instances")
    _add_instance_source(p)
    p.add_argument("--capacity", required=True, help="clients per trip, or 'tsp'")
    p.add_argument("--plain", action="store_true", help="use the unpruned enumeration (slower, even smaller limit)")
    _add_out(p)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("bench-crossover", help="median iterations-to-reference per crossover operator")
    p.add_argument("--sizes", type=_int_list, default=[30, 51, 99], help="client counts, comma separated (default: 30,51,99)")
    p.add_argument("--seeds", type=int, default=20, help="runs per (size, operator) cell (default: 20)")
    p.add_argument("--reference-quality", type=float, default=1.05, help="reference weight = this factor times the best weight any run found (default: 1.05)")
    p.add_argument("--capacity", default="10", help="clients per trip, or 'tsp' (default: 10)")
    p.add_argument("--pop-size", type=int, default=16)
    p.add_argument("--iterations", type=int, default=200, help="budget per run; runs that never reach the reference are censored at budget+1")
    p.add_argument("--sa-steps", type=int, default=60)
    p.add_argument("--instance-seed", type=int, default=1000, help="base seed for the per-size random instances")
    p.add_argument("--coord-bound", type=int, default=1000)
    _add_out(p)
    p.set_defaults(func=_cmd_bench_crossover)

    p = sub.add_parser("bench-mutation", help="median convergence trajectory per mutation probability")
    p.add_argument("--values", type=_float_list, default=[0.15, 0.9], help="pr_mut values, comma separated (default: 0.15,0.9)")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--size", type=int, default=100, help="client count of the random instance (default: 100)")
    p.add_argument("--capacity", default="10", help="clients per trip, or 'tsp' (default: 10)")
    p.add_argument("--pop-size", type=int, default=16)
    p.add_argument("--iterations", type=int, default=150)
    p.add_argument("--sa-steps", type=int, default=60)
    p.add_argument("--instance-seed", type=int, default=2000)
    p.add_argument("--coord-bound", type=int, default=1000)
    _add_out(p)
    p.set_defaults(func=_cmd_bench_mutation)

    p = sub.add_parser("tsp-prd", help="percent deviation from known optima over a directory of instances")
    p.add_argument("--instances", required=True, help="directory of .tsp files")
    p.add_argument("--optima", default=None, help=f"instance,optimum CSV (default: packaged table at {default_optima_path().name})")
    p.add_argument("--budget", type=float, default=60.0, help="seconds per instance (default: 60)")
    p.add_argument("--islands", type=int, default=4)
    p.add_argument("--pop-size", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=("serial", "threads", "processes"), default="serial")
    _add_out(p)
    p.set_defaults(func=_cmd_tsp_prd)

    p = sub.add_parser("speedup", help="measured vs theoretical speedup, g sweeping powers of two")
    _add_instance_source(p)
    p.add_argument("--g-max", type=int, default=4, help="largest island count (default: 4)")
    p.add_argument("--iterations", type=int, default=50, help="parallel iteration count i; the 1-island baseline runs i*g (default: 50)")
    p.add_argument("--repeats", type=int, default=3, help="timing repeats, medians reported (default: 3)")
    p.add_argument("--pop-size", type=int, default=16)
    p.add_argument("--sa-steps", type=int, default=40)
    p.add_argument("--migration-freq", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=("serial", "threads", "processes"), default="processes")
    _add_out(p)
    p.set_defaults(func=_cmd_speedup)

    p = sub.add_parser("speedup-curve", help="theoretical speedup table for plotting")
    p.add_argument("--g-max", type=int, default=64)
    p.add_argument("--migration-freq", type=int, default=50)
    p.add_argument("--log-base", type=float, default=2.0)
    _add_out(p)
    p.set_defaults(func=_cmd_speedup_curve)

    p = sub.add_parser("gen", help="write a random Euclidean instance as a TSPLIB file")
    p.add_argument("--n", type=int, required=True, help="vertex count including the base")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coord-bound", type=int, default=1000)
    _add_out(p)
    p.set_defaults(func=_cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except (TsplibParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
