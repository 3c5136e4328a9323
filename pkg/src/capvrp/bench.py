"""Experiment protocols behind the CLI: records, PRD, and benchmark sweeps.

Every record carries the full parameter set including the seed, so any
reported number can be replayed bit-exactly. Randomized sweeps take seed
lists and report medians; censored runs are marked, never dropped.
"""

from __future__ import annotations

import os
import statistics
import time
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path

from .costmodel import speedup
from .instance import Instance
from .islands import IslandConfig, RunReport, run_island_model
from .memetic import MemeticParams
from .tsplib import generate_random_instance, parse_tsplib_file

CENSORED = "censored"


@dataclass
class ExperimentRecord:
    """One solver run: echo of the command, inputs, and outcome."""

    command: str
    instance: str
    params: dict
    weight: int
    optimum: int | None
    prd_value: float | None
    iterations_used: int
    wall_time: float

    def __post_init__(self):
        if (self.optimum is None) != (self.prd_value is None):
            raise ValueError("prd is present exactly when the optimum is known")

    def to_dict(self) -> dict:
        return asdict(self)


def prd(found: float, optimum: float) -> float:
    """Percent deviation from the optimum; negative flags a wrong optimum."""
    if optimum <= 0:
        raise ValueError(f"optimum must be positive, got {optimum}")
    return 100.0 * (found - optimum) / optimum


def format_prd(value: float) -> str:
    return f"{value:.2f}"


def default_optima_path() -> Path:
    return Path(resources.files("capvrp").joinpath("data/tsp_optima.csv"))


def load_optima(path=None) -> dict[str, int]:
    """Read an instance->optimum map from a comment-friendly CSV."""
    path = Path(path) if path is not None else default_optima_path()
    optima: dict[str, int] = {}
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, _, value = line.partition(",")
        optima[name.strip()] = int(value.strip())
    return optima


def resolve_out_path(out: str | None) -> Path | None:
    """--out resolution: None means stdout; relative paths land in
    $CAPVRP_OUT_DIR when that is set."""
    if out is None:
        return None
    path = Path(out)
    base = os.environ.get("CAPVRP_OUT_DIR")
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def record_from_report(
    command: str, inst: Instance, report: RunReport, optimum: int | None
) -> ExperimentRecord:
    return ExperimentRecord(
        command=command,
        instance=inst.name,
        params=report.config["params"]
        | {"num_islands": report.config["num_islands"], "capacity": report.config["capacity"]},
        weight=report.best_weight,
        optimum=optimum,
        prd_value=None if optimum is None else prd(report.best_weight, optimum),
        iterations_used=report.iterations_used,
        wall_time=report.wall_time,
    )


def run_solve(
    inst: Instance,
    capacity: int,
    params: MemeticParams,
    num_islands: int = 1,
    backend: str = "serial",
    time_budget: float | None = None,
    target_weight: int | None = None,
    optimum: int | None = None,
    command: str = "solve",
) -> tuple[ExperimentRecord, RunReport]:
    report = run_island_model(
        inst,
        capacity,
        IslandConfig(num_islands=num_islands, params=params),
        backend=backend,
        time_budget=time_budget,
        target_weight=target_weight,
    )
    return record_from_report(command, inst, report, optimum), report


def _global_history(report: RunReport) -> list[int]:
    # Best weight known at each iteration across all islands.
    series = []
    best = None
    for t in range(report.iterations_used):
        at_t = min(h[t] for h in report.per_island_history)
        best = at_t if best is None or at_t < best else best
        series.append(best)
    return series


def iterations_to_reach(report: RunReport, target: float) -> int | None:
    """First iteration (1-based) whose global best is <= target."""
    for t, w in enumerate(_global_history(report), start=1):
        if w <= target:
            return t
    return None


def bench_crossover(
    sizes: list[int],
    seeds: int,
    reference_quality: float = 1.05,
    capacity: int | str = 10,
    population_size: int = 16,
    iterations: int = 200,
    sa_steps: int = 60,
    instance_seed_base: int = 1000,
    coord_bound: int = 1000,
) -> list[dict]:
    """Median iterations-to-reference per (size, operator).

    For each size one random instance is generated; every operator runs
    once per seed with a fixed iteration budget. The reference weight is
    reference_quality times the best weight any run achieved on that
    instance, so all operators chase the same target. Runs that never
    reach it are censored at budget+1 for the median and counted.
    """
    if reference_quality < 1.0:
        raise ValueError("reference_quality must be >= 1")
    rows = []
    for size in sizes:
        inst = generate_random_instance(size + 1, seed=instance_seed_base + size, coord_bound=coord_bound)
        cap = inst.num_clients if capacity == "tsp" else min(int(capacity), inst.num_clients)
        reports: dict[str, list[RunReport]] = {}
        best_seen = None
        for kind in ("cx", "ox", "pmx"):
            reports[kind] = []
            for seed in range(seeds):
                params = MemeticParams(
                    population_size=population_size,
                    iterations=iterations,
                    sa_steps=sa_steps,
                    crossover_kind=kind,
                    seed=seed,
                )
                report = run_island_model(inst, cap, IslandConfig(num_islands=1, params=params))
                reports[kind].append(report)
                if best_seen is None or report.best_weight < best_seen:
                    best_seen = report.best_weight
        reference = reference_quality * best_seen
        for kind in ("cx", "ox", "pmx"):
            hits = [iterations_to_reach(r, reference) for r in reports[kind]]
            censored = sum(1 for h in hits if h is None)
            ranked = [h if h is not None else iterations + 1 for h in hits]
            rows.append(
                {
                    "n": size,
                    "operator": kind,
                    "median_iterations": statistics.median(ranked),
                    "censored": censored,
                    "seeds": seeds,
                    "reference_weight": reference,
                    "best_weight": best_seen,
                }
            )
    return rows


def bench_mutation(
    values: list[float],
    seeds: int,
    size: int = 100,
    capacity: int | str = 10,
    population_size: int = 16,
    iterations: int = 150,
    sa_steps: int = 60,
    instance_seed: int = 2000,
    coord_bound: int = 1000,
) -> list[dict]:
    """Median best-weight trajectory per mutation probability.

    Output has exactly iterations * len(values) rows, one per
    (pr_mut, iteration) cell.
    """
    inst = generate_random_instance(size + 1, seed=instance_seed, coord_bound=coord_bound)
    cap = inst.num_clients if capacity == "tsp" else min(int(capacity), inst.num_clients)
    rows = []
    for value in values:
        histories = []
        for seed in range(seeds):
            params = MemeticParams(
                population_size=population_size,
                pr_mut=value,
                iterations=iterations,
                sa_steps=sa_steps,
                seed=seed,
            )
            report = run_island_model(inst, cap, IslandConfig(num_islands=1, params=params))
            histories.append(_global_history(report))
        for t in range(iterations):
            rows.append(
                {
                    "pr_mut": value,
                    "iteration": t + 1,
                    "median_weight": statistics.median(h[t] for h in histories),
                }
            )
    return rows


def tsp_prd(
    instance_paths: list,
    optima: dict[str, int],
    budget: float = 60.0,
    num_islands: int = 4,
    population_size: int = 64,
    seed: int = 0,
    backend: str = "serial",
    iterations_cap: int = 10**9,
    warn=None,
) -> list[dict]:
    """Tour quality versus known optima, one row per instance.

    Runs in single-trip mode (capacity = client count) under a wall-clock
    budget per instance, stopping early when the optimum is hit. Instances
    without a known optimum get an empty prd and a warning.
    """
    rows = []
    for path in instance_paths:
        inst = parse_tsplib_file(path)
        optimum = optima.get(inst.name)
        params = MemeticParams(
            population_size=population_size, iterations=iterations_cap, seed=seed
        )
        report = run_island_model(
            inst,
            inst.num_clients,
            IslandConfig(num_islands=num_islands, params=params),
            backend=backend,
            time_budget=budget,
            target_weight=optimum,
        )
        row = {
            "instance": inst.name,
            "weight": report.best_weight,
            "optimum": optimum if optimum is not None else "",
            "prd": format_prd(prd(report.best_weight, optimum)) if optimum is not None else "",
            "wall_time": round(report.wall_time, 3),
            "iterations_used": report.iterations_used,
        }
        if optimum is None and warn is not None:
            warn(f"no known optimum for {inst.name}; prd omitted")
        rows.append(row)
    return rows


def measure_speedup(
    g_values: list[int],
    inst: Instance,
    capacity: int | None = None,
    iterations: int = 50,
    repeats: int = 3,
    population_size: int = 16,
    sa_steps: int = 40,
    seed: int = 0,
    backend: str = "processes",
    f: float = 50.0,
) -> list[dict]:
    """Equal-total-work speedup: sequential i*g iterations vs g islands at i.

    Medians over repeats; S_measured(1) is its own baseline ratio. The
    theoretical column comes from the analytical model with the same f.
    """
    cap = inst.num_clients if capacity is None else capacity
    rows = []
    base_times: dict[int, float] = {}
    for g in g_values:
        seq_times = []
        par_times = []
        for rep in range(repeats):
            params_seq = MemeticParams(
                population_size=population_size,
                iterations=iterations * g,
                sa_steps=sa_steps,
                seed=seed + rep,
            )
            t0 = time.perf_counter()
            run_island_model(inst, cap, IslandConfig(num_islands=1, params=params_seq), backend="serial")
            seq_times.append(time.perf_counter() - t0)
            params_par = MemeticParams(
                population_size=population_size,
                iterations=iterations,
                sa_steps=sa_steps,
                seed=seed + rep,
            )
            t0 = time.perf_counter()
            run_island_model(
                inst, cap, IslandConfig(num_islands=g, params=params_par), backend=backend
            )
            par_times.append(time.perf_counter() - t0)
        base_times[g] = statistics.median(seq_times)
        measured = statistics.median(seq_times) / statistics.median(par_times)
        rows.append(
            {
                "g": g,
                "s_theoretical": speedup(g, f=f),
                "s_measured": measured,
                "seq_time": statistics.median(seq_times),
                "par_time": statistics.median(par_times),
                "cpu_count": os.cpu_count(),
            }
        )
    return rows
