"""Concurrent islands with barrier-synchronized all-to-all migration.

Each island advances in epochs of migration_freq iterations; at every
epoch boundary all islands stop, broadcast copies of their best genomes to
every other island, integrate what they received, and continue. Results
depend only on (instance, config, seed): every stochastic draw comes from
a stream keyed by (seed, island, iteration, role), and migration happens
at fixed iteration numbers, so worker scheduling cannot leak in.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .instance import Instance, route_weight
from .memetic import (
    Genome,
    MemeticParams,
    Population,
    random_population,
    select_truncate,
    step,
)
from .rng import RngStreams, stream

BACKENDS = ("serial", "threads", "processes")


@dataclass(frozen=True)
class IslandConfig:
    """Number of islands plus the per-island parameters; all-to-all topology."""

    num_islands: int
    params: MemeticParams

    def __post_init__(self):
        if self.num_islands < 1:
            raise ValueError("num_islands must be >= 1")


@dataclass(frozen=True)
class MigrationMessage:
    """Immutable snapshot of one island's outgoing migrants."""

    source_island: int
    genomes: tuple[Genome, ...]
    iteration: int


@dataclass
class RunReport:
    """Outcome of one island-model run.

    Every field except wall_time and the host metadata is a pure function
    of (instance, capacity, config); replay_fingerprint() hashes exactly
    those deterministic fields.
    """

    best_genome: Genome
    best_weight: int
    per_island_history: list[list[int]]
    wall_time: float
    config: dict
    iterations_used: int
    metadata: dict = field(default_factory=dict)

    def replay_fingerprint(self) -> str:
        payload = {
            "best_perm": list(self.best_genome.plan.perm),
            "best_weight": self.best_weight,
            "capacity": self.best_genome.plan.capacity,
            "config": self.config,
            "history": self.per_island_history,
            "iterations_used": self.iterations_used,
        }
        blob = json.dumps(payload, sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()

    def to_dict(self) -> dict:
        return {
            "best_perm": list(self.best_genome.plan.perm),
            "best_weight": self.best_weight,
            "capacity": self.best_genome.plan.capacity,
            "config": self.config,
            "per_island_history": self.per_island_history,
            "iterations_used": self.iterations_used,
            "wall_time": self.wall_time,
            "metadata": self.metadata,
        }


def select_migration(pop: Population, e: int) -> list[Genome]:
    """The e best genomes, as immutable copies; the population keeps them."""
    if e < 0 or e > len(pop.members):
        raise ValueError(f"migration count {e} out of range for population of {len(pop.members)}")
    return list(pop.members[:e])


def integrate_migrants(pop: Population, migrants, target_size: int) -> Population:
    """Append received genomes, then truncate back to target_size."""
    merged = Population(members=pop.members + tuple(migrants))
    return select_truncate(merged, target_size)


def _advance_island(inst, capacity, params, members, island, start_iter, num_iters):
    pop = Population(members=members)
    history = []
    for t in range(start_iter, start_iter + num_iters):
        pop = step(pop, inst, params, RngStreams(params.seed, island, t))
        history.append(pop.best().cached_weight)
    return pop.members, history


_WORKER_STATE: dict = {}


def _proc_init(inst, capacity, params):
    _WORKER_STATE["args"] = (inst, capacity, params)


def _proc_advance(task):
    island, members, start_iter, num_iters = task
    inst, capacity, params = _WORKER_STATE["args"]
    return _advance_island(inst, capacity, params, members, island, start_iter, num_iters)


def _config_echo(inst: Instance, capacity: int, cfg: IslandConfig) -> dict:
    params = asdict(cfg.params)
    params["pr_cross_resolved"] = cfg.params.resolved_pr_cross()
    params["sa_initial_temp_resolved"] = cfg.params.resolved_sa_temp(inst)
    params["crossover_pairing"] = "all-pairs"
    return {
        "instance": inst.name,
        "n": inst.n,
        "capacity": capacity,
        "num_islands": cfg.num_islands,
        "topology": "all-to-all",
        "params": params,
    }


def run_island_model(
    inst: Instance,
    capacity: int,
    cfg: IslandConfig,
    backend: str = "serial",
    time_budget: float | None = None,
    target_weight: int | None = None,
) -> RunReport:
    """Run the full island algorithm and return the global best.

    Early stops (time budget, target weight, stagnation) trigger at epoch
    boundaries. Time-budget runs depend on the host clock; everything else
    is bit-reproducible for a fixed seed across all backends.
    """
    if inst.num_clients < 2:
        raise ValueError("instance too small: need at least 2 clients")
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}")
    params = cfg.params
    g = cfg.num_islands
    started = time.perf_counter()

    populations = [
        random_population(
            inst, capacity, params.population_size, stream(params.seed, island, 0, "init")
        )
        for island in range(g)
    ]
    histories: list[list[int]] = [[] for _ in range(g)]

    executor = None
    try:
        if backend == "threads" and g > 1:
            executor = ThreadPoolExecutor(max_workers=g)
        elif backend == "processes" and g > 1:
            executor = ProcessPoolExecutor(
                max_workers=min(g, os.cpu_count() or 1),
                initializer=_proc_init,
                initargs=(inst, capacity, params),
            )

        it = 0
        stop = False
        while it < params.iterations and not stop:
            chunk = min(params.migration_freq, params.iterations - it)
            tasks = [
                (island, populations[island].members, it + 1, chunk)
                if backend == "processes"
                else (inst, capacity, params, populations[island].members, island, it + 1, chunk)
                for island in range(g)
            ]
            if executor is None:
                results = [_advance_island(*t) for t in tasks]
            elif backend == "processes":
                results = list(executor.map(_proc_advance, tasks))
            else:
                results = list(executor.map(lambda t: _advance_island(*t), tasks))
            for island, (members, hist) in enumerate(results):
                populations[island] = Population(members=members)
                histories[island].extend(hist)
            it += chunk

            if it % params.migration_freq == 0 and g > 1:
                messages = [
                    MigrationMessage(
                        source_island=island,
                        genomes=tuple(select_migration(populations[island], params.migration_count)),
                        iteration=it,
                    )
                    for island in range(g)
                ]
                for island in range(g):
                    incoming = [
                        genome
                        for msg in messages
                        if msg.source_island != island
                        for genome in msg.genomes
                    ]
                    populations[island] = integrate_migrants(
                        populations[island], incoming, params.population_size
                    )
                    histories[island][-1] = populations[island].best().cached_weight

            best_now = min(p.best().cached_weight for p in populations)
            if target_weight is not None and best_now <= target_weight:
                stop = True
            if time_budget is not None and time.perf_counter() - started >= time_budget:
                stop = True
            if params.stagnation is not None and not stop:
                series = [min(h[t] for h in histories) for t in range(it)]
                last_improve = 0
                for t in range(1, it):
                    if series[t] < series[last_improve]:
                        last_improve = t
                if it - 1 - last_improve >= params.stagnation:
                    stop = True
    finally:
        if executor is not None:
            executor.shutdown()

    best_island = min(
        range(g),
        key=lambda i: (
            populations[i].best().cached_weight,
            populations[i].best().plan.perm,
            i,
        ),
    )
    best = populations[best_island].best()
    report = RunReport(
        best_genome=best,
        best_weight=best.cached_weight,
        per_island_history=histories,
        wall_time=time.perf_counter() - started,
        config=_config_echo(inst, capacity, cfg),
        iterations_used=it,
        metadata={
            "backend": backend,
            "cpu_count": os.cpu_count(),
            "time_budget": time_budget,
            "target_weight": target_weight,
        },
    )
    assert report.best_weight == route_weight(inst, best.plan)
    return report
