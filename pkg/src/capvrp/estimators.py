"""Estimator-style front ends over the two solvers.

Both take a precomputed symmetric weight matrix X whose row 0 is the base
vertex, following the fit/attributes convention: construction only stores
parameters, fit(X) computes, results land in trailing-underscore
attributes, and fit_predict(X) returns a trip label per vertex (-1 for
the base).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array

from .exact2 import solve_capacity2
from .instance import Instance, blocks_of
from .islands import IslandConfig, run_island_model
from .memetic import MemeticParams
from .validation import as_weight_matrix, check_capacity


def _labels_from_blocks(n: int, blocks) -> np.ndarray:
    labels = np.full(n, -1, dtype=np.int64)
    for trip, block in enumerate(blocks):
        for client in block:
            labels[client] = trip
    return labels


class ExactCapacity2Solver(BaseEstimator):
    """Optimal two-clients-per-trip routing via perfect matching."""

    def __init__(self, max_vertices: int = 22):
        self.max_vertices = max_vertices

    def fit(self, X, y=None):
        X = check_array(X)
        W = as_weight_matrix(X)
        inst = Instance.from_matrix(W)
        cover, weight = solve_capacity2(inst, max_vertices=self.max_vertices)
        self.n_features_in_ = inst.n
        self.cover_ = cover
        self.weight_ = weight
        self.labels_ = _labels_from_blocks(inst.n, cover.cycles)
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X, y).labels_


class MemeticVRPSolver(BaseEstimator):
    """Island-model memetic search for any trip capacity.

    capacity="tsp" means one trip through all clients. All parameters are
    recorded verbatim; fit(X) resolves defaults, runs the islands, and
    exposes best_plan_, best_weight_, labels_, and the full report_.
    """

    def __init__(
        self,
        capacity="tsp",
        n_islands: int = 1,
        population_size: int = 64,
        pr_cross: float | None = None,
        pr_mut: float = 0.15,
        iterations: int = 500,
        migration_freq: int = 50,
        migration_count: int = 2,
        sa_initial_temp: float | None = None,
        sa_cooling: float = 0.95,
        sa_steps: int = 100,
        crossover: str = "cx",
        seed: int = 0,
        stagnation: int | None = None,
        time_budget: float | None = None,
        target_weight: int | None = None,
        backend: str = "serial",
    ):
        self.capacity = capacity
        self.n_islands = n_islands
        self.population_size = population_size
        self.pr_cross = pr_cross
        self.pr_mut = pr_mut
        self.iterations = iterations
        self.migration_freq = migration_freq
        self.migration_count = migration_count
        self.sa_initial_temp = sa_initial_temp
        self.sa_cooling = sa_cooling
        self.sa_steps = sa_steps
        self.crossover = crossover
        self.seed = seed
        self.stagnation = stagnation
        self.time_budget = time_budget
        self.target_weight = target_weight
        self.backend = backend

    def fit(self, X, y=None):
        X = check_array(X)
        W = as_weight_matrix(X)
        inst = Instance.from_matrix(W)
        if self.capacity in ("tsp", None):
            capacity = inst.num_clients
        else:
            capacity = check_capacity(self.capacity, inst.n)
        params = MemeticParams(
            population_size=self.population_size,
            pr_cross=self.pr_cross,
            pr_mut=self.pr_mut,
            iterations=self.iterations,
            migration_freq=self.migration_freq,
            migration_count=self.migration_count,
            sa_initial_temp=self.sa_initial_temp,
            sa_cooling=self.sa_cooling,
            sa_steps=self.sa_steps,
            crossover_kind=self.crossover,
            seed=self.seed,
            stagnation=self.stagnation,
        )
        report = run_island_model(
            inst,
            capacity,
            IslandConfig(num_islands=self.n_islands, params=params),
            backend=self.backend,
            time_budget=self.time_budget,
            target_weight=self.target_weight,
        )
        self.n_features_in_ = inst.n
        self.report_ = report
        self.best_plan_ = report.best_genome.plan
        self.best_weight_ = report.best_weight
        self.labels_ = _labels_from_blocks(inst.n, blocks_of(self.best_plan_))
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X, y).labels_
