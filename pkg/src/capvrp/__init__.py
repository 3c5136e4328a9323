"""Fixed-capacity vehicle routing: exact capacity-2 solver, island-model
memetic algorithm, analytical speedup model, and a benchmark CLI."""

from .bench import ExperimentRecord, load_optima, prd
from .costmodel import CostModelInput, cost_estimate, speedup, speedup_curve, time_estimate
from .exact2 import (
    Matching,
    MatchingProblem,
    matching_weight,
    min_perfect_matching,
    reduce_to_matching,
    reduce_to_zero_base,
    solve_capacity2,
)
from .instance import (
    BaseCycleCover,
    Instance,
    RoutePlan,
    blocks_of,
    cover_from_plan,
    cover_weight,
    cycle_weight,
    route_weight,
)
from .islands import (
    IslandConfig,
    MigrationMessage,
    RunReport,
    integrate_migrants,
    run_island_model,
    select_migration,
)
from .memetic import (
    Genome,
    MemeticParams,
    Population,
    crossover_cx,
    crossover_ox,
    crossover_pmx,
    local_search_sa,
    mutate_swap,
    random_population,
    select_truncate,
    step,
)
from .oracle import brute_force_best_route, brute_force_matching
from .tsplib import (
    TsplibHeader,
    TsplibParseError,
    generate_random_instance,
    parse_tsplib,
    parse_tsplib_file,
    write_tsplib_euc2d,
)

__version__ = "0.1.0"

__all__ = [
    "BaseCycleCover",
    "CostModelInput",
    "ExperimentRecord",
    "Genome",
    "Instance",
    "IslandConfig",
    "Matching",
    "MatchingProblem",
    "MemeticParams",
    "MigrationMessage",
    "Population",
    "RoutePlan",
    "RunReport",
    "TsplibHeader",
    "TsplibParseError",
    "blocks_of",
    "brute_force_best_route",
    "brute_force_matching",
    "cost_estimate",
    "cover_from_plan",
    "cover_weight",
    "crossover_cx",
    "crossover_ox",
    "crossover_pmx",
    "cycle_weight",
    "generate_random_instance",
    "integrate_migrants",
    "load_optima",
    "local_search_sa",
    "matching_weight",
    "min_perfect_matching",
    "mutate_swap",
    "parse_tsplib",
    "parse_tsplib_file",
    "prd",
    "random_population",
    "reduce_to_matching",
    "reduce_to_zero_base",
    "route_weight",
    "run_island_model",
    "select_migration",
    "select_truncate",
    "solve_capacity2",
    "speedup",
    "speedup_curve",
    "step",
    "time_estimate",
    "write_tsplib_euc2d",
]
