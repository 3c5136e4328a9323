"""Per-island evolutionary loop: genomes, operators, annealing, selection.

One step applies, in order: fitness evaluation, swap mutation over all
members, crossover over all member pairs, simulated-annealing polish of the
mutants and offspring, and truncation selection back to the population
size. The pre-step members stay in the selection pool, so the best weight
never increases across steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .instance import Instance, RoutePlan, route_weight
from .rng import RngStreams
from .validation import check_probability

CROSSOVER_KINDS = ("cx", "ox", "pmx")


@dataclass(frozen=True)
class Genome:
    """A candidate plan with its (optional) cached weight."""

    plan: RoutePlan
    cached_weight: int | None = None


@dataclass(frozen=True)
class MemeticParams:
    """All tunables of the evolutionary loop.

    pr_cross=None resolves to 2/population_size, the default that keeps the
    expected number of crossover events linear in the population size.
    sa_initial_temp=None resolves to the instance's mean edge weight;
    explicit 0.0 disables uphill moves entirely (pure descent).
    stagnation=None disables the early stop on non-improving iterations.
    """

    population_size: int = 64
    pr_cross: float | None = None
    pr_mut: float = 0.15
    iterations: int = 500
    migration_freq: int = 50
    migration_count: int = 2
    sa_initial_temp: float | None = None
    sa_cooling: float = 0.95
    sa_steps: int = 100
    crossover_kind: str = "cx"
    seed: int = 0
    stagnation: int | None = None

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.migration_freq < 1:
            raise ValueError("migration_freq must be >= 1")
        if not 0 <= self.migration_count <= self.population_size:
            raise ValueError("migration_count must be in [0, population_size]")
        if self.pr_cross is not None:
            check_probability(self.pr_cross, "pr_cross")
        check_probability(self.pr_mut, "pr_mut")
        if self.sa_initial_temp is not None and self.sa_initial_temp < 0:
            raise ValueError("sa_initial_temp must be nonnegative")
        if not 0.0 < self.sa_cooling <= 1.0:
            raise ValueError("sa_cooling must be in (0, 1]")
        if self.sa_steps < 0:
            raise ValueError("sa_steps must be nonnegative")
        if self.crossover_kind not in CROSSOVER_KINDS:
            raise ValueError(f"crossover_kind must be one of {CROSSOVER_KINDS}")
        if self.stagnation is not None and self.stagnation < 1:
            raise ValueError("stagnation must be >= 1 when set")

    def resolved_pr_cross(self) -> float:
        if self.pr_cross is not None:
            return self.pr_cross
        return min(1.0, 2.0 / self.population_size)

    def resolved_sa_temp(self, inst: Instance) -> float:
        if self.sa_initial_temp is not None:
            return self.sa_initial_temp
        return inst.mean_edge_weight()


@dataclass(frozen=True)
class Population:
    """Members kept sorted ascending by (weight, permutation)."""

    members: tuple[Genome, ...] = field(default_factory=tuple)

    def __post_init__(self):
        members = tuple(self.members)
        if any(g.cached_weight is None for g in members):
            raise ValueError("population members must carry evaluated weights")
        ordered = tuple(sorted(members, key=_genome_key))
        object.__setattr__(self, "members", ordered)

    def best(self) -> Genome:
        return self.members[0]


def _genome_key(g: Genome):
    return (g.cached_weight, g.plan.perm)


def evaluate(inst: Instance, genome: Genome) -> Genome:
    """Fill the weight cache if missing."""
    if genome.cached_weight is not None:
        return genome
    return replace(genome, cached_weight=route_weight(inst, genome.plan))


def _eval_perm(perm, W, c) -> int:
    # Linear scan: start edge, then per-adjacency cost where every c-th
    # boundary closes one trip and opens the next, then the end edge.
    w0 = W[0]
    m = len(perm)
    total = w0[perm[0]]
    for k in range(m - 1):
        a = perm[k]
        b = perm[k + 1]
        if (k + 1) % c == 0:
            total += w0[a] + w0[b]
        else:
            total += W[a][b]
    return total + w0[perm[m - 1]]


def random_population(inst: Instance, capacity: int, size: int, rng) -> Population:
    """Uniformly random permutations, evaluated and sorted."""
    if size < 2:
        raise ValueError("population size must be >= 2")
    W = inst.weights
    members = []
    base = list(inst.clients())
    for _ in range(size):
        perm = base[:]
        rng.shuffle(perm)
        weight = _eval_perm(perm, W, capacity)
        members.append(Genome(plan=RoutePlan(tuple(perm), capacity), cached_weight=weight))
    return Population(members=tuple(members))


def _require_same_length(p1, p2):
    if len(p1) != len(p2):
        raise ValueError(f"parent lengths differ: {len(p1)} vs {len(p2)}")


def _cx_raw(p1, p2):
    n = len(p1)
    pos_in_p1 = {v: k for k, v in enumerate(p1)}
    cycle_of = [0] * n
    cycle = 0
    for start in range(n):
        if cycle_of[start] == 0:
            cycle += 1
            pos = start
            while cycle_of[pos] == 0:
                cycle_of[pos] = cycle
                pos = pos_in_p1[p2[pos]]
    child1 = [p1[k] if cycle_of[k] % 2 == 1 else p2[k] for k in range(n)]
    child2 = [p2[k] if cycle_of[k] % 2 == 1 else p1[k] for k in range(n)]
    return child1, child2


def _cut_points(n, rng):
    a = rng.randrange(n)
    b = rng.randrange(n)
    if a > b:
        a, b = b, a
    return a, b


def _ox_raw(p1, p2, a, b):
    n = len(p1)
    child = [None] * n
    child[a:b + 1] = p1[a:b + 1]
    present = set(p1[a:b + 1])
    fill = [v for t in range(n) if (v := p2[(b + 1 + t) % n]) not in present]
    for t, v in enumerate(fill):
        child[(b + 1 + t) % n] = v
    return child


def _pmx_raw(p1, p2, a, b):
    n = len(p1)
    child = [None] * n
    child[a:b + 1] = p1[a:b + 1]
    seg_map = {p1[t]: p2[t] for t in range(a, b + 1)}
    for k in list(range(0, a)) + list(range(b + 1, n)):
        v = p2[k]
        while v in seg_map:
            v = seg_map[v]
        child[k] = v
    return child


def crossover_cx(p1: Genome, p2: Genome) -> tuple[Genome, Genome]:
    """Cycle crossover: two children.

    Positions are partitioned into alternation cycles; the first child keeps
    the first parent's values on odd-numbered cycles and takes the second
    parent's on even-numbered ones. The second child is the complement.
    """
    _require_same_length(p1.plan.perm, p2.plan.perm)
    c1, c2 = _cx_raw(p1.plan.perm, p2.plan.perm)
    cap = p1.plan.capacity
    return (
        Genome(plan=RoutePlan(tuple(c1), cap)),
        Genome(plan=RoutePlan(tuple(c2), cap)),
    )


def crossover_ox(p1: Genome, p2: Genome, rng) -> Genome:
    """Order crossover: keep a segment of the first parent, fill the rest
    with the second parent's values in cyclic order starting after the cut."""
    _require_same_length(p1.plan.perm, p2.plan.perm)
    a, b = _cut_points(len(p1.plan.perm), rng)
    child = _ox_raw(p1.plan.perm, p2.plan.perm, a, b)
    return Genome(plan=RoutePlan(tuple(child), p1.plan.capacity))


def crossover_pmx(p1: Genome, p2: Genome, rng) -> Genome:
    """Partially-mapped crossover: keep a segment of the first parent,
    take the second parent's values elsewhere, chased through the segment
    mapping until free."""
    _require_same_length(p1.plan.perm, p2.plan.perm)
    a, b = _cut_points(len(p1.plan.perm), rng)
    child = _pmx_raw(p1.plan.perm, p2.plan.perm, a, b)
    return Genome(plan=RoutePlan(tuple(child), p1.plan.capacity))


def mutate_swap(g: Genome, pr_mut: float, rng) -> Genome:
    """With probability pr_mut, swap two distinct positions."""
    check_probability(pr_mut, "pr_mut")
    if rng.random() >= pr_mut:
        return g
    perm = list(g.plan.perm)
    m = len(perm)
    if m < 2:
        return g
    i = rng.randrange(m)
    j = rng.randrange(m - 1)
    if j >= i:
        j += 1
    perm[i], perm[j] = perm[j], perm[i]
    return Genome(plan=RoutePlan(tuple(perm), g.plan.capacity), cached_weight=None)


def _delta_swap(perm, W, c, i, j):
    # i < j. Re-price the adjacency positions around i and j plus the start
    # and end edges when they are touched.
    w0 = W[0]
    m = len(perm)
    ai = perm[i]
    aj = perm[j]

    def elem(t):
        if t == i:
            return aj
        if t == j:
            return ai
        return perm[t]

    positions = {k for k in (i - 1, i, j - 1, j) if 0 <= k <= m - 2}
    before = 0
    after = 0
    for k in positions:
        x, y = perm[k], perm[k + 1]
        x2, y2 = elem(k), elem(k + 1)
        if (k + 1) % c == 0:
            before += w0[x] + w0[y]
            after += w0[x2] + w0[y2]
        else:
            before += W[x][y]
            after += W[x2][y2]
    if i == 0:
        before += w0[ai]
        after += w0[aj]
    if j == m - 1:
        before += w0[aj]
        after += w0[ai]
    return after - before


def _delta_reversal(perm, W, c, i, j):
    # i < j, reversing perm[i..j]. Outer edges change like a 2-opt move;
    # inside the segment only positions whose trip-boundary status differs
    # from their mirror image change cost (the weight matrix is symmetric).
    w0 = W[0]
    m = len(perm)
    pi = perm[i]
    pj = perm[j]
    d = 0
    if i >= 1:
        k = i - 1
        x = perm[k]
        if (k + 1) % c == 0:
            d += w0[pj] - w0[pi]
        else:
            d += W[x][pj] - W[x][pi]
    else:
        d += w0[pj] - w0[pi]
    if j <= m - 2:
        y = perm[j + 1]
        if (j + 1) % c == 0:
            d += w0[pi] - w0[pj]
        else:
            d += W[pi][y] - W[pj][y]
    else:
        d += w0[pi] - w0[pj]
    b = ((i + c) // c) * c - 1
    while b <= j - 1:
        mb = i + j - 1 - b
        if (mb + 1) % c != 0:
            x, y = perm[b], perm[b + 1]
            u, v = perm[mb], perm[mb + 1]
            d += (w0[u] + w0[v] - W[u][v]) - (w0[x] + w0[y] - W[x][y])
        b += c
    return d


def _sa_walk(perm, weight, W, c, rng, steps, t0, cooling):
    # Draw order per proposal: move kind, position i, position j, then the
    # acceptance coin only for uphill moves at positive temperature.
    m = len(perm)
    if m < 2 or steps == 0:
        return tuple(perm), weight
    cur = list(perm)
    cur_w = weight
    best = list(perm)
    best_w = weight
    T = t0
    exp = math.exp
    for _ in range(steps):
        reversal = rng.random() < 0.5
        i = rng.randrange(m)
        j = rng.randrange(m - 1)
        if j >= i:
            j += 1
        if i > j:
            i, j = j, i
        if reversal:
            d = _delta_reversal(cur, W, c, i, j)
        else:
            d = _delta_swap(cur, W, c, i, j)
        if d <= 0:
            accept = True
        elif T > 0.0:
            accept = rng.random() < exp(-d / T)
        else:
            accept = False
        if accept:
            if reversal:
                cur[i:j + 1] = cur[i:j + 1][::-1]
            else:
                cur[i], cur[j] = cur[j], cur[i]
            cur_w += d
            if cur_w < best_w:
                best_w = cur_w
                best = cur[:]
        T *= cooling
    return tuple(best), best_w


def local_search_sa(g: Genome, inst: Instance, params: MemeticParams, rng) -> Genome:
    """Short annealing walk over swaps and segment reversals.

    Returns the best genome visited, so the result never weighs more than
    the input. Temperature cools geometrically; zero temperature means
    strict descent.
    """
    g = evaluate(inst, g)
    plan = g.plan
    perm, weight = _sa_walk(
        plan.perm,
        g.cached_weight,
        inst.weights,
        plan.capacity,
        rng,
        params.sa_steps,
        params.resolved_sa_temp(inst),
        params.sa_cooling,
    )
    if perm == plan.perm:
        return g
    return Genome(plan=RoutePlan(perm, plan.capacity), cached_weight=weight)


def select_truncate(pop: Population, target_size: int) -> Population:
    """Keep the best target_size genomes under the (weight, perm) order."""
    if target_size < 1:
        raise ValueError("target_size must be >= 1")
    return Population(members=pop.members[:target_size])


def step(pop: Population, inst: Instance, params: MemeticParams, rng: RngStreams) -> Population:
    """One generation. rng carries the (seed, island, iteration) coordinates;
    every member, pair, and polish draws from its own derived stream, so the
    outcome does not depend on evaluation order."""
    members = [evaluate(inst, g) for g in pop.members]
    pr_mut = params.pr_mut
    mutants = [
        mutate_swap(g, pr_mut, rng.stream("mut", idx)) for idx, g in enumerate(members)
    ]
    pr_cross = params.resolved_pr_cross()
    kind = params.crossover_kind
    offspring: list[Genome] = []
    count = len(mutants)
    # One coin per unordered pair, drawn in fixed (i, j) order from a single
    # stream; cut points for the pairs that hit come from per-pair streams.
    coin_rng = rng.stream("cross-coins")
    for i in range(count):
        for j in range(i + 1, count):
            if coin_rng.random() >= pr_cross:
                continue
            if kind == "cx":
                offspring.extend(crossover_cx(mutants[i], mutants[j]))
            elif kind == "ox":
                offspring.append(crossover_ox(mutants[i], mutants[j], rng.stream("cut", i, j)))
            else:
                offspring.append(crossover_pmx(mutants[i], mutants[j], rng.stream("cut", i, j)))
    polished = [
        local_search_sa(g, inst, params, rng.stream("sa", idx))
        for idx, g in enumerate(mutants + offspring)
    ]
    pool = Population(members=tuple(members) + tuple(polished))
    return select_truncate(pool, params.population_size)
