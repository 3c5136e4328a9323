import random

import pytest

from capvrp import (
    Genome,
    MemeticParams,
    Population,
    RoutePlan,
    crossover_cx,
    crossover_ox,
    crossover_pmx,
    local_search_sa,
    mutate_swap,
    random_population,
    route_weight,
    select_truncate,
    step,
)
from capvrp.memetic import (
    _cx_raw,
    _delta_reversal,
    _delta_swap,
    _ox_raw,
    _pmx_raw,
    _sa_walk,
    evaluate,
)
from capvrp.rng import RngStreams, stream

from conftest import random_instance

P1 = (1, 2, 3, 4, 5, 6, 7, 8)
P2 = (8, 5, 2, 1, 3, 6, 4, 7)


def genome(perm, capacity=3):
    return Genome(plan=RoutePlan(perm=tuple(perm), capacity=capacity))


def test_cx_hand_traced():
    c1, c2 = _cx_raw(list(P1), list(P2))
    assert c1 == [1, 5, 2, 4, 3, 6, 7, 8]
    assert c2 == [8, 2, 3, 1, 5, 6, 4, 7]


def test_cx_identical_parents_fixed_point():
    c1, c2 = _cx_raw(list(P1), list(P1))
    assert c1 == list(P1)
    assert c2 == list(P1)


def test_ox_hand_traced():
    assert _ox_raw(list(P1), list(P2), 3, 5) == [2, 1, 3, 4, 5, 6, 7, 8]


def test_pmx_hand_traced():
    assert _pmx_raw(list(P1), list(P2), 3, 5) == [8, 3, 2, 4, 5, 6, 1, 7]


def test_ox_pmx_preserve_cut_segment():
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randrange(2, 12)
        p1 = list(range(1, n + 1))
        p2 = p1[:]
        rng.shuffle(p1)
        rng.shuffle(p2)
        a = rng.randrange(n)
        b = rng.randrange(n)
        a, b = min(a, b), max(a, b)
        for op in (_ox_raw, _pmx_raw):
            child = op(p1, p2, a, b)
            assert child[a:b + 1] == p1[a:b + 1]
            assert sorted(child) == sorted(p1)


def test_crossover_closure_sample():
    rng = random.Random(1)
    for _ in range(300):
        n = rng.randrange(2, 15)
        p1 = list(range(1, n + 1))
        p2 = p1[:]
        rng.shuffle(p1)
        rng.shuffle(p2)
        g1, g2 = genome(p1, capacity=min(3, n)), genome(p2, capacity=min(3, n))
        a, b = crossover_cx(g1, g2)
        # RoutePlan construction validates; reaching here means closure held.
        assert len(a.plan.perm) == n and len(b.plan.perm) == n
        o = crossover_ox(g1, g2, random.Random(rng.random()))
        p = crossover_pmx(g1, g2, random.Random(rng.random()))
        assert sorted(o.plan.perm) == list(range(1, n + 1))
        assert sorted(p.plan.perm) == list(range(1, n + 1))


def test_crossover_requires_same_length():
    with pytest.raises(ValueError):
        crossover_cx(genome((1, 2, 3)), genome((2, 1)))


def test_mutate_swap_probability_zero_is_identity():
    g = genome(P1)
    rng = random.Random(0)
    for _ in range(20):
        assert mutate_swap(g, 0.0, rng) is g


def test_mutate_swap_changes_two_positions():
    g = genome(P1)
    for s in range(30):
        mutant = mutate_swap(g, 1.0, random.Random(s))
        diff = [i for i in range(8) if mutant.plan.perm[i] != P1[i]]
        assert len(diff) == 2
        assert sorted(mutant.plan.perm) == sorted(P1)
        assert mutant.cached_weight is None


def weight_of(inst, perm, c):
    return route_weight(inst, RoutePlan(perm=tuple(perm), capacity=c))


def test_move_deltas_match_recompute():
    rng = random.Random(3)
    for _ in range(400):
        n = rng.randrange(3, 14)
        inst = random_instance(n, rng.randrange(10**6))
        c = rng.randrange(1, n)
        perm = list(range(1, n))
        rng.shuffle(perm)
        m = len(perm)
        i = rng.randrange(m)
        j = rng.randrange(m)
        if i == j:
            continue
        i, j = min(i, j), max(i, j)
        base = weight_of(inst, perm, c)

        swapped = perm[:]
        swapped[i], swapped[j] = swapped[j], swapped[i]
        assert _delta_swap(perm, inst.weights, c, i, j) == weight_of(inst, swapped, c) - base

        reversed_ = perm[:]
        reversed_[i:j + 1] = reversed_[i:j + 1][::-1]
        assert _delta_reversal(perm, inst.weights, c, i, j) == weight_of(inst, reversed_, c) - base


def test_sa_walk_bookkeeping_and_improvement():
    for seed in range(20):
        inst = random_instance(12, seed)
        c = 4
        perm = tuple(range(1, 12))
        w0 = weight_of(inst, perm, c)
        out, w = _sa_walk(perm, w0, inst.weights, c, random.Random(seed), 120, 50.0, 0.9)
        assert w == weight_of(inst, out, c)
        assert w <= w0


def test_sa_zero_temperature_is_descent():
    inst = random_instance(10, 9)
    perm = tuple(range(1, 10))
    w0 = weight_of(inst, perm, 3)
    out, w = _sa_walk(perm, w0, inst.weights, 3, random.Random(1), 200, 0.0, 0.95)
    assert w <= w0
    assert w == weight_of(inst, out, 3)


def test_local_search_never_worsens():
    inst = random_instance(15, 2)
    params = MemeticParams(population_size=4, sa_steps=80, seed=0)
    for s in range(10):
        g = evaluate(inst, genome(random.Random(s).sample(range(1, 15), 14), capacity=4))
        polished = local_search_sa(g, inst, params, stream(0, "unit", s))
        assert polished.cached_weight <= g.cached_weight
        assert polished.cached_weight == route_weight(inst, polished.plan)


def test_population_sorted_and_requires_weights():
    inst = random_instance(6, 1)
    g1 = evaluate(inst, genome((1, 2, 3, 4, 5), capacity=2))
    g2 = evaluate(inst, genome((5, 4, 3, 2, 1), capacity=2))
    pop = Population(members=(g2, g1))
    weights = [g.cached_weight for g in pop.members]
    assert weights == sorted(weights)
    with pytest.raises(ValueError):
        Population(members=(genome((1, 2, 3)),))


def test_select_truncate_keeps_best_and_is_idempotent():
    inst = random_instance(7, 5)
    pop = random_population(inst, 2, 12, stream(1, "init"))
    cut = select_truncate(pop, 5)
    assert len(cut.members) == 5
    assert cut.members == pop.members[:5]
    assert select_truncate(cut, 5).members == cut.members
    with pytest.raises(ValueError):
        select_truncate(pop, 0)


def test_random_population_is_deterministic():
    inst = random_instance(9, 3)
    a = random_population(inst, 3, 8, stream(7, "init"))
    b = random_population(inst, 3, 8, stream(7, "init"))
    assert [g.plan.perm for g in a.members] == [g.plan.perm for g in b.members]
    assert all(g.cached_weight == route_weight(inst, g.plan) for g in a.members)


def test_step_preserves_size_and_never_worsens_best():
    inst = random_instance(14, 8)
    params = MemeticParams(population_size=10, iterations=1, sa_steps=30, seed=4)
    pop = random_population(inst, 4, 10, stream(4, 0, 0, "init"))
    best = pop.best().cached_weight
    for t in range(1, 31):
        pop = step(pop, inst, params, RngStreams(4, 0, t))
        assert len(pop.members) == 10
        assert pop.best().cached_weight <= best
        best = pop.best().cached_weight


def test_step_is_deterministic():
    inst = random_instance(10, 11)
    params = MemeticParams(population_size=6, sa_steps=20, seed=9)
    pop = random_population(inst, 3, 6, stream(9, 0, 0, "init"))
    a = step(pop, inst, params, RngStreams(9, 0, 1))
    b = step(pop, inst, params, RngStreams(9, 0, 1))
    assert [g.plan.perm for g in a.members] == [g.plan.perm for g in b.members]


def test_step_with_all_operators():
    inst = random_instance(12, 13)
    for kind in ("cx", "ox", "pmx"):
        params = MemeticParams(
            population_size=8, crossover_kind=kind, sa_steps=15, seed=2, pr_cross=0.3
        )
        pop = random_population(inst, 3, 8, stream(2, 0, 0, "init"))
        out = step(pop, inst, params, RngStreams(2, 0, 1))
        assert len(out.members) == 8
        assert all(route_weight(inst, g.plan) == g.cached_weight for g in out.members)
