"""Exhaustive reference solvers, used as ground truth in tests.

These enumerate every solution inside hard size guards and refuse larger
inputs outright. The pruned route enumerator skips symmetric duplicates
(trip order and trip direction do not change the weight) but is verified
against the unpruned one in tests.
"""

from __future__ import annotations

import itertools

from .exact2 import Matching, MatchingProblem
from .instance import Instance, RoutePlan
from .validation import check_capacity


def _route_weight(W, perm, c) -> int:
    total = 0
    for k in range(0, len(perm), c):
        block = perm[k:k + c]
        if len(block) == 1:
            total += 2 * W[0][block[0]]
        else:
            total += W[0][block[0]] + W[block[-1]][0]
            for a, b in zip(block, block[1:]):
                total += W[a][b]
    return total


def _orderings(block):
    """All orderings of a client set up to reversal (first < last)."""
    items = tuple(sorted(block))
    if len(items) == 1:
        yield items
        return
    for p in itertools.permutations(items):
        if p[0] < p[-1]:
            yield p


def _partitions(items, c):
    """Partitions of sorted `items` into blocks of size c, unordered."""
    if not items:
        yield ()
        return
    head, rest = items[0], items[1:]
    for companions in itertools.combinations(rest, c - 1):
        taken = set(companions)
        left = tuple(x for x in rest if x not in taken)
        block = (head,) + companions
        for tail in _partitions(left, c):
            yield (block,) + tail


def brute_force_best_route(inst: Instance, capacity: int, max_clients: int = 10) -> tuple[RoutePlan, int]:
    """Exact optimum by enumeration of all trip structures.

    Returns the lexicographically smallest permutation among the minimizers.
    Trips are unordered and direction-free, so only one representative per
    equivalence class is evaluated; the representative permutation is
    rebuilt as: each full block in its lex-min orientation, full blocks
    sorted, the short block (if any) last.
    """
    m = inst.num_clients
    if m > max_clients:
        raise ValueError(
            f"refusing brute force on {m} clients (limit {max_clients}); "
            "the search is factorial in the client count"
        )
    c = check_capacity(capacity, inst.n)
    W = inst.weights
    clients = tuple(range(1, inst.n))
    r = m % c

    best_w = None
    best_perm = None
    short_sets = itertools.combinations(clients, r) if r else [()]
    for short_set in short_sets:
        short_members = set(short_set)
        remaining = tuple(x for x in clients if x not in short_members)
        short_ords = list(_orderings(short_set)) if r else [()]
        for short_ord in short_ords:
            if short_ord:
                if len(short_ord) == 1:
                    w_short = 2 * W[0][short_ord[0]]
                else:
                    w_short = W[0][short_ord[0]] + W[short_ord[-1]][0]
                    for a, b in zip(short_ord, short_ord[1:]):
                        w_short += W[a][b]
            else:
                w_short = 0
            for partition in _partitions(remaining, c):
                block_options = []
                for block in partition:
                    opts = []
                    for o in _orderings(block):
                        if len(o) == 1:
                            w = 2 * W[0][o[0]]
                        else:
                            w = W[0][o[0]] + W[o[-1]][0]
                            for a, b in zip(o, o[1:]):
                                w += W[a][b]
                        opts.append((o, w))
                    block_options.append(opts)
                for combo in itertools.product(*block_options):
                    total = w_short + sum(w for _, w in combo)
                    if best_w is not None and total > best_w:
                        continue
                    perm = tuple(itertools.chain(*sorted(o for o, _ in combo))) + short_ord
                    if best_w is None or total < best_w or perm < best_perm:
                        best_w = total
                        best_perm = perm
    return RoutePlan(perm=best_perm, capacity=c), best_w


def brute_force_best_route_plain(inst: Instance, capacity: int, max_clients: int = 7) -> tuple[RoutePlan, int]:
    """Unpruned reference: every permutation, in lexicographic order."""
    m = inst.num_clients
    if m > max_clients:
        raise ValueError(
            f"refusing plain brute force on {m} clients (limit {max_clients})"
        )
    c = check_capacity(capacity, inst.n)
    W = inst.weights
    best_w = None
    best_p = None
    for p in itertools.permutations(range(1, inst.n)):
        w = _route_weight(W, p, c)
        if best_w is None or w < best_w:
            best_w, best_p = w, p
    return RoutePlan(perm=best_p, capacity=c), best_w


def brute_force_matching(prob: MatchingProblem, max_vertices: int = 12) -> tuple[Matching, int]:
    """Exact minimum perfect matching by enumerating all pairings.

    There are (m-1)!! pairings; lex-first enumeration with strict
    improvement keeps the lexicographically smallest minimizer.
    """
    m = prob.m
    if m > max_vertices:
        raise ValueError(
            f"refusing brute force matching on {m} vertices (limit {max_vertices}); "
            "the pairing count is (m-1)!!"
        )
    W = prob.weights
    best: list = [None, None]

    def rec(remaining, pairs, acc):
        if best[0] is not None and acc >= best[0]:
            return
        if not remaining:
            best[0] = acc
            best[1] = tuple(pairs)
            return
        u = remaining[0]
        for idx in range(1, len(remaining)):
            v = remaining[idx]
            rec(
                remaining[1:idx] + remaining[idx + 1:],
                pairs + [(u, v)],
                acc + W[u][v],
            )

    rec(tuple(range(m)), [], 0)
    return Matching(pairs=best[1]), best[0]
