"""Exact solver for capacity 2 via reduction to minimum-weight perfect matching.

Two reductions compose: first all base-incident weights are folded into the
client-client edges (each trip triangle base-u-v costs exactly the new edge
u-v), then the base is dropped, leaving a perfect-matching problem on the
clients. The matching kernel is an exact bitmask dynamic program.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import BaseCycleCover, Instance, cover_weight
from .validation import as_weight_matrix, weights_as_tuples


@dataclass(frozen=True)
class MatchingProblem:
    """Complete graph on an even number of vertices with symmetric weights."""

    m: int
    weights: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.m < 2 or self.m % 2 != 0:
            raise ValueError(f"vertex count must be even and >= 2, got {self.m}")
        W = as_weight_matrix(self.weights)
        if W.shape[0] != self.m:
            raise ValueError(f"m={self.m} does not match matrix of size {W.shape[0]}")


@dataclass(frozen=True)
class Matching:
    """Perfect matching as a sorted list of sorted vertex pairs."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted(tuple(sorted((int(a), int(b)))) for a, b in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        seen = set()
        for a, b in pairs:
            if a == b or a in seen or b in seen:
                raise ValueError("matching pairs must be disjoint")
            seen.update((a, b))


def matching_weight(prob: MatchingProblem, matching: Matching) -> int:
    W = prob.weights
    return sum(W[a][b] for a, b in matching.pairs)


def reduce_to_zero_base(inst: Instance) -> Instance:
    """Fold base-incident weights into client edges.

    Returns an instance over the same vertices where
    w'(u, v) = w(0, u) + w(u, v) + w(v, 0) for clients u != v and every
    base-incident edge has weight 0. The trip 0-u-v-0 in the original graph
    costs exactly w'(u, v).
    """
    W = np.array(inst.weights, dtype=np.int64)
    base_row = W[0]
    Wp = W + base_row[None, :] + base_row[:, None]
    Wp[0, :] = 0
    Wp[:, 0] = 0
    np.fill_diagonal(Wp, 0)
    return Instance(name=f"{inst.name}#zero-base", n=inst.n, weights=weights_as_tuples(Wp))


def reduce_to_matching(inst: Instance) -> MatchingProblem:
    """Drop the base from a zero-base instance, keeping the client submatrix.

    Requires an even client count; pairing up all clients is exactly a
    perfect matching on this submatrix.
    """
    W = inst.weights
    if any(W[0][j] != 0 for j in range(inst.n)):
        raise ValueError("expected zero weights on all base-incident edges")
    m = inst.num_clients
    if m % 2 != 0:
        raise ValueError(f"no perfect matching possible: odd client count {m}")
    sub = tuple(tuple(W[i][j] for j in range(1, inst.n)) for i in range(1, inst.n))
    return MatchingProblem(m=m, weights=sub)


def min_perfect_matching(prob: MatchingProblem, max_vertices: int = 22) -> Matching:
    """Exact minimum-weight perfect matching by dynamic programming.

    State = set of unmatched vertices; the lowest unmatched vertex is paired
    with every candidate partner. O(2^m * m) time, so refuse beyond
    max_vertices. Ties break to the lexicographically smallest pair list,
    achieved by preferring the smallest partner at every level.
    """
    m = prob.m
    if m > max_vertices:
        raise ValueError(
            f"matching kernel is limited to {max_vertices} vertices, got {m}; "
            "raise max_vertices explicitly if you accept the cost"
        )
    W = prob.weights
    full = (1 << m) - 1
    INF = float("inf")
    best = [INF] * (full + 1)
    best[0] = 0
    for mask in range(1, full + 1):
        if mask.bit_count() % 2 != 0:
            continue
        u = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << u)
        row = W[u]
        b = INF
        v_bits = rest
        while v_bits:
            v = (v_bits & -v_bits).bit_length() - 1
            v_bits &= v_bits - 1
            val = row[v] + best[rest ^ (1 << v)]
            if val < b:
                b = val
        best[mask] = b
    pairs = []
    mask = full
    while mask:
        u = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << u)
        row = W[u]
        v_bits = rest
        while v_bits:
            v = (v_bits & -v_bits).bit_length() - 1
            v_bits &= v_bits - 1
            if row[v] + best[rest ^ (1 << v)] == best[mask]:
                pairs.append((u, v))
                mask = rest ^ (1 << v)
                break
        else:
            raise AssertionError("matching reconstruction failed")
    return Matching(pairs=tuple(pairs))


def solve_capacity2(inst: Instance, max_vertices: int = 22) -> tuple[BaseCycleCover, int]:
    """Optimal capacity-2 plan: every trip serves exactly two clients.

    Composes the two reductions with the matching kernel, then rebuilds the
    trip cycles 0-x-y-0 from the matched pairs. The returned weight is
    measured in the original instance.
    """
    m = inst.num_clients
    if m % 2 != 0:
        raise ValueError(
            f"capacity-2 solver needs an even client count, got {m}; "
            "one client would be left without a trip partner"
        )
    zero_base = reduce_to_zero_base(inst)
    prob = reduce_to_matching(zero_base)
    matching = min_perfect_matching(prob, max_vertices=max_vertices)
    cycles = tuple((a + 1, b + 1) for a, b in matching.pairs)
    cover = BaseCycleCover(cycles=cycles)
    return cover, cover_weight(inst, cover)
