"""Problem instances and solution forms for fixed-capacity routing.

An instance is a complete weighted undirected graph with vertex 0 as the
base. A solution is either a RoutePlan (permutation of clients cut into
consecutive trips of at most `capacity` clients) or a BaseCycleCover (the
explicit set of trip cycles, all through the base).
"""

from __future__ import annotations

from dataclasses import dataclass

from .validation import (
    as_weight_matrix,
    check_capacity,
    check_client_permutation,
    weights_as_tuples,
)


@dataclass(frozen=True)
class Instance:
    """Complete weighted graph; vertex 0 is the base, 1..n-1 are clients."""

    name: str
    n: int
    weights: tuple[tuple[int, ...], ...]
    base: int = 0

    def __post_init__(self):
        if self.base != 0:
            raise ValueError("base vertex is normalized to index 0")
        W = as_weight_matrix(self.weights)
        if W.shape[0] != self.n:
            raise ValueError(f"n={self.n} does not match matrix of size {W.shape[0]}")

    @classmethod
    def from_matrix(cls, matrix, name: str = "instance") -> "Instance":
        W = as_weight_matrix(matrix)
        return cls(name=name, n=W.shape[0], weights=weights_as_tuples(W))

    @property
    def num_clients(self) -> int:
        return self.n - 1

    def clients(self) -> range:
        return range(1, self.n)

    def mean_edge_weight(self) -> float:
        """Mean over distinct vertex pairs, used as a temperature scale."""
        total = 0
        count = 0
        for i in range(self.n):
            row = self.weights[i]
            for j in range(i + 1, self.n):
                total += row[j]
                count += 1
        return total / count


@dataclass(frozen=True)
class RoutePlan:
    """Permutation of the clients plus the trip capacity."""

    perm: tuple[int, ...]
    capacity: int

    def __post_init__(self):
        perm = check_client_permutation(self.perm, len(self.perm))
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "capacity", check_capacity(self.capacity, len(perm) + 1))


@dataclass(frozen=True)
class BaseCycleCover:
    """Trip cycles through the base; sequence <u1..uk> means 0,u1,..,uk,0."""

    cycles: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cycles = tuple(tuple(int(x) for x in c) for c in self.cycles)
        object.__setattr__(self, "cycles", cycles)
        seen = set()
        for c in cycles:
            if not c:
                raise ValueError("cover contains an empty cycle")
            for u in c:
                if u in seen:
                    raise ValueError(f"client {u} appears in more than one cycle")
                seen.add(u)


def _check_client(inst: Instance, u: int) -> None:
    if not 1 <= u < inst.n:
        raise ValueError(f"invalid vertex index {u} for instance of size {inst.n}")


def cycle_weight(inst: Instance, cycle) -> int:
    """Weight of the closed trip base -> cycle[0] -> ... -> cycle[-1] -> base.

    A single-client trip costs 2*w(0, u): the truck goes out and comes back.
    """
    cycle = tuple(cycle)
    if not cycle:
        raise ValueError("cycle must be nonempty")
    for u in cycle:
        _check_client(inst, u)
    W = inst.weights
    if len(cycle) == 1:
        return 2 * W[0][cycle[0]]
    total = W[0][cycle[0]] + W[cycle[-1]][0]
    for a, b in zip(cycle, cycle[1:]):
        total += W[a][b]
    return total


def cover_weight(inst: Instance, cover: BaseCycleCover) -> int:
    """Sum of cycle weights; the cover must partition the clients."""
    seen = []
    for c in cover.cycles:
        seen.extend(c)
    if sorted(seen) != list(inst.clients()):
        raise ValueError("cover does not partition the clients of the instance")
    return sum(cycle_weight(inst, c) for c in cover.cycles)


def blocks_of(plan: RoutePlan) -> list[tuple[int, ...]]:
    """Consecutive chunks of the permutation; the last may be shorter."""
    c = plan.capacity
    perm = plan.perm
    return [perm[i:i + c] for i in range(0, len(perm), c)]


def route_weight(inst: Instance, plan: RoutePlan) -> int:
    """Total weight of all trips induced by the plan. The fitness objective."""
    if len(plan.perm) != inst.num_clients:
        raise ValueError(
            f"plan has {len(plan.perm)} clients, instance has {inst.num_clients}"
        )
    return sum(cycle_weight(inst, block) for block in blocks_of(plan))


def cover_from_plan(plan: RoutePlan) -> BaseCycleCover:
    """The cycle cover whose cycles are exactly the plan's trips."""
    return BaseCycleCover(cycles=tuple(blocks_of(plan)))
