"""Analytical time, cost, and speedup model for the island algorithm.

Models a host driving g accelerator-like workers, each evolving a
population of c individuals on an instance of size n for i iterations,
with e genomes broadcast to every other worker each f iterations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def _log(x: float, base: float) -> float:
    if base == 2.0:
        return math.log2(x)
    return math.log(x) / math.log(base)


@dataclass(frozen=True)
class CostModelInput:
    """Symbols of the analytical model; coefficients calibrate the O(n) terms."""

    g: int = 1
    c: int = 64
    n: int = 100
    i: int = 100
    f: int = 50
    e: int = 2
    pr_cross: float = 0.03125
    pr_mut: float = 0.15
    cross_coeff: float = 1.0
    mut_coeff: float = 1.0
    eval_coeff: float = 1.0

    def __post_init__(self):
        for field in ("g", "c", "n", "i", "f"):
            if getattr(self, field) < 1:
                raise ValueError(f"{field} must be positive")
        if self.e < 0:
            raise ValueError("e must be nonnegative")
        for field in ("pr_cross", "pr_mut"):
            if not 0.0 <= getattr(self, field) <= 1.0:
                raise ValueError(f"{field} must be in [0, 1]")


def time_estimate(inp: CostModelInput, mode: str = "full", log_base: float = 2.0) -> float:
    """Wall-time estimate under the model; constant factors normalized to 1.

    mode="full" evaluates the component sum

        T = T_init + i * (T_cross + T_mut + T_eval + T_i_sel) + (i/f) * T_o_sel

    with T_init = n, T_cross = pr_cross * cross(n) * binom(c,2) / c,
    T_mut = pr_mut * mut(n), T_eval = eval(n),
    T_i_sel = log(c + binom(c,2) * pr_cross), T_o_sel = log(c + e*(g-1)).

    mode="simplified" evaluates the coarse bound i*n + (i/f) * n * log(c+g),
    which treats migration volume and mutation probability as constants.
    """
    g, c, n, i, f = inp.g, inp.c, inp.n, inp.i, inp.f
    if mode == "simplified":
        return i * n + (i / f) * n * _log(c + g, log_base)
    if mode != "full":
        raise ValueError(f"unknown mode {mode!r}")
    pairs = math.comb(c, 2)
    t_init = float(n)
    t_cross = inp.pr_cross * inp.cross_coeff * n * pairs / c
    t_mut = inp.pr_mut * inp.mut_coeff * n
    t_eval = inp.eval_coeff * n
    t_i_sel = _log(c + pairs * inp.pr_cross, log_base)
    t_o_sel = _log(c + inp.e * (g - 1), log_base)
    return t_init + i * (t_cross + t_mut + t_eval + t_i_sel) + (i / f) * t_o_sel


def cost_estimate(inp: CostModelInput, mode: str = "full", log_base: float = 2.0) -> float:
    """Cost = work across all processors.

    mode="full" is g * c * time_estimate. mode="simplified" is the coarse
    bound c * (g*i*n + (i/f) * g^2).
    """
    if mode == "simplified":
        return inp.c * (inp.g * inp.i * inp.n + (inp.i / inp.f) * inp.g ** 2)
    return inp.g * inp.c * time_estimate(inp, mode=mode, log_base=log_base)


def speedup(g: int, f: float = 50.0, log_base: float = 2.0) -> float:
    """Theoretical speedup of g workers under the equal-total-work protocol.

        S(g) = g / (1 + log(g) / f)

    S(1) == 1 exactly; sublinear for g >= 2 because migration sorting
    grows with g while the sequential baseline has no migration at all.
    """
    if g < 1:
        raise ValueError(f"g must be >= 1, got {g}")
    if f <= 0:
        raise ValueError(f"f must be positive, got {f}")
    return g / (1.0 + _log(g, log_base) / f)


def speedup_curve(g_max: int, f: float = 50.0, log_base: float = 2.0) -> list[tuple[int, float]]:
    """Tabulate (g, S(g)) for g = 1..g_max, ready for plotting."""
    if g_max < 1:
        raise ValueError(f"g_max must be >= 1, got {g_max}")
    return [(g, speedup(g, f=f, log_base=log_base)) for g in range(1, g_max + 1)]
