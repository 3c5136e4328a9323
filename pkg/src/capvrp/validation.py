"""Input validation helpers shared by the core types, estimators, and CLI."""

from __future__ import annotations

import numpy as np


def as_weight_matrix(X, allow_nonzero_diagonal: bool = False) -> np.ndarray:
    """Validate a square symmetric nonnegative integer weight matrix.

    Accepts anything np.asarray understands. Returns an int64 array.
    Row/column 0 is the base vertex by convention.
    """
    W = np.asarray(X)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError(f"weight matrix must be square, got shape {W.shape}")
    if W.shape[0] < 2:
        raise ValueError("instance needs at least 2 vertices")
    if W.dtype.kind == "f":
        if not np.all(np.isfinite(W)):
            raise ValueError("weight matrix contains non-finite values")
        rounded = np.rint(W)
        if not np.allclose(W, rounded, rtol=0, atol=1e-9):
            raise ValueError("weights must be integers")
        W = rounded
    W = W.astype(np.int64)
    if np.any(W < 0):
        raise ValueError("weights must be nonnegative")
    if not np.array_equal(W, W.T):
        raise ValueError("weight matrix must be symmetric")
    if not allow_nonzero_diagonal and np.any(np.diagonal(W) != 0):
        raise ValueError("weight matrix diagonal must be zero")
    return W


def weights_as_tuples(W: np.ndarray) -> tuple[tuple[int, ...], ...]:
    """Convert a validated matrix to nested tuples of Python ints."""
    return tuple(tuple(int(x) for x in row) for row in W)


def check_capacity(capacity: int, n: int) -> int:
    """Check 1 <= capacity <= n-1 for an n-vertex instance."""
    capacity = int(capacity)
    if not 1 <= capacity <= n - 1:
        raise ValueError(f"capacity must be in [1, {n - 1}], got {capacity}")
    return capacity


def check_client_permutation(perm, n_clients: int) -> tuple[int, ...]:
    """Check that perm is a permutation of the clients 1..n_clients."""
    perm = tuple(int(x) for x in perm)
    if len(perm) != n_clients or set(perm) != set(range(1, n_clients + 1)):
        raise ValueError(f"expected a permutation of 1..{n_clients}, got {perm}")
    return perm


def check_probability(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")
    return value
