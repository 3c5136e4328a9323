import os
from pathlib import Path

import numpy as np
import pytest

from capvrp import Instance


def random_instance(n, seed, high=100):
    """Random symmetric integer instance; not Euclidean, just valid."""
    rng = np.random.default_rng(seed)
    W = rng.integers(1, high, size=(n, n))
    W = np.triu(W, 1)
    W = W + W.T
    return Instance.from_matrix(W, name=f"rand-{n}-{seed}")


def tsplib_corpus_dir():
    """Directory holding real TSPLIB files, if the user provided one."""
    env = os.environ.get("CAPVRP_TSPLIB_DIR")
    if env:
        return Path(env)
    return Path(__file__).parent / "data" / "tsplib"


def corpus_path(name):
    return tsplib_corpus_dir() / f"{name}.tsp"


@pytest.fixture
def tmp_out_env(monkeypatch, tmp_path):
    monkeypatch.setenv("CAPVRP_OUT_DIR", str(tmp_path))
    return tmp_path
