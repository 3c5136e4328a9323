"""Deterministic random stream derivation.

Every stochastic component draws from its own random.Random seeded by a
hash of (master seed, island, iteration, role, indices). Results therefore
depend only on the configuration, never on worker scheduling.
"""

from __future__ import annotations

import hashlib
import random

_DOMAIN = b"capvrp-rng-v1"


def subseed(*parts) -> int:
    """Derive a 128-bit integer seed from a tuple of ints and strings."""
    h = hashlib.sha256(_DOMAIN)
    for p in parts:
        if isinstance(p, str):
            h.update(b"s" + p.encode("utf-8"))
        else:
            h.update(b"i" + int(p).to_bytes(16, "big", signed=True))
        h.update(b"|")
    return int.from_bytes(h.digest()[:16], "big")


def stream(*parts) -> random.Random:
    """A fresh random.Random for the given stream coordinates."""
    return random.Random(subseed(*parts))


class RngStreams:
    """Stream factory bound to (seed, island, iteration) coordinates."""

    def __init__(self, seed: int, island: int = 0, iteration: int = 0):
        self.seed = int(seed)
        self.island = int(island)
        self.iteration = int(iteration)

    def stream(self, role: str, *idx) -> random.Random:
        return stream(self.seed, self.island, self.iteration, role, *idx)

    def at(self, iteration: int) -> "RngStreams":
        return RngStreams(self.seed, self.island, iteration)
