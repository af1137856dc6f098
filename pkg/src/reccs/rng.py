"""Named, seeded random streams.

A stream is fully determined by ``(seed, stream_id)``: the pair is hashed
with SHA-256 into a 128-bit state that seeds both a numpy ``Generator``
(PCG64, for vectorised draws) and a ``random.Random`` (for scalar draws in
tight Python loops). Both generators are platform independent.
"""

from __future__ import annotations

import hashlib
import random

import numpy as np


def derive_seed(seed: int, stream_id: str) -> int:
    digest = hashlib.sha256(f"{int(seed)}/{stream_id}".encode()).digest()
    return int.from_bytes(digest[:16], "big")


class RngStream:
    def __init__(self, seed: int, stream_id: str = "root"):
        if seed is None:
            raise ValueError("a seed is required")
        self.seed = int(seed)
        self.stream_id = stream_id
        state = derive_seed(self.seed, stream_id)
        self.np = np.random.Generator(np.random.PCG64(state))
        self.py = random.Random(state)

    def child(self, name: str) -> RngStream:
        return RngStream(self.seed, f"{self.stream_id}/{name}")

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id!r})"
