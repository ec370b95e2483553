"""Reproducible random streams keyed by (seed, stream_id)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_U64 = 2**64


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < _U64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.stream_id < 0:
            raise ValueError("stream_id must be non-negative")

    def generator(self) -> np.random.Generator:
        """A fresh generator; every call restarts the same draw sequence."""
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,)))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")
