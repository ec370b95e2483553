"""Point and region primitives shared by every model."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Position3D:
    """A node location; ``h`` is the height above ground in meters."""

    x: float
    y: float
    h: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite horizontal coordinate: ({self.x}, {self.y})")
        if not math.isfinite(self.h) or self.h < 0.0:
            raise ValueError(f"height must be finite and >= 0, got {self.h}")


@dataclass(frozen=True)
class RegionSpec:
    width: float
    depth: float

    def __post_init__(self):
        if not (self.width > 0.0 and self.depth > 0.0):
            raise ValueError(f"region extents must be positive, got {self.width} x {self.depth}")

    @property
    def center(self) -> tuple[float, float]:
        return (self.width / 2.0, self.depth / 2.0)

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.width and 0.0 <= y <= self.depth


def horizontal_distance(p: Position3D, q: Position3D) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def distance_3d(p: Position3D, q: Position3D) -> float:
    return math.sqrt((p.x - q.x) ** 2 + (p.y - q.y) ** 2 + (p.h - q.h) ** 2)
