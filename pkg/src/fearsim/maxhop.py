"""Route-length estimation for the hop-grade normalizer.

Three static estimators derive a constant bound from terrain geometry or
node count; the dynamic method re-reads the neighbor table before every
forwarding decision.  Static bounds come with a clamp so hop counts above
the bound are treated as sitting exactly on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import EmptyNeighborSet, InvalidNodeCount
from .fuzzy import NeighborEntry


@dataclass(frozen=True, slots=True)
class TerrainConfig:
    """Rectangular deployment area and the shared radio range, in meters."""

    x_extent: float
    y_extent: float
    radio_range: float

    def __post_init__(self):
        if self.x_extent <= 0 or self.y_extent <= 0:
            raise ValueError("terrain extents must be positive")
        if self.radio_range <= 0:
            raise ValueError("radio_range must be positive")
        if self.radio_range > self.diagonal:
            raise ValueError("radio_range cannot exceed the terrain diagonal")

    @property
    def diagonal(self) -> float:
        return math.hypot(self.x_extent, self.y_extent)


class MaxHopMethod(str, Enum):
    """How the route-length bound is obtained."""

    DIAGONAL = "diagonal"        # terrain diagonal / radio range
    HALF_RANGE = "half-range"    # terrain diagonal / half the radio range
    NODE_BOUND = "node-bound"    # longest loop-free chain, N - 2
    DYNAMIC = "dynamic"          # biggest table hop count + 1, per decision


def static_diagonal(terrain: TerrainConfig) -> int:
    """Hops to cross the terrain diagonal at one full radio range per hop.

    Rounded up so the estimate never undercounts the longest path.
    """
    return max(1, math.ceil(terrain.diagonal / terrain.radio_range))


def static_half_range(terrain: TerrainConfig) -> int:
    """Like static_diagonal but assumes half-range progress per hop."""
    return max(1, math.ceil(terrain.diagonal / (terrain.radio_range / 2.0)))


def static_node_bound(n: int) -> int:
    """Longest possible loop-free route in an n-node network."""
    if n < 3:
        raise InvalidNodeCount(f"node bound needs at least 3 nodes, got {n}")
    return n - 2


def dynamic_maxhop(table: Sequence[NeighborEntry]) -> int:
    """Biggest hop count in the table plus one.

    Recomputed before every forwarding decision, so every tabled neighbor
    keeps a strictly positive hop grade.
    """
    if not table:
        raise EmptyNeighborSet("dynamic_maxhop needs a nonempty neighbor table")
    return max(e.hop_count for e in table) + 1


def effective_hop(h: int, max_hop: int, clamp_enabled: bool) -> int:
    """Hop count as seen by the grader; static strategies cap it at max_hop."""
    if clamp_enabled:
        return min(h, max_hop)
    return h


def resolve_static(method: MaxHopMethod, terrain: TerrainConfig, node_count: int) -> int:
    """Evaluate a static method; DYNAMIC has no precomputed value."""
    if method is MaxHopMethod.DIAGONAL:
        return static_diagonal(terrain)
    if method is MaxHopMethod.HALF_RANGE:
        return static_half_range(terrain)
    if method is MaxHopMethod.NODE_BOUND:
        return static_node_bound(node_count)
    raise ValueError("the dynamic method carries no static value")
