"""Fuzzy next-hop decision math.

A neighbor table is graded on two axes: remaining energy (scaled into
[0, 1] by ``energy_scale``) and hop distance to the sink (normalized by a
route-length estimate).  Neighbors whose energy grade falls below the
table mean are cut, and the surviving neighbor with the highest
energy-grade x hop-grade product wins.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .errors import EmptyNeighborSet, InvalidMaxHop


@dataclass(frozen=True, slots=True)
class NeighborEntry:
    """One row of a node's neighbor table."""

    neighbor_id: int
    energy_level: float
    hop_count: int


@dataclass(frozen=True, slots=True)
class FuzzyParams:
    """Tuning knobs of the decision maker.

    ``energy_scale`` maps an energy level onto a [0, 1] grade; it must not
    exceed 1 / E_max for the scenario's maximum initial energy.  With
    ``strict_gate`` the cut keeps only grades strictly above the mean,
    which empties the candidate set when all neighbors hold equal energy;
    the default keeps grades equal to the mean as well.
    """

    energy_scale: float
    strict_gate: bool = False

    def __post_init__(self):
        if self.energy_scale <= 0:
            raise ValueError("energy_scale must be positive")


@dataclass(frozen=True, slots=True)
class CandidateSet:
    """Neighbors that survived the energy cut, plus the threshold used."""

    entries: tuple[NeighborEntry, ...]
    alpha: float


class DecisionScore(NamedTuple):
    neighbor_id: int
    score: float


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else (1.0 if x > 1.0 else x)


def energy_membership(e: float, params: FuzzyParams) -> float:
    """Grade an energy level into [0, 1]; saturates instead of rejecting."""
    return _clamp01(params.energy_scale * e)


def energy_threshold(grades: Sequence[float]) -> float:
    """Mean of the energy grades, used as the cut threshold.

    The float mean of equal grades can land an ulp outside their hull,
    which would empty the cut for an all-equal table; the true mean never
    leaves [min, max], so the result is clamped back into it.
    """
    if not grades:
        raise EmptyNeighborSet("cannot take the mean of zero grades")
    mean = sum(grades) / len(grades)
    return min(max(mean, min(grades)), max(grades))


def alpha_cut(table: Sequence[NeighborEntry], params: FuzzyParams) -> CandidateSet:
    """Drop neighbors whose energy grade falls below the table mean.

    Entries with energy <= 0 are removed before the mean is taken so dead
    neighbors cannot drag the threshold down.  When every entry is dead
    the candidate set is empty with a threshold of 0.
    """
    if not table:
        raise EmptyNeighborSet("alpha_cut needs a nonempty neighbor table")
    live = [e for e in table if e.energy_level > 0]
    if not live:
        return CandidateSet((), 0.0)
    grades = [energy_membership(e.energy_level, params) for e in live]
    alpha = energy_threshold(grades)
    if params.strict_gate:
        kept = tuple(e for e, g in zip(live, grades) if g > alpha)
    else:
        kept = tuple(e for e, g in zip(live, grades) if g >= alpha)
    return CandidateSet(kept, alpha)


def hop_membership(h: int, max_hop: int) -> float:
    """Grade a hop count into [0, 1]; 1 at the sink, 0 at max_hop or past it."""
    if max_hop < 1:
        raise InvalidMaxHop(f"max_hop must be >= 1, got {max_hop}")
    return _clamp01(1.0 - h / max_hop)


def decision_scores(
    table: Sequence[NeighborEntry], params: FuzzyParams, max_hop: int
) -> list[DecisionScore]:
    """Score every table entry; entries outside the energy cut score 0."""
    if not table:
        raise EmptyNeighborSet("decision_scores needs a nonempty neighbor table")
    if max_hop < 1:
        raise InvalidMaxHop(f"max_hop must be >= 1, got {max_hop}")
    cut = alpha_cut(table, params)
    kept = {e.neighbor_id for e in cut.entries}
    return [
        DecisionScore(
            e.neighbor_id,
            energy_membership(e.energy_level, params) * hop_membership(e.hop_count, max_hop)
            if e.neighbor_id in kept
            else 0.0,
        )
        for e in table
    ]


def select_next_hop(
    table: Sequence[NeighborEntry], params: FuzzyParams, max_hop: int
) -> Optional[int]:
    """Pick the neighbor with the greatest score.

    Ties break toward the lowest node id.  Returns None when every score
    is 0, meaning no neighbor is a viable next hop.
    """
    best_id: Optional[int] = None
    best_score = 0.0
    for neighbor_id, score in decision_scores(table, params, max_hop):
        if score > best_score or (score == best_score and score > 0.0 and neighbor_id < best_id):
            best_id = neighbor_id
            best_score = score
    return best_id
