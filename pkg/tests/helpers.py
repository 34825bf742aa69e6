"""Independent oracles shared by unit and acceptance tests.

Everything here is deliberately written from scratch against the decision
rules, not by calling the package's own code paths.
"""

from __future__ import annotations

import math
from collections import deque

from fearsim.fuzzy import NeighborEntry


def brute_force_next_hop(
    entries: list[NeighborEntry],
    energy_scale: float,
    max_hop: int,
    strict: bool = False,
) -> int | None:
    """Literal re-evaluation of the grading pipeline plus argmax.

    Grade energies, take the mean of the live grades, cut below-mean
    entries, score survivors by grade x hop-grade, pick the best with
    lowest-id ties.  None when nothing scores above zero.
    """
    live = [e for e in entries if e.energy_level > 0]
    if not live:
        return None
    grades = {}
    for e in live:
        g = energy_scale * e.energy_level
        grades[e.neighbor_id] = min(1.0, max(0.0, g))
    alpha = sum(grades.values()) / len(grades)
    # the true mean lies inside the grade hull; undo float spill
    alpha = min(max(alpha, min(grades.values())), max(grades.values()))

    best_id = None
    best_score = 0.0
    for e in live:
        g = grades[e.neighbor_id]
        inside = g > alpha if strict else g >= alpha
        if not inside:
            continue
        hop_grade = 1.0 - e.hop_count / max_hop
        hop_grade = min(1.0, max(0.0, hop_grade))
        score = g * hop_grade
        if score > best_score or (
            score == best_score and score > 0.0 and e.neighbor_id < best_id
        ):
            best_id = e.neighbor_id
            best_score = score
    return best_id


def bfs_hops_from_positions(
    positions: dict[int, tuple[float, float]], radio_range: float, start: int
) -> dict[int, int]:
    """Hop distances from ``start`` on the disk graph the positions induce.

    Rebuilds the adjacency straight from coordinates so the check shares
    nothing with the engine's topology code.
    """
    ids = list(positions)
    neighbors: dict[int, list[int]] = {i: [] for i in ids}
    for idx, u in enumerate(ids):
        for v in ids[idx + 1 :]:
            if math.dist(positions[u], positions[v]) <= radio_range:
                neighbors[u].append(v)
                neighbors[v].append(u)
    hops = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in neighbors[u]:
            if v not in hops:
                hops[v] = hops[u] + 1
                queue.append(v)
    return hops
