"""Deterministic discrete-event core.

The radio is an idealized lossless broadcast disk: every transmission
reaches every neighbor within range after a constant latency (plus
optional seeded jitter), with no contention or loss.  Transmit budgets are
counted in integer payload bits so the energy ledger balances exactly;
the float ``energy`` seen by the protocol is derived from that integer.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import math
import random
from collections import Counter, deque
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from . import protocol
from .errors import ConfigError, FailedBeforeTransmit
from .maxhop import TerrainConfig
from .protocol import DataPacket, FloodBroadcast, NodeState, ProtocolConfig

log = logging.getLogger(__name__)

SINK_ID = 0


class Placement(str, Enum):
    RANDOM = "random"
    UNIFORM = "uniform"


class SinkPlacement(str, Enum):
    CENTER = "center"
    CORNER = "corner"


@dataclass(frozen=True)
class EnergyModel:
    """Per-node transmit budget and medium timing."""

    initial_energy: float = 1.0
    tx_cost_per_bit: float = 1.0 / (512 * 400)
    per_hop_latency: float = 0.01
    jitter: float = 0.0

    def __post_init__(self):
        if self.initial_energy <= 0 or self.tx_cost_per_bit <= 0:
            raise ValueError("initial_energy and tx_cost_per_bit must be positive")
        if self.per_hop_latency <= 0:
            raise ValueError("per_hop_latency must be positive")
        if self.jitter < 0:
            raise ValueError("jitter cannot be negative")

    def budget_bits(self) -> int:
        """Whole transmittable bits a node starts with; budgets quantize down."""
        return int(self.initial_energy / self.tx_cost_per_bit + 1e-9)

    def quantized_initial(self) -> float:
        """The usable starting energy, an exact multiple of the bit cost."""
        return self.budget_bits() * self.tx_cost_per_bit


@dataclass(frozen=True)
class Topology:
    """Node coordinates plus the symmetric unit-disk adjacency they induce."""

    positions: dict[int, tuple[float, float]]
    radio_range: float
    adjacency: dict[int, tuple[int, ...]]
    sink_id: int = SINK_ID
    warnings: tuple[str, ...] = ()


def _disk_adjacency(
    positions: dict[int, tuple[float, float]], radio_range: float
) -> dict[int, tuple[int, ...]]:
    """All pairs within radio_range, found via a coarse spatial grid."""
    cell = radio_range
    buckets: dict[tuple[int, int], list[int]] = {}
    for node_id, (x, y) in positions.items():
        buckets.setdefault((int(x // cell), int(y // cell)), []).append(node_id)

    adj: dict[int, list[int]] = {node_id: [] for node_id in positions}
    r2 = radio_range * radio_range
    for (cx, cy), members in buckets.items():
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                others = buckets.get((cx + dx, cy + dy))
                if others is None:
                    continue
                for i in members:
                    xi, yi = positions[i]
                    for j in others:
                        if j <= i:
                            continue
                        xj, yj = positions[j]
                        ddx = xi - xj
                        ddy = yi - yj
                        if ddx * ddx + ddy * ddy <= r2:
                            adj[i].append(j)
                            adj[j].append(i)
    return {node_id: tuple(sorted(neighbors)) for node_id, neighbors in adj.items()}


def _reachable_from(adjacency: dict[int, tuple[int, ...]], start: int) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def topology_from_positions(
    positions: dict[int, tuple[float, float]], radio_range: float, sink_id: int = SINK_ID
) -> Topology:
    """Topology over hand-placed coordinates; useful for traced scenarios."""
    adjacency = _disk_adjacency(positions, radio_range)
    return Topology(dict(positions), radio_range, adjacency, sink_id)


def place_nodes(
    count: int,
    terrain: TerrainConfig,
    placement: Placement,
    seed: int,
    sink_placement: SinkPlacement = SinkPlacement.CENTER,
) -> Topology:
    """Drop ``count`` nodes on the terrain and wire up the disk adjacency.

    Node 0 is the sink, pinned to the terrain center (or a corner).  Random
    placement draws the rest uniformly from a generator seeded with
    ``seed``; uniform placement fills a near-square grid of cell centers
    row by row, leaving any extra cells empty.
    """
    if count < 3:
        raise ConfigError(f"need at least 3 nodes, got {count}")
    if sink_placement is SinkPlacement.CORNER:
        sink_pos = (0.0, 0.0)
    else:
        sink_pos = (terrain.x_extent / 2.0, terrain.y_extent / 2.0)

    positions: dict[int, tuple[float, float]] = {SINK_ID: sink_pos}
    if placement is Placement.RANDOM:
        rng = random.Random(seed)
        for node_id in range(1, count):
            positions[node_id] = (
                rng.uniform(0.0, terrain.x_extent),
                rng.uniform(0.0, terrain.y_extent),
            )
    else:
        cols = math.ceil(math.sqrt(count))
        rows = math.ceil(count / cols)
        for node_id in range(1, count):
            cell_index = node_id - 1
            r, c = divmod(cell_index, cols)
            positions[node_id] = (
                (c + 0.5) * terrain.x_extent / cols,
                (r + 0.5) * terrain.y_extent / rows,
            )

    adjacency = _disk_adjacency(positions, terrain.radio_range)
    warnings = []
    unreachable = count - len(_reachable_from(adjacency, SINK_ID))
    if unreachable:
        msg = f"{unreachable} node(s) are disconnected from the sink and will never route"
        warnings.append(msg)
        log.warning(msg)
    return Topology(positions, terrain.radio_range, adjacency, SINK_ID, tuple(warnings))


# Event kinds, ordered in the heap by (time, seq) only.
_ARRIVAL = 0
_SOURCE = 1
_FLOOD = 2
_END = 3


class Simulation:
    """One scenario run: owns all node state, the queue and the counters."""

    def __init__(
        self,
        topology: Topology,
        proto: ProtocolConfig,
        energy: EnergyModel,
        payload_bits: int = 512,
        ttl: int = 24,
        refresh_period: Optional[float] = None,
        seed: int = 0,
    ):
        if payload_bits < 1:
            raise ConfigError("payload_bits must be at least 1")
        if ttl < 1:
            raise ConfigError("ttl must be at least 1")
        self.topology = topology
        self.proto = proto
        self.energy_model = energy
        self.payload_bits = payload_bits
        self.ttl0 = ttl
        self.refresh_period = refresh_period
        self.now = 0.0
        self.end_time: Optional[float] = None
        self.ended_early = False

        self._heap: list = []
        self._event_seq = itertools.count()
        self._packet_seq = itertools.count()
        self._jitter_rng = random.Random(seed ^ 0x5EED)
        self.rounds_initiated = 0

        budget = energy.budget_bits()
        initial = energy.quantized_initial()
        self.initial_bits = budget
        self.nodes: dict[int, NodeState] = {}
        for node_id in sorted(topology.positions):
            node = NodeState(
                id=node_id,
                position=topology.positions[node_id],
                bits_remaining=budget,
                energy=initial,
                protocol=proto.variant,
            )
            if node_id != topology.sink_id and budget < payload_bits:
                node.failed = True
                node.failure_time = 0.0
            self.nodes[node_id] = node
        self.nodes[topology.sink_id].own_hop = 0

        # Delivery bookkeeping, keyed by packet seq.
        self.delivered = 0
        self.dropped = 0
        self.drop_reasons: Counter = Counter()
        self.delivered_hops: list[int] = []
        self.delivered_latencies: list[float] = []
        self.originated: dict[int, float] = {}
        self._terminated: set[int] = set()
        self._transmit_counts: Counter = Counter()

        self.total_bits_spent = 0
        self.warnings: list[str] = list(topology.warnings)

        self._schedule(0.0, _FLOOD, 0, None)

    # -- scheduling ---------------------------------------------------------

    def _schedule(self, time: float, kind: int, a, b) -> None:
        if time < self.now:
            raise RuntimeError(f"event scheduled in the past: {time} < {self.now}")
        heapq.heappush(self._heap, (time, next(self._event_seq), kind, a, b))

    def schedule_source(self, time: float, node_id: int) -> None:
        """Arm one source activation; the node emits a data packet at ``time``."""
        if node_id == self.topology.sink_id:
            raise ConfigError("the sink cannot be a source")
        if node_id not in self.nodes:
            raise ConfigError(f"unknown node {node_id}")
        self._schedule(time, _SOURCE, node_id, None)

    def schedule_sources(self, count: int, seed: int, window: float) -> None:
        """Pick ``count`` distinct non-sink sources at seeded uniform times."""
        candidates = [n for n in self.nodes if n != self.topology.sink_id]
        if count > len(candidates):
            raise ConfigError(f"cannot pick {count} sources from {len(candidates)} nodes")
        rng = random.Random(seed)
        chosen = rng.sample(candidates, count)
        for node_id in chosen:
            self.schedule_source(rng.uniform(0.0, window), node_id)

    # -- radio --------------------------------------------------------------

    def transmit(self, sender_id: int, pkt) -> None:
        """Deduct the transmit cost and fan the packet out to every neighbor.

        The packet's piggybacked energy field is stamped with the sender's
        post-deduction level before any copy leaves, so receivers always
        see the true remaining budget.
        """
        node = self.nodes[sender_id]
        if node.failed:
            raise FailedBeforeTransmit(f"node {sender_id} has failed")
        is_data = type(pkt) is DataPacket
        bits = pkt.payload_bits if is_data else self.payload_bits
        if sender_id != self.topology.sink_id:
            if node.bits_remaining < bits:
                raise FailedBeforeTransmit(
                    f"node {sender_id} cannot fund a {bits}-bit transmission"
                )
            node.bits_remaining -= bits
            node.bits_spent += bits
            node.energy = node.bits_remaining * self.energy_model.tx_cost_per_bit
            self.total_bits_spent += bits

        if is_data:
            pkt.sender_energy = node.energy
            self._transmit_counts[pkt.seq] += 1
        else:
            pkt.energy_level = node.energy

        base = self.now + self.energy_model.per_hop_latency
        jitter = self.energy_model.jitter
        for neighbor in self.topology.adjacency[sender_id]:
            t = base + self._jitter_rng.uniform(0.0, jitter) if jitter > 0 else base
            self._schedule(t, _ARRIVAL, neighbor, pkt)

        if (
            sender_id != self.topology.sink_id
            and not node.failed
            and node.bits_remaining < self.payload_bits
        ):
            node.failed = True
            node.failure_time = self.now

    # -- dispatch -----------------------------------------------------------

    def _deliver(self, pkt: DataPacket) -> None:
        assert pkt.seq not in self._terminated, "packet terminated twice"
        self._terminated.add(pkt.seq)
        self.delivered += 1
        self.delivered_hops.append(self.ttl0 - pkt.ttl + 1)
        self.delivered_latencies.append(self.now - self.originated[pkt.seq])

    def _drop(self, seq: int, reason: str) -> None:
        assert seq not in self._terminated, "packet terminated twice"
        self._terminated.add(seq)
        self.dropped += 1
        self.drop_reasons[reason] += 1

    def _on_flood(self, round_no: int) -> None:
        self.rounds_initiated = round_no + 1
        sink = self.nodes[self.topology.sink_id]
        self.transmit(sink.id, protocol.sink_initiate(sink, round_no))
        if self.refresh_period:
            self._schedule(self.now + self.refresh_period, _FLOOD, round_no + 1, None)

    def _on_source(self, node_id: int) -> None:
        node = self.nodes[node_id]
        seq = next(self._packet_seq)
        self.originated[seq] = self.now
        if node.failed:
            self._drop(seq, "source_failed")
            return
        if not node.table:
            self._drop(seq, "no_route")
            return
        pkt = protocol.originate_data(node, self.proto, self.payload_bits, self.ttl0, seq)
        if pkt is None:
            self._drop(seq, "no_route")
            return
        self.transmit(node_id, pkt)

    def _on_arrival(self, target: int, pkt) -> None:
        node = self.nodes[target]
        if type(pkt) is FloodBroadcast:
            if node.failed:
                return
            if pkt.round_no >= self.rounds_initiated:
                log.debug("ignoring broadcast from unknown round %d", pkt.round_no)
                return
            relay = protocol.handle_broadcast(node, pkt)
            if relay is not None:
                if target == self.topology.sink_id or node.bits_remaining >= self.payload_bits:
                    self.transmit(target, relay)
                else:
                    node.failed = True
                    node.failure_time = self.now
            return

        if target != pkt.next_hop:
            if not node.failed:
                protocol.overhear(node, pkt)
            return

        if node.failed:
            self._drop(pkt.seq, "dead_next_hop")
            return
        # The addressed receiver applies the same piggyback update the
        # overhearers do before it decides where to send next.
        protocol.overhear(node, pkt)
        if target == self.topology.sink_id:
            self._deliver(pkt)
            return
        if pkt.ttl <= 0:
            self._drop(pkt.seq, "ttl_expired")
            return
        out = protocol.forward_data(node, self.proto, pkt)
        if out is None:
            self._drop(pkt.seq, "no_route")
            return
        if node.bits_remaining < out.payload_bits:
            node.failed = True
            node.failure_time = self.now
            self._drop(pkt.seq, "sender_depleted")
            return
        self.transmit(target, out)

    # -- main loop ----------------------------------------------------------

    def run(self, until: float):
        """Pop events in (time, seq) order until the horizon.

        If nothing but the horizon marker remains before ``until`` the run
        ends early at the last real event, and says so.
        """
        self._schedule(until, _END, None, None)
        heap = self._heap
        while heap:
            time, _, kind, a, b = heapq.heappop(heap)
            self.now = time
            if kind == _ARRIVAL:
                self._on_arrival(a, b)
            elif kind == _SOURCE:
                self._on_source(a)
            elif kind == _FLOOD:
                self._on_flood(a)
            else:
                self.end_time = time
                self._drain()
                return self
            if len(heap) == 1 and heap[0][2] == _END and heap[0][0] > self.now:
                self.ended_early = True
                self.end_time = self.now
                heap.clear()
                return self
        self.ended_early = True
        self.end_time = self.now
        return self

    def _drain(self) -> None:
        """Close the books on packets still in flight at the horizon."""
        for _, _, kind, target, pkt in self._heap:
            if (
                kind == _ARRIVAL
                and type(pkt) is DataPacket
                and target == pkt.next_hop
                and pkt.seq not in self._terminated
            ):
                self._drop(pkt.seq, "sim_end")
        self._heap.clear()

    # -- inspection ---------------------------------------------------------

    @property
    def sink_neighbors(self) -> tuple[int, ...]:
        return self.topology.adjacency[self.topology.sink_id]

    def failed_node_ids(self) -> list[int]:
        return [
            n.id for n in self.nodes.values() if n.failed and n.id != self.topology.sink_id
        ]

    def first_sink_neighbor_failure(self) -> Optional[float]:
        times = [
            self.nodes[n].failure_time
            for n in self.sink_neighbors
            if self.nodes[n].failure_time is not None
        ]
        return min(times) if times else None

    def energy_audit(self) -> dict:
        """Exact ledger: initial bits vs remaining plus spent, plus float views."""
        non_sink = [n for n in self.nodes.values() if n.id != self.topology.sink_id]
        remaining_bits = sum(n.bits_remaining for n in non_sink)
        spent_bits = sum(n.bits_spent for n in non_sink)
        cost = self.energy_model.tx_cost_per_bit
        return {
            "initial_bits": self.initial_bits * len(non_sink),
            "remaining_bits": remaining_bits,
            "spent_bits": spent_bits,
            "ledger_bits": spent_bits == self.total_bits_spent,
            "initial_units": self.initial_bits * len(non_sink) * cost,
            "remaining_units": remaining_bits * cost,
            "spent_units": spent_bits * cost,
        }

    def loop_audit(self) -> dict:
        """Per-packet traversal and termination accounting."""
        return {
            "originated": len(self.originated),
            "terminated": len(self._terminated),
            "delivered": self.delivered,
            "dropped": self.dropped,
            "max_transmitters": max(self._transmit_counts.values(), default=0),
        }
