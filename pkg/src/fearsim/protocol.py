"""Per-node protocol behavior: discovery, forwarding, passive energy update.

The sink seeds a flood; every node learns its neighbors' ids, energies and
hop distances from it and rebroadcasts once.  Data packets then hop toward
the sink, each carrying the sender's post-transmission energy so that every
neighbor in earshot can refresh its table for free.  No acknowledgment
packet type exists anywhere in the protocol.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from . import fuzzy
from .fuzzy import FuzzyParams, NeighborEntry
from .maxhop import dynamic_maxhop, effective_hop


class RoutingProtocol(str, Enum):
    D_FEAR = "d-fear"      # fuzzy selection, route bound re-read per decision
    S_FEAR = "s-fear"      # fuzzy selection, fixed half-range bound with hop clamp
    SEER_LIKE = "seer"     # minimum-hop baseline, ties by energy then id


@dataclass(slots=True)
class FloodBroadcast:
    """Discovery packet; rewritten at every hop it takes."""

    source_address: int
    hop_count: int
    energy_level: float
    round_no: int


@dataclass(slots=True)
class DataPacket:
    """One sensor reading in flight toward the sink."""

    origin: int
    sender: int
    sender_energy: float
    next_hop: int
    ttl: int
    payload_bits: int
    seq: int


#: The only packet kinds the protocol defines (notably: no acknowledgments).
PACKET_TYPES = (FloodBroadcast, DataPacket)


@dataclass(slots=True)
class NodeState:
    """A sensor node as the engine owns it.

    ``bits_remaining`` is the authoritative transmit budget, counted in
    payload bits so energy bookkeeping stays exact; ``energy`` is the same
    quantity in energy units, refreshed by the engine after every spend.
    """

    id: int
    position: tuple[float, float]
    bits_remaining: int
    energy: float
    protocol: RoutingProtocol
    own_hop: Optional[int] = None
    table: dict[int, NeighborEntry] = field(default_factory=dict)
    rebroadcast_rounds: set[int] = field(default_factory=set)
    failed: bool = False
    failure_time: Optional[float] = None
    bits_spent: int = 0


@dataclass(frozen=True)
class ProtocolConfig:
    """Resolved per-scenario routing parameters shared by every node."""

    variant: RoutingProtocol
    fuzzy: FuzzyParams
    static_max_hop: int
    dynamic: bool
    clamp_hops: bool


def sink_initiate(sink: NodeState, round_no: int) -> FloodBroadcast:
    """Start (or refresh) discovery from the sink, at hop 0."""
    sink.rebroadcast_rounds.add(round_no)
    return FloodBroadcast(
        source_address=sink.id,
        hop_count=0,
        energy_level=sink.energy,
        round_no=round_no,
    )


def handle_broadcast(node: NodeState, pkt: FloodBroadcast) -> Optional[FloodBroadcast]:
    """Learn from a discovery packet; first reception per round is relayed.

    Duplicate senders merge by minimum hop count and latest energy.  The
    returned packet, if any, is this node's single retransmission for the
    round, already rewritten with its own address, hop and energy.
    """
    known = node.table.get(pkt.source_address)
    if known is None or pkt.hop_count < known.hop_count:
        hop = pkt.hop_count
    else:
        hop = known.hop_count
    node.table[pkt.source_address] = NeighborEntry(pkt.source_address, pkt.energy_level, hop)

    if pkt.round_no in node.rebroadcast_rounds:
        return None
    node.rebroadcast_rounds.add(pkt.round_no)
    if node.own_hop is None:
        node.own_hop = pkt.hop_count + 1
    return FloodBroadcast(
        source_address=node.id,
        hop_count=node.own_hop,
        energy_level=node.energy,
        round_no=pkt.round_no,
    )


def route_select(node: NodeState, cfg: ProtocolConfig, exclude: Optional[int] = None) -> Optional[int]:
    """Pick the next hop from the node's live table.

    Dead neighbors and the packet's previous sender are never candidates;
    a tabled sink (hop 0) short-circuits to direct delivery.  Returns None
    when nothing viable remains.
    """
    candidates = [
        e
        for e in node.table.values()
        if e.energy_level > 0 and e.neighbor_id != exclude
    ]
    if not candidates:
        return None

    for entry in candidates:
        if entry.hop_count == 0:
            return entry.neighbor_id

    if cfg.variant is RoutingProtocol.SEER_LIKE:
        best = min(candidates, key=lambda e: (e.hop_count, -e.energy_level, e.neighbor_id))
        return best.neighbor_id

    if cfg.dynamic:
        max_hop = dynamic_maxhop(candidates)
    else:
        max_hop = cfg.static_max_hop
        if cfg.clamp_hops:
            candidates = [
                NeighborEntry(e.neighbor_id, e.energy_level, effective_hop(e.hop_count, max_hop, True))
                for e in candidates
            ]
    return fuzzy.select_next_hop(candidates, cfg.fuzzy, max_hop)


def originate_data(
    node: NodeState, cfg: ProtocolConfig, payload_bits: int, ttl: int, seq: int
) -> Optional[DataPacket]:
    """Build a fresh data packet at a source, or None when no route exists.

    ``sender_energy`` is stamped by the engine after the transmit cost is
    deducted; 0.0 here is a placeholder.
    """
    next_hop = route_select(node, cfg)
    if next_hop is None:
        return None
    return DataPacket(
        origin=node.id,
        sender=node.id,
        sender_energy=0.0,
        next_hop=next_hop,
        ttl=ttl,
        payload_bits=payload_bits,
        seq=seq,
    )


def forward_data(node: NodeState, cfg: ProtocolConfig, pkt: DataPacket) -> Optional[DataPacket]:
    """Re-address an in-flight packet away from its previous sender."""
    next_hop = route_select(node, cfg, exclude=pkt.sender)
    if next_hop is None:
        return None
    return DataPacket(
        origin=pkt.origin,
        sender=node.id,
        sender_energy=0.0,
        next_hop=next_hop,
        ttl=pkt.ttl - 1,
        payload_bits=pkt.payload_bits,
        seq=pkt.seq,
    )


def overhear(node: NodeState, pkt: DataPacket) -> None:
    """Refresh the sender's tabled energy from a packet not addressed to us."""
    known = node.table.get(pkt.sender)
    if known is not None:
        node.table[pkt.sender] = NeighborEntry(pkt.sender, pkt.sender_energy, known.hop_count)
