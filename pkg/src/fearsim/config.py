"""Scenario configuration and the key-value config file format.

A config file holds one ``KEY value...`` pair per line with ``#`` comments.
Keys follow the upper-case hyphenated convention of the simulation settings
table (SIMULATION-TIME, TERRAIN-DIMENSIONS, ...).  Radio-physics keys from
that table (MAC protocol, path loss, noise, bandwidth, tx power,
temperature, transmit level) are accepted but ignored with a warning: the
medium here is an idealized lossless disk.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

from .engine import EnergyModel, Placement, SinkPlacement
from .errors import ConfigError, ParseError
from .maxhop import MaxHopMethod, TerrainConfig, resolve_static, static_half_range
from .protocol import RoutingProtocol

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one simulation run depends on."""

    simulation_time: float
    terrain: TerrainConfig
    node_count: int
    placement: Placement
    protocol: RoutingProtocol
    source_count: int = 100
    payload_bits: int = 512
    energy: EnergyModel = field(default_factory=EnergyModel)
    seed: int = 1
    refresh_period: float | None = None
    strict_gate: bool = False
    energy_scale: float | None = None      # default: 1 / max initial energy
    maxhop_method: MaxHopMethod | None = None  # default: per protocol variant
    sink_placement: SinkPlacement = SinkPlacement.CENTER
    source_window_factor: float = 0.8
    ttl_factor: float = 2.0

    def __post_init__(self):
        if self.simulation_time <= 0:
            raise ConfigError("SIMULATION-TIME must be positive")
        if self.node_count < 3:
            raise ConfigError("NUMBER-OF-NODES must be at least 3")
        if not 0 <= self.source_count < self.node_count:
            raise ConfigError("NUMBER-OF-EVENTS must be in [0, NUMBER-OF-NODES)")
        if self.payload_bits < 1:
            raise ConfigError("PAYLOAD-BITS must be at least 1")
        if self.refresh_period is not None and self.refresh_period <= 0:
            raise ConfigError("REFRESH-PERIOD must be positive when set")
        if not 0 < self.source_window_factor <= 1:
            raise ConfigError("SOURCE-WINDOW-FACTOR must be in (0, 1]")
        if self.ttl_factor <= 0:
            raise ConfigError("TTL-FACTOR must be positive")
        if self.energy_scale is not None:
            e_max = self.energy.quantized_initial()
            if self.energy_scale <= 0:
                raise ConfigError("ENERGY-SCALE must be positive")
            if self.energy_scale * e_max > 1 + 1e-12:
                raise ConfigError(
                    f"ENERGY-SCALE x max initial energy is "
                    f"{self.energy_scale * e_max:.6g}, must not exceed 1"
                )

    def resolved_energy_scale(self) -> float:
        if self.energy_scale is not None:
            return self.energy_scale
        return 1.0 / self.energy.quantized_initial()

    def resolved_maxhop_method(self) -> MaxHopMethod:
        if self.maxhop_method is not None:
            return self.maxhop_method
        if self.protocol is RoutingProtocol.D_FEAR:
            return MaxHopMethod.DYNAMIC
        return MaxHopMethod.HALF_RANGE

    def static_max_hop(self) -> int:
        method = self.resolved_maxhop_method()
        if method is MaxHopMethod.DYNAMIC:
            return static_half_range(self.terrain)
        return resolve_static(method, self.terrain, self.node_count)

    def ttl(self) -> int:
        return max(1, math.ceil(self.ttl_factor * static_half_range(self.terrain)))


# Table keys that configure radio physics outside this simulator's model.
_IGNORED_KEYS = {
    "MOBILITY",
    "TEMPERATURE",
    "RADIO-BANDWIDTH",
    "RADIO-TX-POWER",
    "ENERGY-TRANSMIT-LEVEL",
    "MAC-PROTOCOL",
    "NETWORK-PROTOCOL",
    "PROPAGATION-PATHLOSS",
    "RADIO-TYPE",
}

_KNOWN_KEYS = {
    "SIMULATION-TIME",
    "TERRAIN-DIMENSIONS",
    "NUMBER-OF-NODES",
    "NODE-PLACEMENT",
    "NUMBER-OF-EVENTS",
    "RADIO-RANGE",
    "PROTOCOL",
    "SEED",
    "INITIAL-ENERGY",
    "TX-COST-PER-BIT",
    "TTL-FACTOR",
    "REFRESH-PERIOD",
    "STRICT-GATE",
    "PAYLOAD-BITS",
    "PER-HOP-LATENCY",
    "JITTER",
    "ENERGY-SCALE",
    "MAXHOP-METHOD",
    "SINK-PLACEMENT",
    "SOURCE-WINDOW-FACTOR",
} | _IGNORED_KEYS

_REQUIRED_KEYS = (
    "SIMULATION-TIME",
    "TERRAIN-DIMENSIONS",
    "NUMBER-OF-NODES",
    "NODE-PLACEMENT",
    "PROTOCOL",
)

_PROTOCOLS = {
    "D-FEAR": RoutingProtocol.D_FEAR,
    "S-FEAR": RoutingProtocol.S_FEAR,
    "SEER": RoutingProtocol.SEER_LIKE,
}

_MAXHOP_METHODS = {
    "DIAGONAL": MaxHopMethod.DIAGONAL,
    "HALF-RANGE": MaxHopMethod.HALF_RANGE,
    "NODE-BOUND": MaxHopMethod.NODE_BOUND,
    "DYNAMIC": MaxHopMethod.DYNAMIC,
}

_FLAGS = {"ON": True, "TRUE": True, "1": True, "OFF": False, "FALSE": False, "0": False}


def _number(token: str, line_no: int, key: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(line_no, f"{key} expects a number, got {token!r}") from None


def _integer(token: str, line_no: int, key: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line_no, f"{key} expects an integer, got {token!r}") from None


def _terrain_extents(value: str, line_no: int) -> tuple[float, float]:
    # Tolerate the table's own "1000m*1000m" spelling.
    tokens = value.replace("*", " ").replace("m", " ").split()
    if len(tokens) != 2:
        raise ParseError(line_no, f"TERRAIN-DIMENSIONS expects two extents, got {value!r}")
    return (
        _number(tokens[0], line_no, "TERRAIN-DIMENSIONS"),
        _number(tokens[1], line_no, "TERRAIN-DIMENSIONS"),
    )


def parse_config(text: str) -> ScenarioConfig:
    """Build a ScenarioConfig from config file content.

    Raises ParseError (with the line number) for malformed or unknown
    lines, and ConfigError when the assembled scenario breaks an
    invariant or a required key is missing.
    """
    raw: dict[str, str] = {}
    lines: dict[str, int] = {}
    ignored: list[str] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        parts = stripped.split(None, 1)
        key = parts[0].upper()
        if key not in _KNOWN_KEYS:
            raise ParseError(line_no, f"unknown key {key!r}")
        if len(parts) == 1:
            raise ParseError(line_no, f"{key} is missing a value")
        if key in _IGNORED_KEYS:
            if key == "MOBILITY" and parts[1].strip().upper() != "NONE":
                raise ParseError(line_no, "node mobility is not modeled; only MOBILITY NONE")
            if key != "MOBILITY":
                ignored.append(key)
            continue
        raw[key] = parts[1].strip()
        lines[key] = line_no
    if ignored:
        log.warning("ignoring unmodeled radio-physics keys: %s", ", ".join(ignored))

    for key in _REQUIRED_KEYS:
        if key not in raw:
            raise ConfigError(f"missing required key {key}")

    def ln(key: str) -> int:
        return lines[key]

    x, y = _terrain_extents(raw["TERRAIN-DIMENSIONS"], ln("TERRAIN-DIMENSIONS"))
    radio_range = (
        _number(raw["RADIO-RANGE"], ln("RADIO-RANGE"), "RADIO-RANGE")
        if "RADIO-RANGE" in raw
        else 250.0
    )
    try:
        terrain = TerrainConfig(x, y, radio_range)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    placement_token = raw["NODE-PLACEMENT"].upper()
    try:
        placement = Placement(placement_token.lower())
    except ValueError:
        raise ParseError(
            ln("NODE-PLACEMENT"),
            f"NODE-PLACEMENT must be RANDOM or UNIFORM, got {placement_token!r}",
        ) from None

    protocol_token = raw["PROTOCOL"].upper()
    if protocol_token not in _PROTOCOLS:
        raise ParseError(
            ln("PROTOCOL"), f"PROTOCOL must be one of D-FEAR, S-FEAR, SEER, got {protocol_token!r}"
        )

    maxhop_method = None
    if "MAXHOP-METHOD" in raw:
        token = raw["MAXHOP-METHOD"].upper()
        if token not in _MAXHOP_METHODS:
            raise ParseError(
                ln("MAXHOP-METHOD"),
                f"MAXHOP-METHOD must be one of {', '.join(_MAXHOP_METHODS)}, got {token!r}",
            )
        maxhop_method = _MAXHOP_METHODS[token]

    sink_placement = SinkPlacement.CENTER
    if "SINK-PLACEMENT" in raw:
        token = raw["SINK-PLACEMENT"].upper()
        if token not in ("CENTER", "CORNER"):
            raise ParseError(
                ln("SINK-PLACEMENT"), f"SINK-PLACEMENT must be CENTER or CORNER, got {token!r}"
            )
        sink_placement = SinkPlacement(token.lower())

    strict_gate = False
    if "STRICT-GATE" in raw:
        token = raw["STRICT-GATE"].upper()
        if token not in _FLAGS:
            raise ParseError(ln("STRICT-GATE"), f"STRICT-GATE must be ON or OFF, got {token!r}")
        strict_gate = _FLAGS[token]

    refresh_period = None
    if "REFRESH-PERIOD" in raw:
        token = raw["REFRESH-PERIOD"].upper()
        if token not in ("OFF", "0", "NONE"):
            refresh_period = _number(token, ln("REFRESH-PERIOD"), "REFRESH-PERIOD")

    try:
        energy = EnergyModel(
            initial_energy=_number(raw["INITIAL-ENERGY"], ln("INITIAL-ENERGY"), "INITIAL-ENERGY")
            if "INITIAL-ENERGY" in raw
            else 1.0,
            tx_cost_per_bit=_number(raw["TX-COST-PER-BIT"], ln("TX-COST-PER-BIT"), "TX-COST-PER-BIT")
            if "TX-COST-PER-BIT" in raw
            else 1.0 / (512 * 400),
            per_hop_latency=_number(raw["PER-HOP-LATENCY"], ln("PER-HOP-LATENCY"), "PER-HOP-LATENCY")
            if "PER-HOP-LATENCY" in raw
            else 0.01,
            jitter=_number(raw["JITTER"], ln("JITTER"), "JITTER") if "JITTER" in raw else 0.0,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    return ScenarioConfig(
        simulation_time=_number(raw["SIMULATION-TIME"], ln("SIMULATION-TIME"), "SIMULATION-TIME"),
        terrain=terrain,
        node_count=_integer(raw["NUMBER-OF-NODES"], ln("NUMBER-OF-NODES"), "NUMBER-OF-NODES"),
        placement=placement,
        protocol=_PROTOCOLS[protocol_token],
        source_count=_integer(raw["NUMBER-OF-EVENTS"], ln("NUMBER-OF-EVENTS"), "NUMBER-OF-EVENTS")
        if "NUMBER-OF-EVENTS" in raw
        else 100,
        payload_bits=_integer(raw["PAYLOAD-BITS"], ln("PAYLOAD-BITS"), "PAYLOAD-BITS")
        if "PAYLOAD-BITS" in raw
        else 512,
        energy=energy,
        seed=_integer(raw["SEED"], ln("SEED"), "SEED") if "SEED" in raw else 1,
        refresh_period=refresh_period,
        strict_gate=strict_gate,
        energy_scale=_number(raw["ENERGY-SCALE"], ln("ENERGY-SCALE"), "ENERGY-SCALE")
        if "ENERGY-SCALE" in raw
        else None,
        maxhop_method=maxhop_method,
        sink_placement=sink_placement,
        source_window_factor=_number(
            raw["SOURCE-WINDOW-FACTOR"], ln("SOURCE-WINDOW-FACTOR"), "SOURCE-WINDOW-FACTOR"
        )
        if "SOURCE-WINDOW-FACTOR" in raw
        else 0.8,
        ttl_factor=_number(raw["TTL-FACTOR"], ln("TTL-FACTOR"), "TTL-FACTOR")
        if "TTL-FACTOR" in raw
        else 2.0,
    )


def with_overrides(
    config: ScenarioConfig,
    protocol: RoutingProtocol | None = None,
    seed: int | None = None,
) -> ScenarioConfig:
    """Apply the CLI-level protocol/seed overrides to a parsed config."""
    updates = {}
    if protocol is not None:
        updates["protocol"] = protocol
    if seed is not None:
        updates["seed"] = seed
    return replace(config, **updates) if updates else config
