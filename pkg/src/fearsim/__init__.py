"""Discrete-event simulator for fuzzy energy-aware routing in flat WSNs."""

__version__ = "0.1.0"

from .config import ScenarioConfig, parse_config
from .engine import EnergyModel, Placement, Simulation, SinkPlacement, Topology, place_nodes
from .errors import ConfigError, EmptyNeighborSet, FearSimError, ParseError
from .experiments import run_scenario, summarize, sweep
from .fuzzy import FuzzyParams, NeighborEntry
from .maxhop import MaxHopMethod, TerrainConfig
from .protocol import RoutingProtocol
from .results import MetricsRow, read_csv, write_csv

__all__ = [
    "__version__",
    "ScenarioConfig",
    "parse_config",
    "EnergyModel",
    "Placement",
    "Simulation",
    "SinkPlacement",
    "Topology",
    "place_nodes",
    "ConfigError",
    "EmptyNeighborSet",
    "FearSimError",
    "ParseError",
    "run_scenario",
    "summarize",
    "sweep",
    "FuzzyParams",
    "NeighborEntry",
    "RoutingProtocol",
    "MaxHopMethod",
    "TerrainConfig",
    "MetricsRow",
    "read_csv",
    "write_csv",
]
