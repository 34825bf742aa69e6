"""Config file parsing and scenario invariant tests."""

import pytest

from fearsim.config import parse_config, with_overrides
from fearsim.engine import Placement, SinkPlacement
from fearsim.errors import ConfigError, ParseError
from fearsim.maxhop import MaxHopMethod
from fearsim.protocol import RoutingProtocol

MINIMAL = """
SIMULATION-TIME 1200
TERRAIN-DIMENSIONS 1000 1000
NUMBER-OF-NODES 200
NODE-PLACEMENT RANDOM
PROTOCOL D-FEAR
"""


def test_minimal_config_and_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.simulation_time == 1200.0
    assert cfg.terrain.x_extent == 1000.0 and cfg.terrain.y_extent == 1000.0
    assert cfg.terrain.radio_range == 250.0
    assert cfg.node_count == 200
    assert cfg.placement is Placement.RANDOM
    assert cfg.protocol is RoutingProtocol.D_FEAR
    assert cfg.source_count == 100
    assert cfg.payload_bits == 512
    assert cfg.seed == 1
    assert cfg.refresh_period is None
    assert cfg.strict_gate is False
    assert cfg.sink_placement is SinkPlacement.CENTER


def test_table_style_terrain_spelling():
    cfg = parse_config(MINIMAL.replace("1000 1000", "1000m*1000m"))
    assert cfg.terrain.x_extent == 1000.0
    assert cfg.terrain.y_extent == 1000.0


def test_full_config_round_trip():
    cfg = parse_config(
        MINIMAL
        + """
RADIO-RANGE 300
NUMBER-OF-EVENTS 50        # sources
SEED 9
INITIAL-ENERGY 4.5
TX-COST-PER-BIT 0.001953125
PAYLOAD-BITS 256
TTL-FACTOR 1.5
REFRESH-PERIOD 60
STRICT-GATE ON
MAXHOP-METHOD DIAGONAL
SINK-PLACEMENT CORNER
SOURCE-WINDOW-FACTOR 0.5
PER-HOP-LATENCY 0.02
JITTER 0.001
"""
    )
    assert cfg.terrain.radio_range == 300.0
    assert cfg.source_count == 50
    assert cfg.seed == 9
    assert cfg.energy.initial_energy == 4.5
    assert cfg.energy.tx_cost_per_bit == 0.001953125
    assert cfg.payload_bits == 256
    assert cfg.ttl_factor == 1.5
    assert cfg.refresh_period == 60.0
    assert cfg.strict_gate is True
    assert cfg.maxhop_method is MaxHopMethod.DIAGONAL
    assert cfg.sink_placement is SinkPlacement.CORNER
    assert cfg.source_window_factor == 0.5
    assert cfg.energy.per_hop_latency == 0.02
    assert cfg.energy.jitter == 0.001


def test_comments_and_blank_lines_skipped():
    cfg = parse_config("# leading comment\n\n" + MINIMAL + "\n   # trailing\n")
    assert cfg.node_count == 200


def test_diagonal_placement_rejected_with_line():
    bad = MINIMAL.replace("NODE-PLACEMENT RANDOM", "NODE-PLACEMENT DIAGONAL")
    with pytest.raises(ParseError) as err:
        parse_config(bad)
    assert "DIAGONAL" in str(err.value)
    assert err.value.line_no == 5


def test_unknown_key_errors_with_line_number():
    with pytest.raises(ParseError) as err:
        parse_config(MINIMAL + "FROBNICATE 7\n")
    assert "FROBNICATE" in str(err.value)
    assert err.value.line_no == 7


def test_missing_required_key_named():
    with pytest.raises(ConfigError) as err:
        parse_config("SIMULATION-TIME 1200\n")
    assert "TERRAIN-DIMENSIONS" in str(err.value)


def test_physics_keys_ignored():
    cfg = parse_config(
        MINIMAL
        + """
MOBILITY NONE
TEMPERATURE 290.0
RADIO-BANDWIDTH 2000000
RADIO-TX-POWER 5.0
ENERGY-TRANSMIT-LEVEL 0.0002
MAC-PROTOCOL 802.11
NETWORK-PROTOCOL IP
PROPAGATION-PATHLOSS FREE-SPACE
RADIO-TYPE RADIO-ACCNOISE
"""
    )
    assert cfg.node_count == 200


def test_mobility_other_than_none_rejected():
    with pytest.raises(ParseError):
        parse_config(MINIMAL + "MOBILITY RANDOM-WAYPOINT\n")


def test_bad_number_reports_key_and_line():
    with pytest.raises(ParseError) as err:
        parse_config(MINIMAL.replace("SIMULATION-TIME 1200", "SIMULATION-TIME soon"))
    assert "SIMULATION-TIME" in str(err.value)


def test_source_count_must_fit_node_count():
    with pytest.raises(ConfigError):
        parse_config(MINIMAL + "NUMBER-OF-EVENTS 200\n")


def test_refresh_period_off_token():
    cfg = parse_config(MINIMAL + "REFRESH-PERIOD OFF\n")
    assert cfg.refresh_period is None


def test_energy_scale_bound_checked():
    with pytest.raises(ConfigError):
        parse_config(MINIMAL + "INITIAL-ENERGY 2.0\nENERGY-SCALE 0.6\n")
    cfg = parse_config(MINIMAL + "INITIAL-ENERGY 2.0\nENERGY-SCALE 0.5\n")
    assert cfg.energy_scale == 0.5


def test_radio_range_beyond_diagonal_rejected():
    with pytest.raises(ConfigError):
        parse_config(MINIMAL + "RADIO-RANGE 1500\n")


def test_resolved_maxhop_method_follows_protocol():
    assert parse_config(MINIMAL).resolved_maxhop_method() is MaxHopMethod.DYNAMIC
    sfear = parse_config(MINIMAL.replace("D-FEAR", "S-FEAR"))
    assert sfear.resolved_maxhop_method() is MaxHopMethod.HALF_RANGE
    assert sfear.static_max_hop() == 12


def test_ttl_uses_half_range_estimate():
    assert parse_config(MINIMAL).ttl() == 24


def test_with_overrides():
    cfg = parse_config(MINIMAL)
    out = with_overrides(cfg, protocol=RoutingProtocol.SEER_LIKE, seed=77)
    assert out.protocol is RoutingProtocol.SEER_LIKE
    assert out.seed == 77
    assert with_overrides(cfg) is cfg
