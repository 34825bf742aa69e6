"""Scenario execution, parameter sweeps and the comparison report.

A scenario is a pure function of its config: repeated runs return
identical rows.  Sweeps fan the Cartesian product of the requested axes
out to a process pool and re-sort the rows into a deterministic order, so
the output never depends on completion order.
"""

from __future__ import annotations

import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Sequence

from .config import ScenarioConfig
from .engine import Placement, Simulation, place_nodes
from .errors import ConfigError
from .fuzzy import FuzzyParams
from .maxhop import MaxHopMethod
from .protocol import ProtocolConfig, RoutingProtocol
from .results import MetricsRow

# Relative gap below which two protocols are reported as indistinguishable.
NO_DIFFERENCE_THRESHOLD = 0.10


def build_simulation(config: ScenarioConfig) -> Simulation:
    """Assemble topology, protocol parameters and sources for one scenario."""
    topology = place_nodes(
        config.node_count, config.terrain, config.placement, config.seed, config.sink_placement
    )
    proto = ProtocolConfig(
        variant=config.protocol,
        fuzzy=FuzzyParams(config.resolved_energy_scale(), config.strict_gate),
        static_max_hop=config.static_max_hop(),
        dynamic=config.resolved_maxhop_method() is MaxHopMethod.DYNAMIC
        and config.protocol is not RoutingProtocol.SEER_LIKE,
        clamp_hops=config.protocol is RoutingProtocol.S_FEAR
        or config.resolved_maxhop_method() is not MaxHopMethod.DYNAMIC,
    )
    sim = Simulation(
        topology,
        proto,
        config.energy,
        payload_bits=config.payload_bits,
        ttl=config.ttl(),
        refresh_period=config.refresh_period,
        seed=config.seed,
    )
    if config.source_count:
        sim.schedule_sources(
            config.source_count,
            config.seed,
            config.source_window_factor * config.simulation_time,
        )
    return sim


def run_scenario_sim(config: ScenarioConfig) -> Simulation:
    """Run one scenario and hand back the finished simulation for inspection."""
    return build_simulation(config).run(config.simulation_time)


def metrics_from(sim: Simulation, config: ScenarioConfig) -> MetricsRow:
    non_sink = [n for n in sim.nodes.values() if n.id != sim.topology.sink_id]
    degree = len(sim.sink_neighbors)
    if degree:
        active = sum(1 for n in sim.sink_neighbors if not sim.nodes[n].failed)
        test3 = 100.0 * active / degree
    else:
        test3 = 100.0  # an empty neighborhood has nothing to lose
    return MetricsRow(
        protocol=config.protocol,
        placement=config.placement,
        node_count=config.node_count,
        seed=config.seed,
        test1_s=sim.first_sink_neighbor_failure(),
        test2_fails=len(sim.failed_node_ids()),
        test3_pct=test3,
        test4_avg_energy=statistics.fmean(n.energy for n in non_sink),
        delivered=sim.delivered,
        dropped=sim.dropped,
        avg_hops=statistics.fmean(sim.delivered_hops) if sim.delivered_hops else 0.0,
    )


def run_scenario(config: ScenarioConfig) -> MetricsRow:
    """Run one scenario and reduce it to its metrics row."""
    sim = run_scenario_sim(config)
    return metrics_from(sim, config)


def sweep(
    base: ScenarioConfig,
    node_counts: Sequence[int],
    placements: Sequence[Placement],
    protocols: Sequence[RoutingProtocol],
    seeds: Sequence[int],
    workers: int | None = None,
) -> list[MetricsRow]:
    """Run the full Cartesian product of the requested axes.

    Rows come back sorted by (protocol, placement, node_count, seed)
    regardless of how the pool interleaves the work.
    """
    for name, axis in (
        ("node_counts", node_counts),
        ("placements", placements),
        ("protocols", protocols),
        ("seeds", seeds),
    ):
        if not axis:
            raise ConfigError(f"sweep axis {name} is empty")

    configs = []
    for proto in protocols:
        for placement in placements:
            for count in node_counts:
                for seed in seeds:
                    try:
                        configs.append(
                            replace(
                                base,
                                protocol=proto,
                                placement=placement,
                                node_count=count,
                                seed=seed,
                            )
                        )
                    except ConfigError as exc:
                        raise ConfigError(
                            f"sweep cell (protocol={proto.value}, placement={placement.value}, "
                            f"nodes={count}, seed={seed}): {exc}"
                        ) from exc

    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_scenario, configs))
    else:
        rows = [run_scenario(c) for c in configs]
    return sorted(rows, key=MetricsRow.sort_key)


def _mean_metrics(rows: Sequence[MetricsRow], horizon: float) -> dict:
    """Seed-average one protocol's rows; a never-failing neighborhood counts
    its first-failure time as the simulation horizon (censored)."""
    return {
        "test1": statistics.fmean(
            horizon if r.test1_s is None else r.test1_s for r in rows
        ),
        "test2": statistics.fmean(r.test2_fails for r in rows),
        "test3": statistics.fmean(r.test3_pct for r in rows),
        "test4": statistics.fmean(r.test4_avg_energy for r in rows),
        "delivered": statistics.fmean(r.delivered for r in rows),
        "dropped": statistics.fmean(r.dropped for r in rows),
        "seeds": len(rows),
    }


def _direction(name: str, a: str, b: str, va: float, vb: float, higher_wins: bool) -> str:
    if va == vb:
        return f"  {name}: tie between {a} and {b}"
    better = (a if va > vb else b) if higher_wins else (a if va < vb else b)
    return f"  {name}: advantage {better} ({a}={va:.4g}, {b}={vb:.4g})"


def summarize(rows: Sequence[MetricsRow], horizon: float | None = None) -> str:
    """Per (node_count, placement) group, print seed-averaged tests and the
    pairwise direction of every protocol pair."""
    if not rows:
        raise ConfigError("nothing to summarize")
    if horizon is None:
        horizon = max(r.test1_s for r in rows if r.test1_s is not None) if any(
            r.test1_s is not None for r in rows
        ) else 0.0

    lines = [
        "scenario comparison report",
        "fails = non-sink nodes that dropped below one data transmission;",
        f"test1 averages censor no-failure runs at {horizon:g} s;",
        f"'no visible difference' = within {NO_DIFFERENCE_THRESHOLD:.0%} relative.",
    ]
    groups: dict[tuple[int, str], dict[RoutingProtocol, list[MetricsRow]]] = {}
    for row in rows:
        cell = groups.setdefault((row.node_count, row.placement.value), {})
        cell.setdefault(row.protocol, []).append(row)

    for (count, placement), by_proto in sorted(groups.items()):
        lines.append(f"\n=== nodes={count} placement={placement} ===")
        means = {
            proto: _mean_metrics(proto_rows, horizon)
            for proto, proto_rows in sorted(by_proto.items(), key=lambda kv: kv[0].value)
        }
        header = (
            f"{'protocol':<10}{'seeds':>6}{'test1_s':>12}{'test2_fails':>13}"
            f"{'test3_pct':>11}{'test4_energy':>14}{'delivered':>11}{'dropped':>9}"
        )
        lines.append(header)
        for proto, m in means.items():
            lines.append(
                f"{proto.value:<10}{m['seeds']:>6}{m['test1']:>12.2f}{m['test2']:>13.2f}"
                f"{m['test3']:>11.2f}{m['test4']:>14.5g}{m['delivered']:>11.1f}{m['dropped']:>9.1f}"
            )
        protos = list(means)
        if len(protos) < 2:
            continue
        for i, a in enumerate(protos):
            for b in protos[i + 1 :]:
                ma, mb = means[a], means[b]
                lines.append(
                    _direction("test1 energy balance", a.value, b.value, ma["test1"], mb["test1"], True)
                )
                lines.append(
                    _direction("test2 failures", a.value, b.value, ma["test2"], mb["test2"], False)
                )
                lines.append(
                    _direction(
                        "test3 active sink neighbors", a.value, b.value, ma["test3"], mb["test3"], True
                    )
                )
                base = max(abs(ma["test4"]), abs(mb["test4"]))
                if base == 0 or abs(ma["test4"] - mb["test4"]) / base <= NO_DIFFERENCE_THRESHOLD:
                    lines.append(
                        f"  test4 remaining energy: no visible difference between "
                        f"{a.value} and {b.value}"
                    )
                else:
                    lines.append(
                        _direction(
                            "test4 remaining energy", a.value, b.value, ma["test4"], mb["test4"], True
                        )
                    )
    return "\n".join(lines) + "\n"
