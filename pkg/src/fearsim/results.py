"""Per-scenario outcome rows and their CSV form.

The CSV schema is fixed: one header, one row per scenario, full-precision
floats (``repr`` round-trips them losslessly) and an empty field where the
first sink-neighbor failure never happened.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

from .engine import Placement
from .protocol import RoutingProtocol

CSV_HEADER = (
    "protocol",
    "placement",
    "node_count",
    "seed",
    "test1_s",
    "test2_fails",
    "test3_pct",
    "test4_avg_energy",
    "delivered",
    "dropped",
    "avg_hops",
)


@dataclass(frozen=True)
class MetricsRow:
    """One scenario's outcome plus the config echo identifying it."""

    protocol: RoutingProtocol
    placement: Placement
    node_count: int
    seed: int
    test1_s: float | None          # first failure among the sink's neighbors
    test2_fails: int               # non-sink nodes below one transmission
    test3_pct: float               # surviving share of the sink's neighborhood
    test4_avg_energy: float        # mean remaining energy, non-sink nodes
    delivered: int
    dropped: int
    avg_hops: float

    def sort_key(self):
        return (self.protocol.value, self.placement.value, self.node_count, self.seed)


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: Sequence[MetricsRow]) -> str:
    """Render rows as CSV text, header included."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(
            [
                row.protocol.value,
                row.placement.value,
                row.node_count,
                row.seed,
                _format(row.test1_s),
                row.test2_fails,
                _format(row.test3_pct),
                _format(row.test4_avg_energy),
                row.delivered,
                row.dropped,
                _format(row.avg_hops),
            ]
        )
    return buffer.getvalue()


def write_csv(rows: Sequence[MetricsRow], path) -> None:
    """Write rows to ``path``; propagates OSError for unwritable targets."""
    if not rows:
        raise ValueError("refusing to write an empty result set")
    with open(path, "w", newline="") as handle:
        handle.write(rows_to_csv(rows))


def rows_from_csv(text: str) -> list[MetricsRow]:
    """Parse CSV text produced by rows_to_csv back into rows."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {header}")
    rows = []
    for record in reader:
        if not record:
            continue
        rows.append(
            MetricsRow(
                protocol=RoutingProtocol(record[0]),
                placement=Placement(record[1]),
                node_count=int(record[2]),
                seed=int(record[3]),
                test1_s=float(record[4]) if record[4] else None,
                test2_fails=int(record[5]),
                test3_pct=float(record[6]),
                test4_avg_energy=float(record[7]),
                delivered=int(record[8]),
                dropped=int(record[9]),
                avg_hops=float(record[10]),
            )
        )
    return rows


def read_csv(path) -> list[MetricsRow]:
    with open(path, "r", newline="") as handle:
        return rows_from_csv(handle.read())
