"""Request and response models for the simulation service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

from ..engine import Placement
from ..protocol import RoutingProtocol
from ..results import MetricsRow


class MetricsRowModel(BaseModel):
    protocol: str
    placement: str
    node_count: int
    seed: int
    test1_s: Optional[float] = None
    test2_fails: int
    test3_pct: float
    test4_avg_energy: float
    delivered: int
    dropped: int
    avg_hops: float

    @classmethod
    def from_row(cls, row: MetricsRow) -> "MetricsRowModel":
        return cls(
            protocol=row.protocol.value,
            placement=row.placement.value,
            node_count=row.node_count,
            seed=row.seed,
            test1_s=row.test1_s,
            test2_fails=row.test2_fails,
            test3_pct=row.test3_pct,
            test4_avg_energy=row.test4_avg_energy,
            delivered=row.delivered,
            dropped=row.dropped,
            avg_hops=row.avg_hops,
        )

    def to_row(self) -> MetricsRow:
        return MetricsRow(
            protocol=RoutingProtocol(self.protocol),
            placement=Placement(self.placement),
            node_count=self.node_count,
            seed=self.seed,
            test1_s=self.test1_s,
            test2_fails=self.test2_fails,
            test3_pct=self.test3_pct,
            test4_avg_energy=self.test4_avg_energy,
            delivered=self.delivered,
            dropped=self.dropped,
            avg_hops=self.avg_hops,
        )


class RunRequest(BaseModel):
    config_text: str = Field(description="Scenario config file content, KEY value per line")
    protocol: Optional[str] = Field(default=None, description="Override: d-fear, s-fear or seer")
    seed: Optional[int] = Field(default=None, description="Override the config's seed")


class RunResponse(BaseModel):
    row: MetricsRowModel


class SweepRequest(BaseModel):
    config_text: str
    node_counts: list[int]
    placements: list[str]
    protocols: list[str]
    seeds: list[int]
    workers: Optional[int] = None


class SweepResponse(BaseModel):
    rows: list[MetricsRowModel]


class SummarizeRequest(BaseModel):
    rows: list[MetricsRowModel]


class SummarizeResponse(BaseModel):
    report: str


class VersionResponse(BaseModel):
    name: str
    version: str
