"""Request/response models for the HTTP service.

The wire format for networks mirrors Network.to_json: a node array with
explicit ids, the radio range, and an undirected edge list with measured
distances.
"""
from __future__ import annotations

from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field

from ..harness import (
    DEFAULT_ANCHOR_COUNTS,
    DEFAULT_CLUSTER_COUNTS,
    DEFAULT_RADIO_RANGES,
    CheckResult,
    DemoResult,
    ExperimentConfig,
    TopologyConfig,
    default_topologies,
)
from ..network import Network


class NodeModel(BaseModel):
    id: int
    x: float
    y: float


class EdgeModel(BaseModel):
    i: int
    j: int
    distance: float = Field(gt=0)


class NetworkModel(BaseModel):
    nodes: list[NodeModel]
    radio_range: float = Field(gt=0)
    measurement_noise_sigma: float = 0.0
    edges: list[EdgeModel]

    def to_network(self) -> Network:
        nodes = sorted(self.nodes, key=lambda n: n.id)
        if [n.id for n in nodes] != list(range(len(nodes))):
            raise ValueError("node ids must be 0..n-1")
        positions = np.array([[n.x, n.y] for n in nodes], dtype=float)
        edges = {(min(e.i, e.j), max(e.i, e.j)): e.distance for e in self.edges}
        return Network(positions, self.radio_range, edges, self.measurement_noise_sigma)

    @classmethod
    def from_network(cls, net: Network) -> "NetworkModel":
        return cls(
            nodes=[NodeModel(id=i, x=float(x), y=float(y)) for i, (x, y) in enumerate(net.positions)],
            radio_range=net.radio_range,
            measurement_noise_sigma=net.measurement_noise_sigma,
            edges=[EdgeModel(i=i, j=j, distance=d) for (i, j), d in sorted(net.edges.items())],
        )


class AnchorModel(BaseModel):
    id: int
    x: float
    y: float


class PositionModel(BaseModel):
    id: int
    x: float
    y: float


class LocalizeRequest(BaseModel):
    network: NetworkModel
    anchors: list[AnchorModel]
    algorithm: Literal["mds_map", "cb_mds"] = "cb_mds"
    cluster_count: int = 15
    seed: int = 0


class LocalizeResponse(BaseModel):
    algorithm: str
    cluster_count: Optional[int]
    positions: list[PositionModel]


class TopologyModel(BaseModel):
    shape: str
    placement: str
    nodes: Optional[int] = None
    side_length: float = 10.0
    grid_spacing: float = 1.0
    placement_noise_sigma: float = 0.1

    def to_config(self) -> TopologyConfig:
        return TopologyConfig(
            self.shape, self.placement, self.nodes,
            self.side_length, self.grid_spacing, self.placement_noise_sigma,
        )


class SweepRequest(BaseModel):
    topologies: Optional[list[TopologyModel]] = None
    radio_ranges: list[float] = Field(default_factory=lambda: list(DEFAULT_RADIO_RANGES))
    cluster_counts: list[int] = Field(default_factory=lambda: list(DEFAULT_CLUSTER_COUNTS))
    anchor_counts: list[int] = Field(default_factory=lambda: list(DEFAULT_ANCHOR_COUNTS))
    trials: int = 30
    base_seed: int = 0
    algorithms: list[str] = Field(default_factory=lambda: ["mds_map", "cb_mds"])

    def to_config(self) -> ExperimentConfig:
        topologies = (
            default_topologies()
            if self.topologies is None
            else [t.to_config() for t in self.topologies]
        )
        return ExperimentConfig(
            topologies=topologies,
            radio_ranges=self.radio_ranges,
            cluster_counts=self.cluster_counts,
            anchor_counts=self.anchor_counts,
            trials=self.trials,
            base_seed=self.base_seed,
            algorithms=self.algorithms,
        )


class SweepResponse(BaseModel):
    rows: int
    failures: int
    raw_csv: str
    summary_csv: str


class DemoRequest(BaseModel):
    shape: str = "c"
    placement: str = "random"
    nodes: Optional[int] = None
    radio_range: float = 2.0
    cluster_count: int = 15
    anchors: int = 4
    seed: int = 0
    include_svg: bool = True


class AlgorithmRunModel(BaseModel):
    mean_err_over_R: float
    runtime_ms: float
    positions: list[PositionModel]


class DemoResponse(BaseModel):
    shape: str
    placement: str
    nodes: int
    radio_range: float
    cluster_count: int
    actual_k: int
    anchor_ids: list[int]
    seed: int
    connectivity: float
    tags: list[str]
    runs: dict[str, AlgorithmRunModel]
    positions_csv: dict[str, str]
    svg: Optional[str] = None

    @classmethod
    def from_result(cls, result: DemoResult) -> "DemoResponse":
        from ..localization import positions_csv

        truth = result.net.position_map()
        csvs = {
            name: positions_csv(truth, run.positions)
            for name, run in result.runs.items()
        }
        runs = {
            name: AlgorithmRunModel(
                mean_err_over_R=run.error,
                runtime_ms=run.runtime_ms,
                positions=[
                    PositionModel(id=i, x=float(x), y=float(y))
                    for i, (x, y) in zip(run.positions.node_ids, run.positions.coords)
                ],
            )
            for name, run in result.runs.items()
        }
        return cls(
            shape=str(result.topology.shape),
            placement=str(result.topology.placement),
            nodes=result.nodes,
            radio_range=result.radio_range,
            cluster_count=result.cluster_count,
            actual_k=result.actual_k,
            anchor_ids=result.anchor_ids,
            seed=result.seed,
            connectivity=result.connectivity,
            tags=result.tags,
            runs=runs,
            positions_csv=csvs,
            svg=result.svg,
        )


class CheckModel(BaseModel):
    name: str
    passed: bool
    detail: str

    @classmethod
    def from_result(cls, check: CheckResult) -> "CheckModel":
        return cls(name=check.name, passed=check.passed, detail=check.detail)


class ValidateResponse(BaseModel):
    checks: list[CheckModel]
    all_passed: bool


class HealthResponse(BaseModel):
    status: str
    version: str
