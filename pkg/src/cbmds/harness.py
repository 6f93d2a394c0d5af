"""Experiment sweeps, trial management and result tables.

A sweep walks the grid (topology x radio range x anchor count x trial),
builds one network per cell-trial (regenerating on disconnection), runs the
baseline once and the cluster-based pipeline once per cluster count, and
records one row per run. Every trial is a pure function of seeds derived by
hashing the base seed with the cell coordinates, so sweeps are reproducible
and trials can run in parallel (CBMDS_THREADS) without changing the output.
"""
from __future__ import annotations

import csv
import hashlib
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .clustering import extend_clusters, kmeans_clusters
from .errors import Disconnected, OverlapTooSmall, SubsetDisconnected
from .localization import (
    cb_mds,
    mds_map_baseline,
    mean_normalized_error,
)
from .mds import RelativeMap
from .network import Network, average_connectivity, build_network
from .topology import FieldSpec, generate_deployment

RAW_HEADER = [
    "topology", "placement", "nodes", "R_over_r", "k", "anchors", "algorithm",
    "trial", "seed", "connectivity", "mean_err_over_R", "runtime_ms", "status",
]
SUMMARY_HEADER = [
    "topology", "placement", "nodes", "R_over_r", "k", "anchors", "algorithm",
    "trials", "mean_connectivity", "mean_err_over_R", "std_err_over_R",
    "mean_runtime_ms",
]

DEFAULT_RADIO_RANGES = (1.3, 1.5, 1.8, 2.0, 2.5)
DEFAULT_CLUSTER_COUNTS = (5, 7, 10, 15)
DEFAULT_ANCHOR_COUNTS = (3, 4, 6, 10)
# Reported deployment sizes for randomly placed irregular topologies.
DEFAULT_RANDOM_NODE_COUNTS = {"c": 161, "l": 110, "h": 120, "square": 100}

DISCONNECT_ATTEMPTS = 100
KMEANS_RESEED_ATTEMPTS = 3
K_FALLBACK = (15, 10, 7, 5)


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from arbitrary coordinates (sha256, not salted)."""
    text = "|".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class TopologyConfig:
    shape: str
    placement: str
    node_count: int | None = None  # random placement only
    side_length: float = 10.0
    grid_spacing: float = 1.0
    placement_noise_sigma: float = 0.1

    def field_spec(self, seed: int) -> FieldSpec:
        return FieldSpec(
            shape=self.shape,
            placement=self.placement,
            side_length=self.side_length,
            grid_spacing=self.grid_spacing,
            node_count=self.node_count,
            placement_noise_sigma=self.placement_noise_sigma,
            seed=seed,
        )

    @classmethod
    def from_dict(cls, doc: dict) -> "TopologyConfig":
        return cls(
            shape=doc["shape"],
            placement=doc["placement"],
            node_count=doc.get("nodes"),
            side_length=doc.get("side_length", 10.0),
            grid_spacing=doc.get("grid_spacing", 1.0),
            placement_noise_sigma=doc.get("placement_noise_sigma", 0.1),
        )

    def to_dict(self) -> dict:
        doc = {"shape": self.shape, "placement": self.placement}
        if self.node_count is not None:
            doc["nodes"] = self.node_count
        if self.side_length != 10.0:
            doc["side_length"] = self.side_length
        if self.grid_spacing != 1.0:
            doc["grid_spacing"] = self.grid_spacing
        if self.placement_noise_sigma != 0.1:
            doc["placement_noise_sigma"] = self.placement_noise_sigma
        return doc


def default_topologies() -> list[TopologyConfig]:
    out = []
    for shape in ("c", "l", "h"):
        out.append(TopologyConfig(shape, "grid"))
        out.append(TopologyConfig(shape, "random", DEFAULT_RANDOM_NODE_COUNTS[shape]))
    return out


@dataclass
class ExperimentConfig:
    topologies: list[TopologyConfig] = field(default_factory=default_topologies)
    radio_ranges: list[float] = field(default_factory=lambda: list(DEFAULT_RADIO_RANGES))
    cluster_counts: list[int] = field(default_factory=lambda: list(DEFAULT_CLUSTER_COUNTS))
    anchor_counts: list[int] = field(default_factory=lambda: list(DEFAULT_ANCHOR_COUNTS))
    trials: int = 30
    base_seed: int = 0
    algorithms: list[str] = field(default_factory=lambda: ["mds_map", "cb_mds"])

    def __post_init__(self):
        for name in ("topologies", "radio_ranges", "cluster_counts", "anchor_counts", "algorithms"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for algo in self.algorithms:
            if algo not in ("mds_map", "cb_mds"):
                raise ValueError(f"unknown algorithm {algo!r}")

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        kwargs = {}
        if "topologies" in doc:
            kwargs["topologies"] = [TopologyConfig.from_dict(t) for t in doc["topologies"]]
        for key in ("radio_ranges", "cluster_counts", "anchor_counts", "trials", "base_seed", "algorithms"):
            if key in doc:
                kwargs[key] = doc[key]
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {
            "topologies": [t.to_dict() for t in self.topologies],
            "radio_ranges": list(self.radio_ranges),
            "cluster_counts": list(self.cluster_counts),
            "anchor_counts": list(self.anchor_counts),
            "trials": self.trials,
            "base_seed": self.base_seed,
            "algorithms": list(self.algorithms),
        }


@dataclass
class TrialResult:
    topology: str
    placement: str
    nodes: int | None
    radio_range: float
    k: int | None  # None for the baseline, which ignores cluster count
    anchors: int
    algorithm: str
    trial: int
    seed: int
    connectivity: float | None
    mean_error: float | None
    runtime_ms: float | None
    status: str


def _network_for_trial(topo: TopologyConfig, radio_range: float, trial_seed: int):
    """Generate a connected network, regenerating with fresh seeds when needed.

    Returns (net_or_None, node_count, tags).
    """
    nodes = None
    for attempt in range(DISCONNECT_ATTEMPTS):
        spec = topo.field_spec(seed=derive_seed(trial_seed, "deploy", attempt))
        deployment = generate_deployment(spec)
        nodes = len(deployment)
        try:
            net = build_network(deployment, radio_range)
        except Disconnected:
            continue
        tags = ["disconnected-regenerated"] if attempt else []
        return net, nodes, tags
    return None, nodes, ["failed:disconnected"]


def _cb_with_recovery(net: Network, nominal_k: int, anchors, trial_seed: int):
    """cb_mds with the harness recovery policy.

    SubsetDisconnected: re-seed k-means up to KMEANS_RESEED_ATTEMPTS times.
    OverlapTooSmall (or reseeds exhausted): fall to the next smaller cluster
    count from K_FALLBACK. Returns (positions, used_k, used_seed, tags);
    raises the last error if the ladder is exhausted.
    """
    ladder = [nominal_k] + [k for k in K_FALLBACK if k < nominal_k]
    tags: list[str] = []
    last_error: Exception | None = None
    for k in ladder:
        for attempt in range(KMEANS_RESEED_ATTEMPTS):
            seed = derive_seed(trial_seed, "kmeans", k, attempt)
            try:
                positions = cb_mds(net, k, anchors, seed=seed)
            except SubsetDisconnected as exc:
                last_error = exc
                if "reseeded-kmeans" not in tags:
                    tags.append("reseeded-kmeans")
                continue
            except OverlapTooSmall as exc:
                last_error = exc
                break
            if k != nominal_k:
                tags.append(f"retried-k={k}")
            return positions, k, seed, tags
    raise last_error


def run_trial_group(
    config: ExperimentConfig, topo: TopologyConfig, radio_range: float,
    anchor_count: int, trial: int,
) -> list[TrialResult]:
    """All rows for one (topology, R, anchors, trial) cell.

    The baseline runs once (k column empty); the cluster-based pipeline runs
    once per configured cluster count on the same network and anchors.
    """
    trial_seed = derive_seed(
        "trial", config.base_seed, topo.shape, topo.placement, topo.node_count,
        radio_range, anchor_count, trial,
    )

    def row(algorithm, k, connectivity, error, runtime, status, nodes):
        return TrialResult(
            topo.shape, topo.placement, nodes, radio_range, k, anchor_count,
            algorithm, trial, trial_seed, connectivity, error, runtime, status,
        )

    def failure_rows(reason, nodes=None, connectivity=None):
        rows = []
        if "mds_map" in config.algorithms:
            rows.append(row("mds_map", None, connectivity, None, None, reason, nodes))
        if "cb_mds" in config.algorithms:
            for k in config.cluster_counts:
                rows.append(row("cb_mds", k, connectivity, None, None, reason, nodes))
        return rows

    try:
        net, nodes, net_tags = _network_for_trial(topo, radio_range, trial_seed)
    except Exception as exc:  # e.g. MaskEmpty on a degenerate config
        return failure_rows(f"failed:{type(exc).__name__}")
    if net is None:
        return failure_rows("failed:disconnected", nodes)

    connectivity = average_connectivity(net)
    rng = np.random.default_rng(derive_seed(trial_seed, "anchors"))
    try:
        anchor_ids = sorted(rng.choice(len(net), size=anchor_count, replace=False).tolist())
    except ValueError:
        return failure_rows("failed:anchors-exceed-nodes", nodes, connectivity)
    anchors = {i: net.positions[i] for i in anchor_ids}
    truth = net.position_map()

    rows = []
    if "mds_map" in config.algorithms:
        start = time.perf_counter()
        try:
            est = mds_map_baseline(net, anchors)
            error = mean_normalized_error(est, truth, radio_range)
            runtime = (time.perf_counter() - start) * 1e3
            status = ";".join(net_tags) or "ok"
            rows.append(row("mds_map", None, connectivity, error, runtime, status, nodes))
        except Exception as exc:
            rows.append(row("mds_map", None, connectivity, None, None,
                            f"failed:{type(exc).__name__}", nodes))
    if "cb_mds" in config.algorithms:
        for k in config.cluster_counts:
            start = time.perf_counter()
            try:
                est, _, _, tags = _cb_with_recovery(net, k, anchors, trial_seed)
                error = mean_normalized_error(est, truth, radio_range)
                runtime = (time.perf_counter() - start) * 1e3
                status = ";".join(net_tags + tags) or "ok"
                rows.append(row("cb_mds", k, connectivity, error, runtime, status, nodes))
            except Exception as exc:
                rows.append(row("cb_mds", k, connectivity, None, None,
                                f"failed:{type(exc).__name__}", nodes))
    return rows


def _trial_task(args):
    config, topo_index, radio_range, anchor_count, trial = args
    topo = config.topologies[topo_index]
    return run_trial_group(config, topo, radio_range, anchor_count, trial)


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("CBMDS_THREADS", "1")))
    except ValueError:
        return 1


def run_sweep(config: ExperimentConfig) -> list[TrialResult]:
    """Run every cell of the sweep; per-trial failures become rows, never aborts.

    Output order is deterministic and independent of the worker count.
    """
    tasks = [
        (config, ti, radio_range, anchor_count, trial)
        for ti in range(len(config.topologies))
        for radio_range in config.radio_ranges
        for anchor_count in config.anchor_counts
        for trial in range(config.trials)
    ]
    workers = _worker_count()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            groups = list(pool.map(_trial_task, tasks, chunksize=1))
    else:
        groups = [_trial_task(task) for task in tasks]
    return [row for group in groups for row in group]


def raw_csv(results: Sequence[TrialResult]) -> str:
    """Raw per-trial table. runtime_ms is wall-clock and therefore left blank
    here so that identical sweeps produce byte-identical files; measured
    runtimes stay on TrialResult and feed the summary table."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RAW_HEADER)
    for r in results:
        writer.writerow([
            r.topology,
            r.placement,
            "" if r.nodes is None else r.nodes,
            repr(float(r.radio_range)),
            "" if r.k is None else r.k,
            r.anchors,
            r.algorithm,
            r.trial,
            r.seed,
            "" if r.connectivity is None else repr(r.connectivity),
            "" if r.mean_error is None else repr(r.mean_error),
            "",
            r.status,
        ])
    return out.getvalue()


@dataclass
class SummaryRow:
    topology: str
    placement: str
    nodes: int | None
    radio_range: float
    k: int | None
    anchors: int
    algorithm: str
    trials: int
    mean_connectivity: float
    mean_error: float
    std_error: float
    mean_runtime_ms: float


def summarize(results: Sequence[TrialResult]) -> list[SummaryRow]:
    """Group successful rows by configuration cell and average them."""
    groups: dict[tuple, list[TrialResult]] = {}
    for r in results:
        if r.mean_error is None:
            continue
        key = (r.topology, r.placement, r.nodes, r.radio_range, r.k, r.anchors, r.algorithm)
        groups.setdefault(key, []).append(r)
    rows = []
    for key, members in groups.items():
        errors = np.array([m.mean_error for m in members])
        conns = np.array([m.connectivity for m in members])
        runtimes = np.array([m.runtime_ms for m in members], dtype=float)
        rows.append(SummaryRow(
            *key,
            trials=len(members),
            mean_connectivity=float(conns.mean()),
            mean_error=float(errors.mean()),
            std_error=float(errors.std()),
            mean_runtime_ms=float(runtimes.mean()),
        ))
    return rows


def summary_csv(rows: Sequence[SummaryRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SUMMARY_HEADER)
    for r in rows:
        writer.writerow([
            r.topology,
            r.placement,
            "" if r.nodes is None else r.nodes,
            repr(float(r.radio_range)),
            "" if r.k is None else r.k,
            r.anchors,
            r.algorithm,
            r.trials,
            repr(r.mean_connectivity),
            repr(r.mean_error),
            repr(r.std_error),
            f"{r.mean_runtime_ms:.3f}",
        ])
    return out.getvalue()


@dataclass
class AlgorithmRun:
    error: float
    runtime_ms: float
    positions: RelativeMap


@dataclass
class DemoResult:
    topology: TopologyConfig
    radio_range: float
    cluster_count: int
    actual_k: int
    anchor_ids: list[int]
    seed: int
    nodes: int
    connectivity: float
    runs: dict[str, AlgorithmRun]
    tags: list[str]
    net: Network
    svg: str | None = None


def demo_trial(
    shape: str = "c",
    placement: str = "random",
    nodes: int | None = None,
    radio_range: float = 2.0,
    cluster_count: int = 15,
    anchor_count: int = 4,
    seed: int = 0,
    include_svg: bool = True,
) -> DemoResult:
    """One full trial of both algorithms on a freshly generated network."""
    if placement == "random" and nodes is None:
        nodes = DEFAULT_RANDOM_NODE_COUNTS[shape]
    topo = TopologyConfig(shape, placement, nodes)
    net, node_count, tags = _network_for_trial(topo, radio_range, seed)
    if net is None:
        raise Disconnected("could not generate a connected network for the demo")

    rng = np.random.default_rng(derive_seed(seed, "anchors"))
    anchor_ids = sorted(rng.choice(len(net), size=anchor_count, replace=False).tolist())
    anchors = {i: net.positions[i] for i in anchor_ids}
    truth = net.position_map()

    runs: dict[str, AlgorithmRun] = {}
    start = time.perf_counter()
    baseline = mds_map_baseline(net, anchors)
    runs["mds_map"] = AlgorithmRun(
        mean_normalized_error(baseline, truth, radio_range),
        (time.perf_counter() - start) * 1e3,
        baseline,
    )
    start = time.perf_counter()
    clustered, used_k, used_seed, cb_tags = _cb_with_recovery(net, cluster_count, anchors, seed)
    runs["cb_mds"] = AlgorithmRun(
        mean_normalized_error(clustered, truth, radio_range),
        (time.perf_counter() - start) * 1e3,
        clustered,
    )
    tags = tags + cb_tags

    svg = None
    if include_svg:
        from .figures import render_figure

        cluster_set = extend_clusters(kmeans_clusters(net, used_k, used_seed), net)
        svg = render_figure(
            net, truth, {name: run.positions for name, run in runs.items()}, cluster_set
        )
    return DemoResult(
        topo, radio_range, cluster_count, used_k, anchor_ids, seed,
        node_count, average_connectivity(net), runs, tags, net, svg,
    )


# ---------------------------------------------------------------------------
# Deterministic validation fixtures (exposed through `cbmds validate` and the
# service). Oracles here are independent of the implementation paths they
# check: pairwise-distance recomputation for MDS, min-plus Floyd-Warshall for
# Dijkstra, analytic transforms for the alignment fits.
# ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def floyd_warshall_reference(n: int, edges: dict[tuple[int, int], float]) -> np.ndarray:
    """Min-plus all-pairs shortest paths; independent of the Dijkstra route."""
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for (i, j), d in edges.items():
        dist[i, j] = d
        dist[j, i] = d
    for via in range(n):
        dist = np.minimum(dist, dist[:, via, None] + dist[None, via, :])
    return dist


def _check_mds_exact_recovery() -> CheckResult:
    from .localization import align_to_anchors
    from .mds import classical_mds
    from .network import DistanceMatrix

    rng = np.random.default_rng(derive_seed("validate", "mds"))
    points = rng.uniform(0, 10, size=(40, 2))
    delta = points[:, None, :] - points[None, :, :]
    dists = np.hypot(delta[..., 0], delta[..., 1])
    rel = classical_mds(DistanceMatrix(list(range(40)), dists))
    out = rel.coords
    rd = np.hypot(*(out[:, None, :] - out[None, :, :]).transpose(2, 0, 1))
    dist_err = float(np.abs(rd - dists).max())
    aligned = align_to_anchors(rel, {i: points[i] for i in range(40)})
    pos_err = float(np.abs(aligned.coords - points).max())
    ok = dist_err <= 1e-9 and pos_err <= 1e-6
    return CheckResult(
        "mds-exact-recovery", ok,
        f"max distance error {dist_err:.2e}, max position error {pos_err:.2e}",
    )


def _check_shortest_paths() -> CheckResult:
    from .network import shortest_path_matrix

    worst = 0.0
    for case in range(10):
        rng = np.random.default_rng(derive_seed("validate", "paths", case))
        for attempt in range(50):
            points = rng.uniform(0, 6, size=(25, 2))
            try:
                net = build_network(points, 2.0)
                break
            except Disconnected:
                continue
        else:
            return CheckResult("shortest-paths", False, "no connected graph found")
        got = shortest_path_matrix(net, list(range(25))).values
        want = floyd_warshall_reference(25, net.edges)
        worst = max(worst, float(np.abs(got - want).max()))
    ok = worst <= 1e-12
    return CheckResult("shortest-paths", ok, f"max |dijkstra - floyd-warshall| = {worst:.2e}")


def _check_procrustes() -> CheckResult:
    from .alignment import apply_transform, procrustes_rigid, procrustes_similarity, Transform2D

    rng = np.random.default_rng(derive_seed("validate", "procrustes"))
    worst = 0.0
    for _ in range(20):
        pts = rng.uniform(-5, 5, size=(6, 2))
        angle = rng.uniform(0, 2 * np.pi)
        rot = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
        if rng.uniform() < 0.5:
            rot = rot @ np.diag([1.0, -1.0])
        truth = Transform2D(rot, rng.uniform(-3, 3, size=2), float(rng.uniform(0.5, 2.0)))
        dst = apply_transform(truth, pts)
        fit = procrustes_similarity(pts, dst)
        worst = max(worst, float(np.abs(apply_transform(fit, pts) - dst).max()))
        rigid_dst = apply_transform(Transform2D(rot, truth.translation, 1.0), pts)
        fit = procrustes_rigid(pts, rigid_dst)
        worst = max(worst, float(np.abs(apply_transform(fit, pts) - rigid_dst).max()))
    ok = worst <= 1e-9
    return CheckResult("procrustes-recovery", ok, f"max reconstruction error {worst:.2e}")


def _check_reduction_identity() -> CheckResult:
    rng = np.random.default_rng(derive_seed("validate", "reduction"))
    for attempt in range(50):
        points = rng.uniform(0, 8, size=(30, 2))
        try:
            net = build_network(points, 2.5)
            break
        except Disconnected:
            continue
    else:
        return CheckResult("reduction-identity", False, "no connected graph found")
    anchors = {0: net.positions[0], 7: net.positions[7], 19: net.positions[19]}
    a = cb_mds(net, 1, anchors, seed=123)
    b = mds_map_baseline(net, anchors)
    ok = a.node_ids == b.node_ids and np.array_equal(a.coords, b.coords)
    return CheckResult("reduction-identity", ok, "k=1 pipeline equals baseline bit for bit"
                       if ok else "outputs differ")


def _check_dense_exactness() -> CheckResult:
    rng = np.random.default_rng(derive_seed("validate", "dense"))
    points = rng.uniform(0, 3, size=(25, 2))
    net = build_network(points, 10.0)  # complete graph: shortest paths are exact
    anchors = {i: net.positions[i] for i in (0, 5, 11, 17)}
    est = cb_mds(net, 3, anchors, seed=7)
    err = mean_normalized_error(est, net.position_map(), 10.0)
    ok = err <= 1e-6
    return CheckResult("dense-exactness", ok, f"mean normalized error {err:.2e}")


def validate_fixtures() -> list[CheckResult]:
    """Deterministic self-checks used by the `validate` CLI/service command."""
    return [
        _check_mds_exact_recovery(),
        _check_shortest_paths(),
        _check_procrustes(),
        _check_reduction_identity(),
        _check_dense_exactness(),
    ]
