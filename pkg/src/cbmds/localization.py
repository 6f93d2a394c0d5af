"""End-to-end localization pipelines.

mds_map_baseline: full-graph shortest paths -> classical MDS -> anchor fit.

cb_mds: k-means clustering -> cluster extension -> per-cluster local maps ->
greedy master/slave merging on shared gateway nodes -> anchor fit. Anchors
take part in the pipeline like ordinary nodes and only matter for the final
similarity alignment.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .alignment import apply_transform, procrustes_rigid, procrustes_similarity
from .clustering import ClusterSet, extend_clusters, kmeans_clusters
from .errors import MismatchedNodeSets, OverlapTooSmall, SubsetDisconnected, TooFewAnchors
from .mds import RelativeMap, classical_mds
from .network import Network, shortest_path_matrix

MERGE_MIN_COMMON = 3


class Algorithm(str, Enum):
    MDS_MAP = "mds_map"
    CB_MDS = "cb_mds"


@dataclass
class LocalMap:
    """Relative coordinates of one cluster's extended members."""

    cluster_id: int
    relative_map: RelativeMap


@dataclass
class GlobalMap:
    """Relative coordinates of all nodes after merging."""

    relative_map: RelativeMap
    provenance: Algorithm
    merge_order: list[tuple[int, int]]


def build_local_maps(clusters: ClusterSet, net: Network) -> list[LocalMap]:
    """Shortest-path matrix (restricted to the cluster) + MDS, per cluster."""
    maps = []
    for cid, members in enumerate(clusters.extended_members):
        try:
            dmat = shortest_path_matrix(net, members)
        except SubsetDisconnected as exc:
            raise SubsetDisconnected(exc.node_i, exc.node_j, cluster_id=cid) from exc
        maps.append(LocalMap(cid, classical_mds(dmat)))
    return maps


def merge_local_maps(maps: list[LocalMap], clusters: ClusterSet) -> GlobalMap:
    """Greedy iterative merge of local maps into one frame.

    The largest extended cluster (tie: lowest id) seeds the merged set and
    keeps its coordinates. Each step picks the unmerged cluster sharing the
    most (>= 3) nodes with the merged set, rigidly aligns it onto the shared
    nodes' placed coordinates, and adopts only its not-yet-placed nodes, so
    placed coordinates never change. Raises OverlapTooSmall when no remaining
    cluster shares 3 nodes with the merged set.
    """
    by_id = {m.cluster_id: m for m in maps}
    if len(by_id) != clusters.k:
        raise ValueError("need exactly one local map per cluster")
    if clusters.k == 1:
        return GlobalMap(by_id[0].relative_map, Algorithm.CB_MDS, [])

    seed = min(range(clusters.k), key=lambda c: (-len(clusters.extended_members[c]), c))
    placed: dict[int, np.ndarray] = {}
    seed_map = by_id[seed].relative_map
    for node, coord in zip(seed_map.node_ids, seed_map.coords):
        placed[node] = coord
    unmerged = set(range(clusters.k)) - {seed}
    merge_order: list[tuple[int, int]] = []

    while unmerged:
        best, best_common = None, []
        for cid in sorted(unmerged):
            common = [n for n in clusters.extended_members[cid] if n in placed]
            if len(common) > len(best_common):
                best, best_common = cid, common
        if len(best_common) < MERGE_MIN_COMMON:
            raise OverlapTooSmall(best, len(best_common))

        local = by_id[best].relative_map
        index = {n: i for i, n in enumerate(local.node_ids)}
        src = local.coords[[index[n] for n in best_common]]
        dst = np.array([placed[n] for n in best_common])
        transform = procrustes_rigid(src, dst)
        moved = apply_transform(transform, local.coords)
        for node, coord in zip(local.node_ids, moved):
            if node not in placed:
                placed[node] = coord
        merge_order.append((seed, best))
        unmerged.remove(best)

    ids = sorted(placed)
    coords = np.array([placed[n] for n in ids])
    return GlobalMap(RelativeMap(ids, coords), Algorithm.CB_MDS, merge_order)


def _check_anchors(net: Network, anchors: Mapping[int, Iterable[float]]) -> None:
    if len(anchors) < 3:
        raise TooFewAnchors(f"got {len(anchors)} anchors, need >= 3")
    n = len(net)
    for node in anchors:
        if not 0 <= int(node) < n:
            raise ValueError(f"anchor id {node} is not a network node")


def align_to_anchors(
    relative: RelativeMap, anchors: Mapping[int, Iterable[float]]
) -> RelativeMap:
    """Fit the best similarity transform on the anchors and apply it to all nodes."""
    ids = sorted(anchors)
    index = {n: i for i, n in enumerate(relative.node_ids)}
    src = relative.coords[[index[n] for n in ids]]
    dst = np.array([np.asarray(anchors[n], dtype=float) for n in ids])
    transform = procrustes_similarity(src, dst)
    return RelativeMap(list(relative.node_ids), apply_transform(transform, relative.coords))


def cb_mds(
    net: Network,
    k: int,
    anchors: Mapping[int, Iterable[float]],
    seed: int = 0,
) -> RelativeMap:
    """Cluster-based pipeline: cluster, extend, map, merge, then pin to anchors."""
    _check_anchors(net, anchors)
    clusters = extend_clusters(kmeans_clusters(net, k, seed), net)
    maps = build_local_maps(clusters, net)
    merged = merge_local_maps(maps, clusters)
    return align_to_anchors(merged.relative_map, anchors)


def mds_map_baseline(
    net: Network, anchors: Mapping[int, Iterable[float]]
) -> RelativeMap:
    """Baseline pipeline: full-graph shortest paths, one MDS, anchor fit."""
    _check_anchors(net, anchors)
    dmat = shortest_path_matrix(net, sorted(net.node_ids))
    return align_to_anchors(classical_mds(dmat), anchors)


def _as_position_dict(positions) -> dict[int, np.ndarray]:
    if isinstance(positions, RelativeMap):
        return positions.as_dict()
    return {int(n): np.asarray(p, dtype=float) for n, p in dict(positions).items()}


def mean_normalized_error(estimated, truth, radio_range: float) -> float:
    """Mean Euclidean position error divided by the radio range."""
    est = _as_position_dict(estimated)
    ref = _as_position_dict(truth)
    if est.keys() != ref.keys():
        raise MismatchedNodeSets(
            f"estimated covers {len(est)} nodes, truth covers {len(ref)}"
        )
    ids = sorted(est)
    err = np.array([np.hypot(*(est[n] - ref[n])) for n in ids])
    return float(err.mean() / radio_range)


def positions_csv(truth, estimated) -> str:
    """CSV serialization of a position map: node_id,true_x,true_y,est_x,est_y."""
    est = _as_position_dict(estimated)
    ref = _as_position_dict(truth)
    if est.keys() != ref.keys():
        raise MismatchedNodeSets("truth and estimate cover different nodes")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["node_id", "true_x", "true_y", "est_x", "est_y"])
    for node in sorted(ref):
        tx, ty = ref[node]
        ex, ey = est[node]
        writer.writerow([node, repr(float(tx)), repr(float(ty)), repr(float(ex)), repr(float(ey))])
    return out.getvalue()
