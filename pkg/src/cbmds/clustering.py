"""Initial clustering (k-means on ground-truth positions) and cluster extension.

Core memberships form a partition of the nodes. Extension adds, for every
radio edge crossing a cluster boundary, each endpoint to the other endpoint's
cluster; such nodes become gateways and participate in at least two clusters.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import KTooLarge
from .network import Network

KMEANS_MAX_ITER = 300


@dataclass
class ClusterSet:
    """Partition into clusters with heads, plus post-extension memberships.

    memberships maps node id -> sorted cluster ids the node participates in
    (its core, plus any clusters that adopted it as a gateway).
    """

    k: int
    core_members: list[list[int]]
    heads: list[int]
    extended_members: list[list[int]]
    memberships: dict[int, list[int]] = field(repr=False)

    def gateway_nodes(self) -> list[int]:
        """Nodes participating in two or more clusters."""
        return sorted(n for n, cl in self.memberships.items() if len(cl) >= 2)

    def core_of(self) -> dict[int, int]:
        return {n: c for c, members in enumerate(self.core_members) for n in members}


def _plus_plus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(points)
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    closest = ((points - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = closest.sum()
        if total <= 0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=closest / total))
        centers[c] = points[idx]
        closest = np.minimum(closest, ((points - points[idx]) ** 2).sum(axis=1))
    return centers


def _repair_empty(labels: np.ndarray, points: np.ndarray, centers: np.ndarray, k: int) -> np.ndarray:
    """Give each empty cluster the point currently farthest from its centroid."""
    sizes = np.bincount(labels, minlength=k)
    if not (sizes == 0).any():
        return labels
    labels = labels.copy()
    dist_own = ((points - centers[labels]) ** 2).sum(axis=1)
    for c in np.flatnonzero(sizes == 0):
        movable = np.flatnonzero(sizes[labels] > 1)
        p = movable[np.argmax(dist_own[movable])]
        sizes[labels[p]] -= 1
        labels[p] = c
        sizes[c] = 1
        dist_own[p] = -1.0
    return labels


def kmeans_clusters(deployment, k: int, seed: int = 0) -> ClusterSet:
    """Lloyd's algorithm with k-means++ seeding on ground-truth positions.

    Runs to an assignment fixpoint or KMEANS_MAX_ITER iterations; empty
    clusters are repaired by stealing the point farthest from its centroid.
    The head of each cluster is the member nearest the cluster centroid
    (ties: lowest node id). Deterministic given the seed.
    """
    points = np.asarray(getattr(deployment, "positions", deployment), dtype=float)
    n = len(points)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > n:
        raise KTooLarge(f"k={k} exceeds node count {n}")

    rng = np.random.default_rng(seed)
    centers = _plus_plus_init(points, k, rng)
    labels = np.full(n, -1, dtype=int)
    for _ in range(KMEANS_MAX_ITER):
        dist2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = _repair_empty(dist2.argmin(axis=1), points, centers, k)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        centers = np.array([points[labels == c].mean(axis=0) for c in range(k)])

    cores = [sorted(np.flatnonzero(labels == c).tolist()) for c in range(k)]
    heads = []
    for c, members in enumerate(cores):
        centroid = points[members].mean(axis=0)
        dists = ((points[members] - centroid) ** 2).sum(axis=1)
        heads.append(members[int(np.argmin(dists))])

    memberships = {node: [c] for c, members in enumerate(cores) for node in members}
    return ClusterSet(k, cores, heads, [list(m) for m in cores], memberships)


def extend_clusters(clusters: ClusterSet, net: Network) -> ClusterSet:
    """Adopt one-hop neighbors across cluster boundaries; both endpoints become gateways.

    Core memberships are unchanged; a new ClusterSet is returned.
    """
    core_of = clusters.core_of()
    if len(core_of) != len(net):
        raise ValueError("clusters do not cover the network's nodes")
    extended = [set(members) for members in clusters.core_members]
    for i, j in net.edges:
        a, b = core_of[i], core_of[j]
        if a != b:
            extended[a].add(j)
            extended[b].add(i)
    memberships: dict[int, list[int]] = {n: [] for n in core_of}
    for c, members in enumerate(extended):
        for node in members:
            memberships[node].append(c)
    return ClusterSet(
        clusters.k,
        [list(m) for m in clusters.core_members],
        list(clusters.heads),
        [sorted(m) for m in extended],
        {n: sorted(cl) for n, cl in memberships.items()},
    )
