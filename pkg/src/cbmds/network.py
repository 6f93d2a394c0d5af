"""Radio-range connectivity graphs and shortest-path distance matrices.

A Network is the unit-disc graph over a deployment: two nodes share an edge
iff their true distance is <= the radio range, and each edge carries a
measured distance (exact by default, optionally with multiplicative Gaussian
noise).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components, dijkstra

from .errors import Disconnected, EmptyInput, SubsetDisconnected
from .topology import Deployment


@dataclass
class Network:
    """Immutable radio graph. positions are ground truth, kept for evaluation."""

    positions: np.ndarray
    radio_range: float
    edges: dict[tuple[int, int], float]
    measurement_noise_sigma: float = 0.0
    _adjacency: sp.csr_matrix | None = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.positions)

    @property
    def node_ids(self) -> list[int]:
        return list(range(len(self.positions)))

    def adjacency(self) -> sp.csr_matrix:
        """Symmetric sparse matrix of measured edge distances (cached)."""
        if self._adjacency is None:
            n = len(self.positions)
            if self.edges:
                pairs = np.array(list(self.edges.keys()), dtype=int)
                dists = np.fromiter(self.edges.values(), dtype=float)
                rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
                cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
                data = np.concatenate([dists, dists])
            else:
                rows = cols = np.array([], dtype=int)
                data = np.array([], dtype=float)
            self._adjacency = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
        return self._adjacency

    def position_map(self) -> dict[int, np.ndarray]:
        return {i: self.positions[i] for i in range(len(self.positions))}

    def to_json(self) -> str:
        """Documented JSON form: node array, radio range, edge list."""
        doc = {
            "nodes": [
                {"id": i, "x": float(x), "y": float(y)}
                for i, (x, y) in enumerate(self.positions)
            ],
            "radio_range": self.radio_range,
            "measurement_noise_sigma": self.measurement_noise_sigma,
            "edges": [
                {"i": i, "j": j, "distance": d}
                for (i, j), d in sorted(self.edges.items())
            ],
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Network":
        doc = json.loads(text)
        nodes = sorted(doc["nodes"], key=lambda n: n["id"])
        if [n["id"] for n in nodes] != list(range(len(nodes))):
            raise ValueError("node ids must be 0..n-1")
        positions = np.array([[n["x"], n["y"]] for n in nodes], dtype=float)
        edges = {
            (min(e["i"], e["j"]), max(e["i"], e["j"])): float(e["distance"])
            for e in doc["edges"]
        }
        return cls(
            positions,
            float(doc["radio_range"]),
            edges,
            float(doc.get("measurement_noise_sigma", 0.0)),
        )


@dataclass
class DistanceMatrix:
    """Symmetric non-negative matrix with zero diagonal over an ordered node list."""

    node_ids: list[int]
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.node_ids)


def build_network(
    deployment: Deployment | np.ndarray,
    radio_range: float,
    noise_sigma: float = 0.0,
    seed: int = 0,
    require_connected: bool = True,
) -> Network:
    """Build the unit-disc radio graph over a deployment.

    Edges are exactly the pairs with true distance <= radio_range (ties are
    edges). measured = true * (1 + eps), eps ~ N(0, noise_sigma), clamped
    positive. Raises Disconnected if the graph is not connected.
    """
    if radio_range <= 0:
        raise ValueError("radio_range must be positive")
    positions = np.asarray(getattr(deployment, "positions", deployment), dtype=float)
    n = len(positions)
    diff = positions[:, None, :] - positions[None, :, :]
    true_dist = np.hypot(diff[..., 0], diff[..., 1])
    iu, ju = np.triu_indices(n, k=1)
    within = true_dist[iu, ju] <= radio_range
    pair_i, pair_j = iu[within], ju[within]
    measured = true_dist[pair_i, pair_j]
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        measured = measured * (1.0 + rng.normal(0.0, noise_sigma, size=measured.shape))
        measured = np.maximum(measured, 1e-12)
    edges = {
        (int(i), int(j)): float(d) for i, j, d in zip(pair_i, pair_j, measured)
    }
    net = Network(positions, float(radio_range), edges, float(noise_sigma))
    if require_connected and n > 0:
        n_comp, _ = connected_components(net.adjacency(), directed=False)
        if n_comp > 1:
            raise Disconnected(f"radio graph has {n_comp} components")
    return net


def average_connectivity(net: Network) -> float:
    """Mean number of one-hop neighbors: 2|E| / |V|."""
    if len(net) == 0:
        return 0.0
    return 2.0 * len(net.edges) / len(net)


def shortest_path_matrix(net: Network, subset: Sequence[int]) -> DistanceMatrix:
    """All-pairs distances over a node subset, paths restricted to the subset.

    Direct edges keep their measured distance; every other entry is the
    Dijkstra shortest-path length through subset members only. Raises
    SubsetDisconnected naming an unreachable pair.
    """
    ids = [int(i) for i in subset]
    if not ids:
        raise EmptyInput("subset is empty")
    if len(set(ids)) != len(ids):
        raise ValueError("subset contains duplicate node ids")
    k = len(ids)
    if k == 1:
        return DistanceMatrix(ids, np.zeros((1, 1)))

    local = {node: idx for idx, node in enumerate(ids)}
    rows, cols, data = [], [], []
    for (i, j), d in net.edges.items():
        a, b = local.get(i), local.get(j)
        if a is not None and b is not None:
            rows += [a, b]
            cols += [b, a]
            data += [d, d]
    graph = sp.csr_matrix((data, (rows, cols)), shape=(k, k))
    dist = dijkstra(graph, directed=False)

    unreachable = np.argwhere(np.isinf(dist))
    if len(unreachable):
        a, b = unreachable[0]
        raise SubsetDisconnected(ids[a], ids[b])

    # Measured values win over any (noise-induced) shorter multi-hop path.
    for (i, j), d in net.edges.items():
        a, b = local.get(i), local.get(j)
        if a is not None and b is not None:
            dist[a, b] = d
            dist[b, a] = d
    np.fill_diagonal(dist, 0.0)
    return DistanceMatrix(ids, dist)
