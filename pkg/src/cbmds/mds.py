"""Classical (metric) multidimensional scaling.

Maps a distance matrix to low-dimensional coordinates through double
centering and an eigendecomposition of the resulting Gram matrix. Output is
an arbitrary frame: defined only up to rotation, reflection and translation,
with the centroid at the origin.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, NonFinite
from .network import DistanceMatrix


@dataclass
class RelativeMap:
    """2-D coordinates per node, in an arbitrary (or absolute) frame."""

    node_ids: list[int]
    coords: np.ndarray

    def __len__(self) -> int:
        return len(self.node_ids)

    def as_dict(self) -> dict[int, np.ndarray]:
        return {i: self.coords[k] for k, i in enumerate(self.node_ids)}


def classical_mds(dist: DistanceMatrix, dim: int = 2) -> RelativeMap:
    """Embed a distance matrix in `dim` dimensions.

    B = -1/2 * J * D^2 * J with J = I - (1/n) 11^T; coordinates are the top
    `dim` eigenvectors of B scaled by sqrt of their (non-negativity-clamped)
    eigenvalues. Ties between eigenvalues keep the eigensolver's vector order,
    so output is deterministic for a deterministic solver.

    Raises EmptyInput for a 0-node matrix and NonFinite when D has NaN/inf.
    """
    n = len(dist.node_ids)
    if n == 0:
        raise EmptyInput("distance matrix has no nodes")
    d = np.asarray(dist.values, dtype=float)
    if not np.all(np.isfinite(d)):
        raise NonFinite("distance matrix contains non-finite entries")

    sq = d * d
    centering = np.eye(n) - np.full((n, n), 1.0 / n)
    gram = -0.5 * centering @ sq @ centering
    gram = (gram + gram.T) / 2.0  # kill round-off asymmetry before eigh

    evals, evecs = np.linalg.eigh(gram)
    order = np.argsort(-evals, kind="stable")
    coords = np.zeros((n, dim))
    for axis, idx in enumerate(order[: min(dim, n)]):
        lam = max(evals[idx], 0.0)  # shortest-path matrices need not be Euclidean
        coords[:, axis] = evecs[:, idx] * np.sqrt(lam)
    return RelativeMap(list(dist.node_ids), coords)
