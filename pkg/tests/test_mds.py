import numpy as np
import pytest

from conftest import pairwise
from cbmds.errors import EmptyInput, NonFinite
from cbmds.mds import classical_mds
from cbmds.network import DistanceMatrix


def dm(points: np.ndarray) -> DistanceMatrix:
    return DistanceMatrix(list(range(len(points))), pairwise(points))


def test_exact_recovery_of_euclidean_configurations():
    for seed in range(30):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 60))
        points = rng.uniform(-5, 5, size=(n, 2))
        rel = classical_mds(dm(points))
        assert rel.node_ids == list(range(n))
        assert np.abs(pairwise(rel.coords) - pairwise(points)).max() <= 1e-9


def test_output_is_centered():
    rng = np.random.default_rng(4)
    points = rng.uniform(0, 10, size=(25, 2)) + 40.0  # far from origin
    rel = classical_mds(dm(points))
    assert np.abs(rel.coords.mean(axis=0)).max() <= 1e-9


def test_single_and_pair():
    rel = classical_mds(DistanceMatrix([0], np.zeros((1, 1))))
    assert rel.coords.shape == (1, 2)
    assert np.allclose(rel.coords, 0.0)

    rel = classical_mds(DistanceMatrix([0, 1], np.array([[0.0, 3.0], [3.0, 0.0]])))
    assert np.hypot(*(rel.coords[0] - rel.coords[1])) == pytest.approx(3.0, abs=1e-12)


def test_collinear_points_use_one_axis():
    points = np.column_stack([np.linspace(0, 9, 10), np.zeros(10)])
    rel = classical_mds(dm(points))
    # second principal axis carries no variance for a 1-D configuration;
    # eigh leaves eps-size eigenvalues there, so sqrt gives ~1e-8 noise
    spread = rel.coords - rel.coords.mean(axis=0)
    assert np.abs(spread[:, 1]).max() <= 1e-6
    assert np.abs(pairwise(rel.coords) - pairwise(points)).max() <= 1e-9


def test_negative_eigenvalues_clamped_not_nan():
    # regular tetrahedron distances: not embeddable in the plane, needs the
    # clamp-at-zero branch, output must stay finite
    values = np.ones((4, 4)) - np.eye(4)
    rel = classical_mds(DistanceMatrix([0, 1, 2, 3], values))
    assert np.isfinite(rel.coords).all()
    assert rel.coords.shape == (4, 2)


def test_hop_distance_curvature_shrinks_not_explodes():
    # path-graph style distances (|i-j|) for points on a circle arc are
    # non-Euclidean but classical MDS should stay bounded by the input scale
    n = 12
    values = np.abs(np.subtract.outer(np.arange(n), np.arange(n))).astype(float)
    rel = classical_mds(DistanceMatrix(list(range(n)), values))
    assert np.isfinite(rel.coords).all()
    assert pairwise(rel.coords).max() <= values.max() * 2


def test_dim_parameter_pads_with_zeros():
    points = np.random.default_rng(8).uniform(0, 5, size=(6, 2))
    rel = classical_mds(dm(points), dim=4)
    assert rel.coords.shape == (6, 4)
    assert np.abs(rel.coords[:, 2:]).max() <= 1e-6  # see collinear test


def test_invalid_inputs():
    with pytest.raises(EmptyInput):
        classical_mds(DistanceMatrix([], np.zeros((0, 0))))
    bad = np.array([[0.0, np.inf], [np.inf, 0.0]])
    with pytest.raises(NonFinite):
        classical_mds(DistanceMatrix([0, 1], bad))
    nan = np.array([[0.0, np.nan], [np.nan, 0.0]])
    with pytest.raises(NonFinite):
        classical_mds(DistanceMatrix([0, 1], nan))


def test_deterministic():
    points = np.random.default_rng(15).uniform(0, 5, size=(30, 2))
    a = classical_mds(dm(points))
    b = classical_mds(dm(points))
    assert np.array_equal(a.coords, b.coords)
