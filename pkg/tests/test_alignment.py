import numpy as np
import pytest

from cbmds.alignment import (
    Transform2D,
    apply_transform,
    procrustes_rigid,
    procrustes_similarity,
    residual,
)
from cbmds.errors import DegenerateInput, IllConditioned


def rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def test_rigid_recovers_rotation_translation():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-5, 5, size=(int(rng.integers(2, 12)), 2))
        rot = rotation(rng.uniform(0, 2 * np.pi))
        shift = rng.uniform(-10, 10, size=2)
        dst = pts @ rot.T + shift
        fit = procrustes_rigid(pts, dst)
        assert np.abs(apply_transform(fit, pts) - dst).max() <= 1e-9
        assert fit.scale == 1.0


def test_rigid_recovers_reflections():
    # reflections are allowed: relative maps have undetermined chirality
    rng = np.random.default_rng(3)
    pts = rng.uniform(-5, 5, size=(8, 2))
    mirror = rotation(0.7) @ np.diag([1.0, -1.0])
    dst = pts @ mirror.T + np.array([2.0, -1.0])
    fit = procrustes_rigid(pts, dst)
    assert np.abs(apply_transform(fit, pts) - dst).max() <= 1e-9
    assert np.linalg.det(fit.rotation) == pytest.approx(-1.0, abs=1e-9)


def test_similarity_recovers_scale():
    for seed in range(20):
        rng = np.random.default_rng(100 + seed)
        pts = rng.uniform(-5, 5, size=(int(rng.integers(3, 12)), 2))
        truth = Transform2D(rotation(rng.uniform(0, 2 * np.pi)),
                            rng.uniform(-3, 3, size=2),
                            float(rng.uniform(0.2, 4.0)))
        dst = apply_transform(truth, pts)
        fit = procrustes_similarity(pts, dst)
        assert fit.scale == pytest.approx(truth.scale, rel=1e-9)
        assert np.abs(apply_transform(fit, pts) - dst).max() <= 1e-8


def test_fit_is_least_squares_optimal():
    rng = np.random.default_rng(7)
    src = rng.uniform(-4, 4, size=(10, 2))
    dst = src @ rotation(1.1).T + rng.normal(0, 0.3, size=src.shape) + 5.0
    fit = procrustes_rigid(src, dst)
    best = residual(fit, src, dst)
    for _ in range(300):
        angle = rng.uniform(0, 2 * np.pi)
        rot = rotation(angle)
        if rng.uniform() < 0.5:
            rot = rot @ np.diag([1.0, -1.0])
        cand = Transform2D(rot, dst.mean(axis=0) - rot @ src.mean(axis=0), 1.0)
        assert best <= residual(cand, src, dst) + 1e-12


def test_residual_zero_for_exact_fit():
    rng = np.random.default_rng(9)
    src = rng.uniform(0, 1, size=(5, 2))
    dst = src @ rotation(0.4).T + 1.0
    fit = procrustes_rigid(src, dst)
    assert residual(fit, src, dst) <= 1e-10


def test_apply_inverse_round_trip():
    t = Transform2D(rotation(0.9), np.array([3.0, -2.0]), 1.7)
    pts = np.random.default_rng(2).uniform(-1, 1, size=(6, 2))
    back = apply_transform(t.inverse(), apply_transform(t, pts))
    assert np.abs(back - pts).max() <= 1e-12


def test_minimum_point_counts():
    one = np.array([[1.0, 2.0]])
    with pytest.raises(ValueError):
        procrustes_rigid(one, one)
    two = np.array([[0.0, 0.0], [1.0, 0.0]])
    with pytest.raises(ValueError):
        procrustes_similarity(two, two)
    with pytest.raises(ValueError):
        procrustes_rigid(two, np.vstack([two, two]))  # shape mismatch


def test_degenerate_all_points_identical():
    same = np.ones((4, 2))
    other = np.random.default_rng(0).uniform(size=(4, 2))
    with pytest.raises(DegenerateInput):
        procrustes_rigid(same, other)
    with pytest.raises(DegenerateInput):
        procrustes_similarity(other, same)


def test_collinear_points_warn_ill_conditioned():
    src = np.column_stack([np.linspace(0, 5, 6), np.zeros(6)])
    dst = src @ rotation(0.3).T + 2.0
    with pytest.warns(IllConditioned):
        fit = procrustes_rigid(src, dst)
    # the fit itself should still land the points
    assert np.abs(apply_transform(fit, src) - dst).max() <= 1e-8
