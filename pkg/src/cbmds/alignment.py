"""Least-squares alignment of 2-D point sets.

The rigid variant (rotation/reflection + translation) is used when merging
local maps; the similarity variant additionally fits a scale and is used to
pin a relative map to anchor nodes. Reflections are always admitted.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, IllConditioned

_COINCIDENT_TOL = 1e-12
_COLLINEAR_RTOL = 1e-9


@dataclass
class Transform2D:
    """p -> scale * rotation @ p + translation; rotation is orthogonal (det +-1)."""

    rotation: np.ndarray
    translation: np.ndarray
    scale: float = 1.0

    def apply(self, points: np.ndarray) -> np.ndarray:
        return apply_transform(self, points)

    def inverse(self) -> "Transform2D":
        inv_rot = self.rotation.T
        return Transform2D(
            inv_rot, -inv_rot @ self.translation / self.scale, 1.0 / self.scale
        )


def apply_transform(transform: Transform2D, points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    return transform.scale * (pts @ transform.rotation.T) + transform.translation


def _centered(src, dst, min_points):
    src = np.asarray(src, dtype=float)
    dst = np.asarray(dst, dtype=float)
    if src.shape != dst.shape:
        raise ValueError("src and dst must have the same shape")
    if len(src) < min_points:
        raise ValueError(f"need at least {min_points} correspondences")
    c_src = src.mean(axis=0)
    c_dst = dst.mean(axis=0)
    src_c = src - c_src
    dst_c = dst - c_dst
    if np.abs(src_c).max(initial=0.0) < _COINCIDENT_TOL:
        raise DegenerateInput("source points are coincident")
    if np.abs(dst_c).max(initial=0.0) < _COINCIDENT_TOL:
        raise DegenerateInput("destination points are coincident")
    return src_c, dst_c, c_src, c_dst


def _fit_rotation(src_c: np.ndarray, dst_c: np.ndarray):
    cross = src_c.T @ dst_c
    u, sing, vt = np.linalg.svd(cross)
    if sing[0] > 0 and sing[-1] / sing[0] < _COLLINEAR_RTOL:
        warnings.warn(
            "correspondences are collinear; the fitted transform is unstable",
            IllConditioned,
            stacklevel=3,
        )
    rotation = vt.T @ u.T  # no det correction: reflections are allowed
    return rotation, sing


def procrustes_rigid(src, dst) -> Transform2D:
    """Orthogonal transform + translation minimizing sum ||Q p + t - q||^2.

    Needs >= 2 positional correspondences; raises DegenerateInput if either
    centered set is coincident. Warns IllConditioned on collinear input.
    """
    src_c, dst_c, c_src, c_dst = _centered(src, dst, min_points=2)
    rotation, _ = _fit_rotation(src_c, dst_c)
    translation = c_dst - rotation @ c_src
    return Transform2D(rotation, translation, 1.0)


def procrustes_similarity(src, dst) -> Transform2D:
    """As procrustes_rigid but with a fitted positive scale (needs >= 3 points)."""
    src_c, dst_c, c_src, c_dst = _centered(src, dst, min_points=3)
    rotation, sing = _fit_rotation(src_c, dst_c)
    scale = sing.sum() / (src_c**2).sum()
    if scale <= 0:
        raise DegenerateInput("fitted scale is not positive")
    translation = c_dst - scale * (rotation @ c_src)
    return Transform2D(rotation, translation, scale)


def residual(transform: Transform2D, src, dst) -> float:
    """Root-sum-square alignment error of a candidate transform."""
    moved = apply_transform(transform, src)
    return float(np.sqrt(((moved - np.asarray(dst, dtype=float)) ** 2).sum()))
