"""Ground-truth node deployments on square and C/L/H-shaped regions.

All lengths are expressed in units of r, the unit edge distance; the default
field is a 10r x 10r square. Irregular shapes are the square minus one or two
axis-aligned cutout rectangles, given as fractions of the side length.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import MaskEmpty

# (x0, x1, y0, y1) as fractions of the side length; containment is closed.
DEFAULT_CUTOUTS: dict[str, tuple[tuple[float, float, float, float], ...]] = {
    "square": (),
    "c": ((0.4, 1.0, 0.3, 0.7),),
    "l": ((0.4, 1.0, 0.4, 1.0),),
    "h": ((0.3, 0.7, 0.0, 0.35), (0.3, 0.7, 0.65, 1.0)),
}

# Rejection sampling gives up after this many consecutive misses.
REJECTION_LIMIT = 10**6
_REJECTION_BATCH = 4096


class Shape(str, Enum):
    SQUARE = "square"
    C = "c"
    L = "l"
    H = "h"


class Placement(str, Enum):
    GRID = "grid"
    RANDOM = "random"


@dataclass(frozen=True)
class FieldSpec:
    """Parameters of one deployment field.

    node_count is only used (and required) in random placement;
    placement_noise_sigma and grid_spacing only apply to grid placement.
    cutouts overrides the per-shape default cutout table.
    """

    shape: Shape
    placement: Placement
    side_length: float = 10.0
    grid_spacing: float = 1.0
    node_count: int | None = None
    placement_noise_sigma: float = 0.1
    seed: int = 0
    cutouts: tuple[tuple[float, float, float, float], ...] | None = None

    def __post_init__(self):
        shape = self.shape.lower() if isinstance(self.shape, str) else self.shape
        placement = self.placement.lower() if isinstance(self.placement, str) else self.placement
        object.__setattr__(self, "shape", Shape(shape))
        object.__setattr__(self, "placement", Placement(placement))
        if self.side_length <= 0:
            raise ValueError("side_length must be positive")
        if self.grid_spacing <= 0:
            raise ValueError("grid_spacing must be positive")
        if self.placement_noise_sigma < 0:
            raise ValueError("placement_noise_sigma must be >= 0")
        if self.placement is Placement.RANDOM:
            if self.node_count is None or self.node_count < 4:
                raise ValueError("random placement needs node_count >= 4")


@dataclass
class Deployment:
    """Ground-truth positions (n, 2) plus the region predicate that produced them."""

    positions: np.ndarray
    shape_mask: Callable[[float, float], bool]
    spec: FieldSpec | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.positions)


def shape_mask(
    shape: Shape | str,
    side_length: float,
    cutouts: Sequence[tuple[float, float, float, float]] | None = None,
) -> Callable[[float, float], bool]:
    """Return the (x, y) -> bool region predicate for a shape.

    The predicate is true inside [0, L]^2 and outside every cutout rectangle.
    """
    if side_length <= 0:
        raise ValueError("side_length must be positive")
    length = float(side_length)
    if cutouts is None:
        cutouts = DEFAULT_CUTOUTS[Shape(shape).value]
    rects = [
        (x0 * length, x1 * length, y0 * length, y1 * length)
        for x0, x1, y0, y1 in cutouts
    ]

    def inside(x: float, y: float) -> bool:
        if not (0.0 <= x <= length and 0.0 <= y <= length):
            return False
        for x0, x1, y0, y1 in rects:
            if x0 <= x <= x1 and y0 <= y <= y1:
                return False
        return True

    return inside


def cutout_rects(spec: FieldSpec) -> list[tuple[float, float, float, float]]:
    """Cutout rectangles in length units, for rendering the field outline."""
    fractions = spec.cutouts
    if fractions is None:
        fractions = DEFAULT_CUTOUTS[spec.shape.value]
    length = spec.side_length
    return [(x0 * length, x1 * length, y0 * length, y1 * length) for x0, x1, y0, y1 in fractions]


def generate_deployment(spec: FieldSpec) -> Deployment:
    """Generate node positions for a FieldSpec, deterministically given its seed.

    Grid placement puts one node per in-mask lattice point and perturbs each
    coordinate with Gaussian noise of std placement_noise_sigma (the lattice
    membership itself is noise-free, so the node count does not depend on
    sigma). Random placement rejection-samples node_count points uniformly
    over the mask.

    Raises MaskEmpty if the mask admits no lattice point (grid) or rejection
    sampling misses REJECTION_LIMIT consecutive draws (random).
    """
    mask = shape_mask(spec.shape, spec.side_length, spec.cutouts)
    rng = np.random.default_rng(spec.seed)

    if spec.placement is Placement.GRID:
        steps = int(np.floor(spec.side_length / spec.grid_spacing + 1e-9))
        lattice = [
            (i * spec.grid_spacing, j * spec.grid_spacing)
            for i in range(steps + 1)
            for j in range(steps + 1)
            if mask(i * spec.grid_spacing, j * spec.grid_spacing)
        ]
        if not lattice:
            raise MaskEmpty("no lattice point satisfies the shape mask")
        points = np.asarray(lattice, dtype=float)
        if spec.placement_noise_sigma > 0:
            points = points + rng.normal(
                0.0, spec.placement_noise_sigma, size=points.shape
            )
        return Deployment(points, mask, spec)

    accepted: list[np.ndarray] = []
    misses = 0
    while len(accepted) < spec.node_count:
        batch = rng.uniform(0.0, spec.side_length, size=(_REJECTION_BATCH, 2))
        keep = [p for p in batch if mask(p[0], p[1])]
        if not keep:
            misses += _REJECTION_BATCH
            if misses >= REJECTION_LIMIT:
                raise MaskEmpty(
                    f"rejection sampling failed {misses} consecutive draws"
                )
            continue
        misses = 0
        accepted.extend(keep)
    points = np.asarray(accepted[: spec.node_count], dtype=float)
    return Deployment(points, mask, spec)
