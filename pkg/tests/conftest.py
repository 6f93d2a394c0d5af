import numpy as np

from cbmds.errors import Disconnected
from cbmds.network import Network, build_network


def connected_network(seed: int, n: int = 30, radio_range: float = 2.5,
                      box: float = 8.0) -> Network:
    """Uniform points in a box; retries the draw until the graph connects."""
    rng = np.random.default_rng(seed)
    for _ in range(200):
        points = rng.uniform(0, box, size=(n, 2))
        try:
            return build_network(points, radio_range)
        except Disconnected:
            continue
    raise AssertionError(f"no connected network for seed {seed}")


def pairwise(points: np.ndarray) -> np.ndarray:
    delta = points[:, None, :] - points[None, :, :]
    return np.hypot(delta[..., 0], delta[..., 1])
