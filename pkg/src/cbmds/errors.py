"""Exception and warning types shared across the package."""


class CbmdsError(Exception):
    """Base class for all domain errors raised by this package."""


class MaskEmpty(CbmdsError):
    """The requested shape mask admits no node positions."""


class Disconnected(CbmdsError):
    """The radio graph is not connected; caller decides to regenerate or abort."""


class SubsetDisconnected(CbmdsError):
    """A node pair is unreachable when paths are restricted to the subset."""

    def __init__(self, node_i, node_j, cluster_id=None):
        self.node_i = node_i
        self.node_j = node_j
        self.cluster_id = cluster_id
        where = f" (cluster {cluster_id})" if cluster_id is not None else ""
        super().__init__(
            f"no path between nodes {node_i} and {node_j} within the subset{where}"
        )


class EmptyInput(CbmdsError):
    """An operation received an empty point set or matrix."""


class NonFinite(CbmdsError):
    """A distance matrix contains NaN or infinite entries."""


class KTooLarge(CbmdsError):
    """Requested more clusters than there are nodes."""


class DegenerateInput(CbmdsError):
    """All points coincide; the orthogonal part of the fit is undefined."""


class OverlapTooSmall(CbmdsError):
    """A cluster never shares >= 3 nodes with the merged set."""

    def __init__(self, cluster_id, common=0):
        self.cluster_id = cluster_id
        self.common = common
        super().__init__(
            f"cluster {cluster_id} shares only {common} node(s) with the merged set"
        )


class TooFewAnchors(CbmdsError):
    """Absolute alignment needs at least 3 anchor nodes."""


class MismatchedNodeSets(CbmdsError):
    """Two position maps do not cover the same node ids."""


class IllConditioned(UserWarning):
    """Correspondences are (near-)collinear; the fitted transform is unstable."""
