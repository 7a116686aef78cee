"""Cluster-count-free clustering over averaged sense embeddings.

Three algorithms, all deterministic and all on plain Euclidean geometry:
bottom-up variance-minimizing agglomeration, flat-kernel mean shift, and
density clustering with a noise label of -1. Tie-breaking rules are fixed
so identical inputs produce identical labels on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, KOutOfRange, NonPositiveBandwidth, TooFewPoints

MEANSHIFT_MAX_ITER = 300
MEANSHIFT_TOL_FACTOR = 1e-3


@dataclass(frozen=True)
class ClusterParams:
    """Hyperparameters for one clustering run.

    For ward, exactly one of ``k`` and ``distance_threshold`` must be set.
    ``bandwidth`` (mean shift) and ``eps`` (dbscan) fall back to the
    pairwise-distance quantile estimate when unset.
    """

    algorithm: str = "ward"
    k: int | None = None
    distance_threshold: float | None = None
    bandwidth: float | None = None
    quantile: float = 0.3
    eps: float | None = None
    min_samples: int = 3
    seed: int = 0


@dataclass(frozen=True)
class ClusterResult:
    """Integer label per input point; -1 is reserved for noise.

    Non-negative labels are consecutive 0..n_clusters-1. ``modes`` holds
    mean-shift centroids in label order; ``merge_history`` records every
    agglomerative merge as (cluster_id_i, cluster_id_j, merge_cost).
    """

    labels: tuple[int, ...]
    n_clusters: int
    modes: tuple[tuple[float, ...], ...] | None = None
    merge_history: tuple[tuple[int, int, float], ...] | None = None


def _as_points(points) -> np.ndarray:
    X = np.asarray(points, dtype=np.float64)
    if X.size == 0:
        raise EmptyInput("no points")
    if X.ndim != 2:
        raise ValueError(f"points must be a 2-D array-like, got ndim={X.ndim}")
    return X


def _labels_by_lowest_member(groups: list[list[int]], n: int) -> tuple[int, ...]:
    """Assign consecutive ids to point groups ordered by lowest member index;
    points in no group keep the noise label -1."""
    labels = [-1] * n
    for label, members in enumerate(sorted(groups, key=min)):
        for m in members:
            labels[m] = label
    return tuple(labels)


def agglomerative_ward(points, params: ClusterParams) -> ClusterResult:
    """Bottom-up merging, always joining the pair of clusters whose merge
    increases within-cluster variance the least.

    The merge cost is ``|A||B| / (|A|+|B|) * ||centroid(A) - centroid(B)||^2``,
    maintained with the Lance-Williams recurrence. Cluster ids follow the
    linkage convention: points are 0..n-1, the cluster created by merge
    step t gets id n+t. Cost ties break toward the smallest (i, j) pair.
    Stops at ``k`` clusters, or, in threshold mode, keeps merging while the
    cheapest merge costs at most ``distance_threshold``. Final labels are
    ordered by each cluster's lowest contained point index.
    """
    X = _as_points(points)
    n = X.shape[0]
    if (params.k is None) == (params.distance_threshold is None):
        raise ValueError("ward needs exactly one of k and distance_threshold")
    if params.k is not None and not 1 <= params.k <= n:
        raise KOutOfRange(f"k={params.k} outside 1..{n}")

    # Pairwise merge costs between active clusters, keyed (i, j) with i < j.
    # Singleton cost is half the squared distance.
    sq = np.sum((X[:, None, :] - X[None, :, :]) ** 2, axis=2)
    cost: dict[tuple[int, int], float] = {
        (i, j): 0.5 * sq[i, j] for i in range(n) for j in range(i + 1, n)
    }
    size = {i: 1 for i in range(n)}
    members = {i: [i] for i in range(n)}
    history: list[tuple[int, int, float]] = []

    stop_at = params.k if params.k is not None else 1
    while len(size) > stop_at:
        (i, j), best = min(cost.items(), key=lambda kv: (kv[1], kv[0]))
        if params.distance_threshold is not None and best > params.distance_threshold:
            break
        new_id = n + len(history)
        history.append((i, j, best))
        si, sj = size[i], size[j]
        for other in list(size):
            if other in (i, j):
                continue
            so = size[other]
            cio = cost[(min(i, other), max(i, other))]
            cjo = cost[(min(j, other), max(j, other))]
            merged = ((si + so) * cio + (sj + so) * cjo - so * best) / (si + sj + so)
            cost[(other, new_id)] = merged
            del cost[(min(i, other), max(i, other))]
            del cost[(min(j, other), max(j, other))]
        del cost[(i, j)]
        members[new_id] = members.pop(i) + members.pop(j)
        size[new_id] = si + sj
        del size[i], size[j]

    labels = _labels_by_lowest_member(list(members.values()), n)
    return ClusterResult(
        labels=labels,
        n_clusters=len(members),
        merge_history=tuple(history),
    )


def estimate_bandwidth(points, quantile: float = 0.3) -> float:
    """Nearest-rank quantile of the sorted pairwise Euclidean distances.

    Falls back to 1.0 when every pairwise distance is zero.
    """
    X = _as_points(points)
    n = X.shape[0]
    if n < 2:
        raise TooFewPoints(f"need >= 2 points to estimate a bandwidth, got {n}")
    if not 0.0 < quantile <= 1.0:
        raise ValueError(f"quantile must be in (0, 1], got {quantile}")
    dists = np.sqrt(np.sum((X[:, None, :] - X[None, :, :]) ** 2, axis=2))
    upper = np.sort(dists[np.triu_indices(n, k=1)])
    rank = math.ceil(quantile * upper.size)  # nearest-rank, 1-based
    value = float(upper[rank - 1])
    return value if value > 0.0 else 1.0


def _flat_kernel_step(positions: np.ndarray, X: np.ndarray, bandwidth: float) -> np.ndarray:
    """One synchronized shift: each candidate moves to the mean of the data
    points within ``bandwidth`` of it (a candidate with no neighbors stays put)."""
    new = positions.copy()
    for idx in range(positions.shape[0]):
        d = np.sqrt(np.sum((X - positions[idx]) ** 2, axis=1))
        mask = d <= bandwidth
        if mask.any():
            new[idx] = X[mask].mean(axis=0)
    return new


def _default_bandwidth(X: np.ndarray, quantile: float) -> float:
    # single-point inputs have no pairwise distances; reuse the degenerate fallback
    if X.shape[0] < 2:
        return 1.0
    return estimate_bandwidth(X, quantile)


def mean_shift(points, params: ClusterParams) -> ClusterResult:
    """Flat-kernel mean shift: every point seeds a candidate that walks to
    the mean of its bandwidth neighborhood until the shift falls below
    1e-3 * bandwidth (or 300 iterations).

    Converged candidates closer than the bandwidth collapse into one mode,
    keeping the one whose basin holds more points (ties: lower seed index).
    Points take the label of their nearest mode; labels are ordered by
    descending basin size, then seed index.
    """
    X = _as_points(points)
    n = X.shape[0]
    bandwidth = params.bandwidth if params.bandwidth is not None else _default_bandwidth(X, params.quantile)
    if bandwidth <= 0:
        raise NonPositiveBandwidth(f"bandwidth must be positive, got {bandwidth}")

    tol = MEANSHIFT_TOL_FACTOR * bandwidth
    positions = X.copy()
    active = np.ones(n, dtype=bool)
    for _ in range(MEANSHIFT_MAX_ITER):
        if not active.any():
            break
        moved = _flat_kernel_step(positions[active], X, bandwidth)
        shifts = np.sqrt(np.sum((moved - positions[active]) ** 2, axis=1))
        positions[active] = moved
        still = shifts >= tol
        active[np.flatnonzero(active)] = still

    basin = np.array(
        [np.sum(np.sqrt(np.sum((X - positions[i]) ** 2, axis=1)) <= bandwidth) for i in range(n)]
    )
    order = sorted(range(n), key=lambda i: (-basin[i], i))
    kept: list[np.ndarray] = []
    for seed in order:
        pos = positions[seed]
        if all(np.linalg.norm(pos - m) >= bandwidth for m in kept):
            kept.append(pos)

    mode_arr = np.vstack(kept)
    dist_to_modes = np.sqrt(np.sum((X[:, None, :] - mode_arr[None, :, :]) ** 2, axis=2))
    labels = tuple(int(i) for i in np.argmin(dist_to_modes, axis=1))
    return ClusterResult(
        labels=labels,
        n_clusters=len(kept),
        modes=tuple(tuple(float(v) for v in m) for m in kept),
    )


def dbscan(points, params: ClusterParams) -> ClusterResult:
    """Density clustering: a point is core iff at least ``min_samples``
    points (itself included) lie within ``eps``; clusters are connected
    components of core points under eps-reachability; border points join
    the cluster of the lowest-index core point reaching them; everything
    else is noise (-1). Cluster ids follow lowest contained point index.
    """
    X = _as_points(points)
    n = X.shape[0]
    eps = params.eps if params.eps is not None else _default_bandwidth(X, params.quantile)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if params.min_samples < 1:
        raise ValueError(f"min_samples must be >= 1, got {params.min_samples}")

    dists = np.sqrt(np.sum((X[:, None, :] - X[None, :, :]) ** 2, axis=2))
    within = dists <= eps
    neighbor_counts = within.sum(axis=1)
    is_core = neighbor_counts >= params.min_samples

    # Connected components of core points under eps-reachability.
    component = {}
    for start in range(n):
        if not is_core[start] or start in component:
            continue
        queue = [start]
        component[start] = start
        while queue:
            cur = queue.pop()
            for nb in np.flatnonzero(within[cur]):
                nb = int(nb)
                if is_core[nb] and nb not in component:
                    component[nb] = start
                    queue.append(nb)

    groups: dict[int, list[int]] = {}
    for point, root in component.items():
        groups.setdefault(root, []).append(point)
    for point in range(n):
        if is_core[point]:
            continue
        reaching = [int(c) for c in np.flatnonzero(within[point]) if is_core[c]]
        if reaching:
            groups[component[min(reaching)]].append(point)

    labels = _labels_by_lowest_member(list(groups.values()), n)
    return ClusterResult(labels=labels, n_clusters=len(groups))


ALGORITHMS = {
    "ward": agglomerative_ward,
    "meanshift": mean_shift,
    "dbscan": dbscan,
}


def run_clustering(points, params: ClusterParams) -> ClusterResult:
    """Dispatch to the algorithm named in ``params``."""
    try:
        fn = ALGORITHMS[params.algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {params.algorithm!r}; choose from {sorted(ALGORITHMS)}")
    return fn(points, params)
