"""Landmark selection: uniform sampling and K-medoids cluster centers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

# Row block size for streaming pairwise Manhattan distances.
_BLOCK = 1024

# Candidate pool cap for the quadratic parts of K-medoids (initialization
# scores and medoid-update search). Assignment always uses all points.
DEFAULT_POOL_CAP = 20000


@dataclass
class LandmarkSet:
    """Selected landmark columns of a dataset.

    Args:
        indices: strictly increasing indices into the dataset.
        landmarks: (D, m) copies of the selected columns.
        method: how the landmarks were chosen ("uniform" or "kmedoids").
    """

    indices: np.ndarray
    landmarks: np.ndarray
    method: str

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.landmarks = np.asarray(self.landmarks, dtype=np.float64)
        if self.indices.ndim != 1 or self.indices.size < 1:
            raise ValueError("indices must be a nonempty 1-D vector")
        if np.any(np.diff(self.indices) <= 0):
            raise ValueError("indices must be strictly increasing")
        if self.landmarks.shape[1] != self.indices.size:
            raise ValueError("landmarks must have one column per index")

    @property
    def m(self) -> int:
        return self.indices.size


def select_uniform(data, m: int, seed: int = 0) -> LandmarkSet:
    """Sample m distinct landmark indices uniformly without replacement."""
    n = data.n
    if not 1 <= m <= n:
        raise ValueError(f"m must satisfy 1 <= m <= n={n}, got {m}")
    rng = np.random.default_rng(seed)
    indices = np.sort(rng.choice(n, size=m, replace=False))
    return LandmarkSet(indices=indices, landmarks=data.points[:, indices].copy(), method="uniform")


def _manhattan(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Pairwise Manhattan distances between columns of A and columns of B."""
    return cdist(A.T, B.T, metric="cityblock")


def kmedoids_cost(data, medoid_indices) -> float:
    """Total Manhattan distance of every point to its nearest medoid."""
    medoid_indices = np.asarray(medoid_indices, dtype=np.int64)
    if medoid_indices.ndim != 1 or medoid_indices.size < 1:
        raise ValueError("medoid_indices must be a nonempty 1-D vector")
    if np.unique(medoid_indices).size != medoid_indices.size:
        raise ValueError("medoid indices must be distinct")
    if medoid_indices.min() < 0 or medoid_indices.max() >= data.n:
        raise ValueError("medoid index out of range")
    X = data.points
    medoids = X[:, medoid_indices]
    total = 0.0
    for start in range(0, data.n, _BLOCK):
        block = X[:, start : start + _BLOCK]
        total += float(_manhattan(block, medoids).min(axis=1).sum())
    return total


def _assign(X: np.ndarray, medoids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-medoid labels and distances; ties go to the lowest medoid index."""
    n = X.shape[1]
    labels = np.empty(n, dtype=np.int64)
    dists = np.empty(n)
    for start in range(0, n, _BLOCK):
        d = _manhattan(X[:, start : start + _BLOCK], medoids)
        rows = np.arange(d.shape[0])
        labels[start : start + d.shape[0]] = np.argmin(d, axis=1)
        dists[start : start + d.shape[0]] = d[rows, labels[start : start + d.shape[0]]]
    return labels, dists


def _init_scores(X_pool: np.ndarray) -> np.ndarray:
    """Density-style initialization scores v_j = sum_i d(i,j) / sum_l d(i,l).

    Lower is more central. Computed in two streaming passes so no
    pool x pool matrix is ever materialized.
    """
    p = X_pool.shape[1]
    rowsums = np.zeros(p)
    for start in range(0, p, _BLOCK):
        rowsums[start : start + _BLOCK] = _manhattan(X_pool[:, start : start + _BLOCK], X_pool).sum(axis=1)
    inv = np.zeros(p)
    pos = rowsums > 0
    inv[pos] = 1.0 / rowsums[pos]
    scores = np.zeros(p)
    for start in range(0, p, _BLOCK):
        d = _manhattan(X_pool[:, start : start + _BLOCK], X_pool)
        scores += inv[start : start + d.shape[0]] @ d
    return scores


def _farthest_unused(dists: np.ndarray, used: np.ndarray) -> int:
    """Index with the largest distance to its medoid among unused points."""
    masked = np.where(used, -np.inf, dists)
    return int(np.argmax(masked))


def select_kmedoids(
    data,
    m: int,
    max_iter: int = 100,
    seed: int = 0,
    pool_cap: int = DEFAULT_POOL_CAP,
    return_trace: bool = False,
):
    """Select m landmarks as K-medoids cluster centers under Manhattan distance.

    Alternates nearest-medoid assignment over all points with a per-cluster
    medoid update; initialization picks the m lowest density-style scores.
    The quadratic-cost steps (scores, update search) are restricted to a
    uniformly sampled candidate pool of at most pool_cap points, but every
    candidate is evaluated against all of its cluster's members, so the
    total cost never increases from one iteration to the next.

    Args:
        data: Dataset to select from.
        m: number of medoids, 1 <= m <= n.
        max_iter: maximum alternation rounds (must be >= 1).
        seed: RNG seed for the candidate pool.
        pool_cap: upper bound on the candidate pool size.
        return_trace: also return the total cost after each iteration.

    Returns:
        LandmarkSet, or (LandmarkSet, costs) when return_trace is set.
    """
    n = data.n
    if not 1 <= m <= n:
        raise ValueError(f"m must satisfy 1 <= m <= n={n}, got {m}")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    X = data.points

    rng = np.random.default_rng(seed)
    pool_size = min(n, max(pool_cap, m))
    if pool_size < n:
        pool = np.sort(rng.choice(n, size=pool_size, replace=False))
    else:
        pool = np.arange(n)
    in_pool = np.zeros(n, dtype=bool)
    in_pool[pool] = True

    scores = _init_scores(X[:, pool])
    medoids = np.sort(pool[np.argsort(scores, kind="stable")[:m]])

    trace = []
    for _ in range(max_iter):
        labels, dists = _assign(X, X[:, medoids])

        # Reseed empty clusters at the farthest points before the update.
        counts = np.bincount(labels, minlength=m)
        if np.any(counts == 0):
            used = np.zeros(n, dtype=bool)
            used[medoids] = True
            for k in np.flatnonzero(counts == 0):
                pick = _farthest_unused(dists, used)
                used[pick] = True
                medoids[k] = pick
            medoids = np.sort(medoids)
            labels, dists = _assign(X, X[:, medoids])

        # Per-cluster medoid update. Candidates are the cluster's pool members
        # plus the incumbent, each scored against all members; ties and index
        # collisions (possible with duplicate points) resolve to the lowest
        # unused index, which keeps the medoid set distinct and the total
        # cost non-increasing.
        new_medoids = np.empty(m, dtype=np.int64)
        used = np.zeros(n, dtype=bool)
        for k in range(m):
            members = np.flatnonzero(labels == k)
            cands = members[in_pool[members]]
            if medoids[k] not in cands:
                cands = np.append(cands, medoids[k])
            cands = np.sort(cands)
            costs = np.zeros(cands.size)
            for start in range(0, members.size, _BLOCK):
                block = members[start : start + _BLOCK]
                costs += _manhattan(X[:, block], X[:, cands]).sum(axis=0)
            pick = -1
            for o in np.argsort(costs, kind="stable"):
                if not used[cands[o]]:
                    pick = int(cands[o])
                    break
            if pick < 0:
                pick = _farthest_unused(dists, used)
            used[pick] = True
            new_medoids[k] = pick

        new_medoids = np.sort(new_medoids)
        if return_trace:
            trace.append(kmedoids_cost(data, new_medoids))
        converged = np.array_equal(new_medoids, medoids)
        medoids = new_medoids
        if converged:
            break

    result = LandmarkSet(indices=medoids, landmarks=X[:, medoids].copy(), method="kmedoids")
    if return_trace:
        return result, trace
    return result
