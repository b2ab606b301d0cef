"""Base metric space: points, finite point sets and the distances between them.

Points are 1-d float64 arrays. A ``PointSet`` is a finite, non-empty,
deduplicated collection of points of one dimension, stored as a read-only
``(n, d)`` array. Finite sets are closed and bounded, so every ``PointSet``
is a member of the Hausdorff hyperspace and every sup/inf is a max/min.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from . import kernels
from .errors import DimensionError, EmptySetError

EUCLIDEAN_KIND = "euclidean"
MANHATTAN_KIND = "manhattan"
CHEBYSHEV_KIND = "chebyshev"
CUSTOM_KIND = "custom"

_KERNEL_CODES = {EUCLIDEAN_KIND: 0, MANHATTAN_KIND: 1, CHEBYSHEV_KIND: 2}


@dataclass(frozen=True)
class MetricSpec:
    """Distance function of the base space.

    The three built-in kinds run on the compiled kernels. ``custom`` wraps
    an arbitrary callable ``func(x, y) -> float`` and always goes through
    plain Python loops.
    """

    kind: str = EUCLIDEAN_KIND
    func: Optional[Callable[[np.ndarray, np.ndarray], float]] = None

    def __post_init__(self):
        if self.kind == CUSTOM_KIND:
            if self.func is None:
                raise ValueError("custom metric needs a distance callback")
        elif self.kind not in _KERNEL_CODES:
            raise ValueError(f"unknown metric kind {self.kind!r}")

    @classmethod
    def custom(cls, func):
        return cls(CUSTOM_KIND, func)

    @classmethod
    def from_name(cls, name: str) -> "MetricSpec":
        aliases = {"l2": EUCLIDEAN_KIND, "l1": MANHATTAN_KIND, "cityblock": MANHATTAN_KIND,
                   "linf": CHEBYSHEV_KIND, "max": CHEBYSHEV_KIND}
        return cls(aliases.get(name.lower(), name.lower()))

    @property
    def code(self) -> int:
        """Kernel selector; -1 for custom metrics."""
        return _KERNEL_CODES.get(self.kind, -1)

    @property
    def is_builtin(self) -> bool:
        return self.kind != CUSTOM_KIND

    def __call__(self, x, y) -> float:
        return distance(x, y, self)


EUCLIDEAN = MetricSpec(EUCLIDEAN_KIND)
MANHATTAN = MetricSpec(MANHATTAN_KIND)
CHEBYSHEV = MetricSpec(CHEBYSHEV_KIND)
BUILTIN_METRICS = (EUCLIDEAN, MANHATTAN, CHEBYSHEV)


def as_point(x, dim: Optional[int] = None) -> np.ndarray:
    """Validate ``x`` as a point: 1-d, finite float64 coordinates."""
    p = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if p.ndim != 1 or p.size == 0:
        raise DimensionError(f"a point must be a non-empty coordinate vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    if dim is not None and p.size != dim:
        raise DimensionError(f"point has dimension {p.size}, expected {dim}")
    return p


def _check_dims(a: int, b: int):
    if a != b:
        raise DimensionError(f"dimension mismatch: {a} vs {b}")


def pairwise_distances(X: np.ndarray, Y: np.ndarray, metric: MetricSpec = EUCLIDEAN) -> np.ndarray:
    """Full ``(len(X), len(Y))`` distance matrix.

    Coordinates are accumulated one axis at a time, in axis order, which is
    the exact operation sequence the compiled kernels use.
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    _check_dims(X.shape[1], Y.shape[1])
    if not metric.is_builtin:
        out = np.empty((X.shape[0], Y.shape[0]))
        for i, x in enumerate(X):
            for j, y in enumerate(Y):
                out[i, j] = float(metric.func(x, y))
        return out
    acc = None
    for k in range(X.shape[1]):
        t = X[:, k, None] - Y[None, :, k]
        if metric.kind == EUCLIDEAN_KIND:
            term = t * t
        else:
            term = np.abs(t)
        if acc is None:
            acc = term
        elif metric.kind == CHEBYSHEV_KIND:
            acc = np.maximum(acc, term)
        else:
            acc = acc + term
    if metric.kind == EUCLIDEAN_KIND:
        acc = np.sqrt(acc)
    return acc


def distance(x, y, metric: MetricSpec = EUCLIDEAN) -> float:
    """rho(x, y) in the base space."""
    x = as_point(x)
    y = as_point(y)
    _check_dims(x.size, y.size)
    if not metric.is_builtin:
        return float(metric.func(x, y))
    return float(pairwise_distances(x[None, :], y[None, :], metric)[0, 0])


class PointSet:
    """Finite non-empty set of points of a common dimension.

    Duplicates are removed on construction: with ``dedup_tol == 0`` only
    exact coordinate duplicates, otherwise a greedy scan in storage order
    keeps a point only when it is farther than ``dedup_tol`` from every point
    already kept. Storage order is otherwise preserved, since nearest-point
    ties resolve to the lowest storage index.
    """

    __slots__ = ("_points", "dedup_tol")

    def __init__(self, points, dedup_tol: float = 0.0, metric: MetricSpec = EUCLIDEAN):
        if isinstance(points, PointSet):
            arr = points.points
        else:
            arr = np.asarray(points, dtype=np.float64)
            if arr.ndim == 1:
                arr = arr.reshape(-1, 1)
        if arr.ndim != 2:
            raise DimensionError(f"expected an (n, d) array of points, got shape {arr.shape}")
        if arr.shape[0] == 0:
            raise EmptySetError("a point set must be non-empty")
        if arr.shape[1] == 0:
            raise DimensionError("points must have at least one coordinate")
        if not np.all(np.isfinite(arr)):
            raise ValueError("point coordinates must be finite")
        if dedup_tol < 0:
            raise ValueError("dedup_tol must be >= 0")
        arr = _dedup(np.ascontiguousarray(arr, dtype=np.float64), dedup_tol, metric)
        arr.flags.writeable = False
        self._points = arr
        self.dedup_tol = float(dedup_tol)

    @classmethod
    def _trusted(cls, arr: np.ndarray, dedup_tol: float = 0.0) -> "PointSet":
        # arr already validated and deduplicated
        self = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.float64)
        arr.flags.writeable = False
        self._points = arr
        self.dedup_tol = float(dedup_tol)
        return self

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def dim(self) -> int:
        return self._points.shape[1]

    def __len__(self):
        return self._points.shape[0]

    def __iter__(self):
        return iter(self._points)

    def __getitem__(self, i) -> np.ndarray:
        return self._points[i]

    def __contains__(self, x) -> bool:
        p = as_point(x, self.dim)
        return bool(np.any(np.all(self._points == p, axis=1)))

    def __repr__(self):
        return f"PointSet(n={len(self)}, dim={self.dim})"

    def sorted(self) -> "PointSet":
        """Same set, rows in lexicographic coordinate order."""
        return PointSet._trusted(self._points[lexsort_rows(self._points)], self.dedup_tol)

    def as_set(self) -> frozenset:
        return frozenset(map(tuple, self._points.tolist()))

    def same_set(self, other: "PointSet") -> bool:
        return self.as_set() == other.as_set()

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.dim == other.dim and self.same_set(other)

    def __hash__(self):
        return hash(self.as_set())

    def union(self, *others: "PointSet") -> "PointSet":
        for o in others:
            _check_dims(self.dim, o.dim)
        return PointSet(np.concatenate([self._points] + [o.points for o in others]))

    def issubset(self, other: "PointSet") -> bool:
        return self.as_set() <= other.as_set()


def lexsort_rows(arr: np.ndarray) -> np.ndarray:
    """Indices sorting rows lexicographically (first coordinate most significant)."""
    return np.lexsort(arr.T[::-1])


def _dedup(arr: np.ndarray, tol: float, metric: MetricSpec) -> np.ndarray:
    if arr.shape[0] == 1:
        return arr
    if tol == 0:
        _, first = np.unique(arr, axis=0, return_index=True)
        if first.size == arr.shape[0]:
            return arr
        return arr[np.sort(first)]
    keep = greedy_net_indices(arr, tol, metric)
    return arr[keep]


def greedy_net_indices(arr: np.ndarray, delta: float, metric: MetricSpec = EUCLIDEAN) -> np.ndarray:
    """Indices kept by a greedy delta-net scan of ``arr`` in row order."""
    if metric.is_builtin:
        return kernels.greedy_net(np.ascontiguousarray(arr, dtype=np.float64), float(delta), metric.code)
    kept = []
    for i, p in enumerate(arr):
        if all(float(metric.func(p, arr[j])) > delta for j in kept):
            kept.append(i)
    return np.asarray(kept, dtype=np.int64)


def _coerce_set(A) -> PointSet:
    return A if isinstance(A, PointSet) else PointSet(A)


def nearest_points(X, A: PointSet, metric: MetricSpec = EUCLIDEAN):
    """Vectorized ``nearest_point``: distances and storage indices, one per row of ``X``."""
    X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
    _check_dims(X.shape[1], A.dim)
    if metric.is_builtin:
        return kernels.nearest(X, A.points, metric.code)
    D = pairwise_distances(X, A.points, metric)
    idx = np.argmin(D, axis=1)
    return D[np.arange(len(X)), idx], idx.astype(np.int64)


def nearest_point(x, A, metric: MetricSpec = EUCLIDEAN):
    """Closest point of ``A`` to ``x`` and its distance; ties go to the lowest index."""
    A = _coerce_set(A)
    p = as_point(x)
    _check_dims(p.size, A.dim)
    d, idx = nearest_points(p[None, :], A, metric)
    return A.points[int(idx[0])].copy(), float(d[0])


def point_set_distance(x, A, metric: MetricSpec = EUCLIDEAN) -> float:
    """rho(x, A) = min over a in A of rho(x, a)."""
    return nearest_point(x, A, metric)[1]


def points_set_distances(X, A: PointSet, metric: MetricSpec = EUCLIDEAN) -> np.ndarray:
    return nearest_points(X, A, metric)[0]


def stack_points(sets: Iterable[PointSet]) -> np.ndarray:
    return np.concatenate([s.points for s in sets])
