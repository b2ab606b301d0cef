"""Iterated function systems and the Hutchinson operator on finite sets.

For contractions f_1..f_k the operator F(A) = f_1(A) u ... u f_k(A) is a
contraction of the hyperspace with the same factor, so the iterates
A, F(A), F(F(A)), ... form a Cauchy sequence of sets whose limit is the
attractor. Iteration here is deterministic (whole sets, no chaos game);
an optional point budget thins iterates with a greedy delta-net and the
error this introduces is tracked step by step.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np

from .errors import DimensionError, NotContractive, SystemFormatError
from .hausdorff import hausdorff
from .metric import EUCLIDEAN, MetricSpec, PointSet, greedy_net_indices


@dataclass(frozen=True, eq=False)
class AffineMap:
    """x -> linear @ x + offset."""

    linear: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        lin = np.array(self.linear, dtype=np.float64)
        off = np.array(self.offset, dtype=np.float64).reshape(-1)
        if lin.ndim == 0:
            lin = lin.reshape(1, 1)
        if lin.ndim != 2 or lin.shape[0] != lin.shape[1]:
            raise DimensionError(f"linear part must be square, got shape {lin.shape}")
        if off.size != lin.shape[0]:
            raise DimensionError(f"offset has {off.size} entries for a {lin.shape[0]}-d map")
        if not (np.all(np.isfinite(lin)) and np.all(np.isfinite(off))):
            raise ValueError("map coefficients must be finite")
        lin.flags.writeable = False
        off.flags.writeable = False
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "offset", off)

    @property
    def dim(self) -> int:
        return self.offset.size

    def __call__(self, X: np.ndarray) -> np.ndarray:
        return X @ self.linear.T + self.offset


def contraction_factor(f: AffineMap) -> float:
    """Lipschitz constant of ``f``: the largest singular value of its linear part."""
    return float(np.linalg.svd(f.linear, compute_uv=False)[0])


@dataclass(frozen=True, eq=False)
class IFS:
    maps: tuple
    contraction: float = field(init=False)

    def __post_init__(self):
        maps = tuple(self.maps)
        if not maps:
            raise ValueError("an IFS needs at least one map")
        dims = {f.dim for f in maps}
        if len(dims) != 1:
            raise DimensionError(f"maps have mixed dimensions {sorted(dims)}")
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "contraction", max(contraction_factor(f) for f in maps))

    @property
    def dim(self) -> int:
        return self.maps[0].dim

    def to_dict(self):
        return {
            "dim": self.dim,
            "maps": [
                {"linear": f.linear.reshape(-1).tolist(), "offset": f.offset.tolist()}
                for f in self.maps
            ],
        }


def hutchinson_step(A: PointSet, sys: IFS) -> PointSet:
    """F(A): union of the images of A under every map, duplicates removed."""
    if A.dim != sys.dim:
        raise DimensionError(f"set has dimension {A.dim}, system has {sys.dim}")
    return PointSet(np.concatenate([f(A.points) for f in sys.maps]))


def decimate(A: PointSet, delta: float, metric: MetricSpec = EUCLIDEAN) -> PointSet:
    """Greedy delta-net: a subset D of A with rho_H(A, D) <= delta."""
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if delta == 0 or len(A) == 1:
        return A
    keep = greedy_net_indices(A.points, delta, metric)
    return PointSet._trusted(A.points[keep])


def fit_budget(A: PointSet, budget: int, metric: MetricSpec = EUCLIDEAN, rel_tol: float = 1e-6):
    """Smallest delta (to ``rel_tol``) whose net of A has at most ``budget`` points."""
    if len(A) <= budget:
        return 0.0, A
    span = A.points.max(axis=0) - A.points.min(axis=0)
    hi = float(np.sqrt(np.sum(span * span))) if metric.kind != "manhattan" else float(span.sum())
    hi = max(hi, np.finfo(float).tiny)
    best = decimate(A, hi, metric)
    lo = 0.0
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        D = decimate(A, mid, metric)
        if len(D) <= budget:
            hi, best = mid, D
        else:
            lo = mid
    return hi, best


class AttractorStep(NamedTuple):
    step: int
    size: int
    gap: float
    delta: float
    raw_size: int
    error: float
    next_error: float


@dataclass(frozen=True, eq=False)
class AttractorTrace:
    """Iterates A_0..A_K with per-step gaps rho_H(A_n, A_{n+1}).

    ``error`` of a step bounds rho_H(A_n, F^n(A_0)): the distance between
    the thinned iterate and the exact one, E_{n+1} = c * E_n + delta_n.
    """

    iterates: tuple
    sets: tuple
    contraction: float
    initial_gap: float

    @property
    def final(self) -> PointSet:
        return self.sets[-1]

    @property
    def gaps(self) -> np.ndarray:
        return np.array([s.gap for s in self.iterates])

    def decay_bound(self, n: int) -> float:
        """Upper bound for gap n: c**n * rho_H(A_0, F(A_0)) plus decimation error."""
        s = self.iterates[n]
        return self.contraction ** n * self.initial_gap + s.error + s.next_error

    def as_sequence(self, metric: MetricSpec = EUCLIDEAN):
        from .hyperspace import SetSequence

        return SetSequence(self.sets, metric)

    def rows(self):
        return [s._asdict() for s in self.iterates]


def attractor(sys: IFS, seed: PointSet, iters: int, budget: Optional[int] = None,
              metric: MetricSpec = EUCLIDEAN) -> AttractorTrace:
    """Iterate the Hutchinson operator ``iters`` times from ``seed``."""
    c = sys.contraction
    if not c < 1:
        raise NotContractive(c)
    if not isinstance(seed, PointSet):
        seed = PointSet(seed)
    if seed.dim != sys.dim:
        raise DimensionError(f"seed has dimension {seed.dim}, system has {sys.dim}")
    if budget is not None and budget < len(seed):
        raise ValueError(f"budget {budget} is smaller than the seed ({len(seed)} points)")
    if iters < 0:
        raise ValueError("iters must be >= 0")
    A = seed
    sets = [A]
    steps = []
    err = 0.0
    initial_gap = math.nan
    for n in range(iters):
        raw = hutchinson_step(A, sys)
        if n == 0:
            initial_gap = hausdorff(A, raw, metric)
        delta, nxt = (0.0, raw) if budget is None else fit_budget(raw, budget, metric)
        nerr = c * err + delta
        steps.append(AttractorStep(n, len(A), hausdorff(A, nxt, metric), delta, len(raw), err, nerr))
        err = nerr
        A = nxt
        sets.append(A)
    return AttractorTrace(tuple(steps), tuple(sets), c, initial_gap)


# -- built-in systems --------------------------------------------------------


def cantor() -> IFS:
    """Middle-thirds Cantor set, c = 1/3."""
    third = 1.0 / 3.0
    return IFS((AffineMap([[third]], [0.0]), AffineMap([[third]], [2.0 / 3.0])))


def sierpinski() -> IFS:
    """Sierpinski triangle on the unit equilateral triangle, c = 1/2."""
    vertices = [(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3.0) / 2.0)]
    half = [[0.5, 0.0], [0.0, 0.5]]
    return IFS(tuple(AffineMap(half, [0.5 * vx, 0.5 * vy]) for vx, vy in vertices))


def barnsley_fern() -> IFS:
    """Four-map fern with the usual published coefficients (demo only)."""
    return IFS((
        AffineMap([[0.0, 0.0], [0.0, 0.16]], [0.0, 0.0]),
        AffineMap([[0.85, 0.04], [-0.04, 0.85]], [0.0, 1.6]),
        AffineMap([[0.2, -0.26], [0.23, 0.22]], [0.0, 1.6]),
        AffineMap([[-0.15, 0.28], [0.26, 0.24]], [0.0, 0.44]),
    ))


BUILTIN_SYSTEMS = {"cantor": cantor, "sierpinski": sierpinski, "fern": barnsley_fern}


# -- JSON format ---------------------------------------------------------------


def ifs_from_dict(data) -> IFS:
    """Parse ``{dim, maps: [{linear: row-major d*d floats, offset: d floats}]}``.

    ``linear`` may also be given as a list of d rows.
    """
    try:
        dim = int(data["dim"])
        raw_maps = data["maps"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SystemFormatError(f"IFS definition needs integer 'dim' and a 'maps' list: {exc}") from None
    if dim < 1 or not isinstance(raw_maps, list) or not raw_maps:
        raise SystemFormatError("IFS definition needs dim >= 1 and a non-empty 'maps' list")
    maps = []
    for k, m in enumerate(raw_maps):
        try:
            lin, off = m["linear"], m["offset"]
        except (KeyError, TypeError):
            raise SystemFormatError(f"map {k}: needs 'linear' and 'offset'") from None
        if lin and all(isinstance(r, list) for r in lin):
            if len(lin) != dim or any(len(r) != dim for r in lin):
                raise SystemFormatError(f"map {k}: linear rows must have length {dim}")
            flat = [v for r in lin for v in r]
        else:
            flat = lin
            if not isinstance(flat, list) or len(flat) != dim * dim:
                raise SystemFormatError(f"map {k}: linear must hold {dim * dim} row-major values")
        if not isinstance(off, list) or len(off) != dim:
            raise SystemFormatError(f"map {k}: offset must hold {dim} values")
        try:
            maps.append(AffineMap(np.asarray(flat, dtype=float).reshape(dim, dim), off))
        except (TypeError, ValueError) as exc:
            raise SystemFormatError(f"map {k}: {exc}") from None
    return IFS(tuple(maps))


def load_ifs(path) -> IFS:
    text = str(path)
    if text.startswith("builtin:"):
        name = text.split(":", 1)[1]
        if name not in BUILTIN_SYSTEMS:
            raise SystemFormatError(f"unknown built-in system {name!r}")
        return BUILTIN_SYSTEMS[name]()
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SystemFormatError(f"{path}: invalid JSON: {exc}") from None
    return ifs_from_dict(data)


def save_ifs(sys: IFS, path):
    Path(path).write_text(json.dumps(sys.to_dict(), indent=2) + "\n")
