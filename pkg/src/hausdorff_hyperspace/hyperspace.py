"""Sequences of point sets in the Hausdorff hyperspace.

An infinite sequence A_1, A_2, ... is handled through a finite prefix
A_1..A_N. Every "for all i > m" quantifier ranges over m < i <= N, and
closures of tail unions are replaced by epsilon-proximity to the finite
tail unions. Limit points that never occur in any A_i (the 0 of the
sequence {1/n}) are found by injecting extra candidate points.

Indices exposed by this module are 1-based, like the sequences they model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Union

import numpy as np

from .errors import DimensionError, EmptyLimit, HyperspaceError, HypothesisViolated, PrefixExhausted
from .hausdorff import directed_distance_matrix, hausdorff_distance
from .metric import (
    EUCLIDEAN,
    MetricSpec,
    PointSet,
    as_point,
    distance,
    greedy_net_indices,
    lexsort_rows,
    nearest_point,
    points_set_distances,
)

TAIL_FRACTION = 0.5
SUBSEQ_FRACTION = 0.2
MIN_MARGIN = 5
DEFAULT_B = 2.0
DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SetSequence:
    """Finite prefix A_1..A_N (N >= 2) of a sequence of point sets."""

    sets: tuple
    metric: MetricSpec = EUCLIDEAN

    def __post_init__(self):
        sets = tuple(s if isinstance(s, PointSet) else PointSet(s) for s in self.sets)
        if len(sets) < 2:
            raise ValueError("a set sequence needs at least two members")
        dims = {s.dim for s in sets}
        if len(dims) != 1:
            raise DimensionError(f"sequence members have mixed dimensions {sorted(dims)}")
        object.__setattr__(self, "sets", sets)

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    @property
    def dim(self) -> int:
        return self.sets[0].dim

    def at(self, n: int) -> PointSet:
        """A_n, 1-based."""
        if not 1 <= n <= len(self.sets):
            raise IndexError(f"index {n} outside 1..{len(self.sets)}")
        return self.sets[n - 1]

    @cached_property
    def directed_matrix(self) -> np.ndarray:
        """``U[i-1, j-1] = u(A_i, A_j)``."""
        return directed_distance_matrix(self.sets, self.metric)

    @cached_property
    def hausdorff_matrix(self) -> np.ndarray:
        U = self.directed_matrix
        return np.maximum(U, U.T)

    def all_points(self) -> np.ndarray:
        return np.concatenate([s.points for s in self.sets])


def check_count(seq: SetSequence, tail_fraction: float = TAIL_FRACTION) -> int:
    """N_check = floor(N * tail_fraction), at least 1."""
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must lie in (0, 1]")
    return max(1, int(math.floor(len(seq) * tail_fraction)))


# -- Cauchy analysis ---------------------------------------------------------


@dataclass(frozen=True)
class CauchyReport:
    is_cauchy: bool
    m_star: Optional[int]
    tail_sup: float
    epsilon: float
    min_margin: int = MIN_MARGIN

    def to_dict(self):
        return {
            "is_cauchy": self.is_cauchy,
            "m_star": self.m_star,
            "tail_sup": self.tail_sup,
            "epsilon": self.epsilon,
            "min_margin": self.min_margin,
        }


def tail_sups(seq: SetSequence) -> np.ndarray:
    """``T[m] = max_{m < i, j <= N} rho_H(A_i, A_j)`` for m = 0..N-1."""
    H = seq.hausdorff_matrix
    N = len(seq)
    T = np.zeros(N)
    for m in range(N - 2, -1, -1):
        T[m] = max(T[m + 1], H[m, m + 1:].max())
    return T


def is_cauchy(seq: SetSequence, epsilon: float, min_margin: int = MIN_MARGIN) -> CauchyReport:
    """Smallest modulus m with sup_{i,j>m} rho_H(A_i, A_j) < epsilon on the prefix.

    A modulus only counts when at least ``min_margin`` indices remain after
    it; one sitting at the end of the prefix says nothing.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    N = len(seq)
    T = tail_sups(seq)
    last = N - min_margin
    for m in range(0, max(last, -1) + 1):
        if T[m] < epsilon:
            return CauchyReport(True, m, float(T[m]), epsilon, min_margin)
    probe = max(last, 0)
    return CauchyReport(False, None, float(T[probe]), epsilon, min_margin)


def tail_resolution(seq: SetSequence, tail_fraction: float = TAIL_FRACTION) -> float:
    """Twice the diameter of the inspected tail A_{N_check}..A_N in the hyperspace.

    At epsilon >= this value every point of A_N is within epsilon / 2 of each
    inspected set, so the lower limit is non-empty and the three limit
    characterizations agree within 2 * epsilon.
    """
    n_check = check_count(seq, tail_fraction)
    return 2.0 * float(seq.hausdorff_matrix[n_check - 1:, n_check - 1:].max())


def tail_union(seq: SetSequence, n: int) -> PointSet:
    """A_n u A_{n+1} u ... u A_N, exact duplicates removed."""
    if not 1 <= n <= len(seq):
        raise IndexError(f"tail index {n} outside 1..{len(seq)}")
    if n == len(seq):
        return seq.sets[-1]
    return PointSet(np.concatenate([s.points for s in seq.sets[n - 1:]]))


# -- limit sets --------------------------------------------------------------


@dataclass(frozen=True)
class LimitApprox:
    points: PointSet
    epsilon: float
    candidates_examined: int
    qualifying: int = 0
    n_check: int = 0
    is_cauchy: bool = True

    def to_dict(self):
        return {
            "points": self.points.points.tolist(),
            "epsilon": self.epsilon,
            "candidates_examined": self.candidates_examined,
            "qualifying": self.qualifying,
            "n_check": self.n_check,
            "is_cauchy": self.is_cauchy,
        }


def _as_candidates(extra, dim) -> Optional[np.ndarray]:
    if extra is None:
        return None
    pts = extra.points if isinstance(extra, PointSet) else PointSet(extra).points
    if pts.shape[1] != dim:
        raise DimensionError(f"candidates have dimension {pts.shape[1]}, sequence has {dim}")
    return pts


def candidate_pool(seq: SetSequence, extra_candidates=None, include_sets: bool = True):
    """Deduplicated candidate points and a mask of which came from ``extra_candidates``.

    Extras come first, each group in lexicographic order, so the pool (and
    everything derived from it) is independent of input ordering.
    """
    groups = []
    extra = _as_candidates(extra_candidates, seq.dim)
    if extra is not None:
        groups.append(extra[lexsort_rows(extra)])
    n_extra = len(groups[0]) if groups else 0
    if include_sets:
        own = PointSet(seq.all_points()).points
        groups.append(own[lexsort_rows(own)])
    if not groups:
        raise ValueError("empty candidate pool")
    pool = np.concatenate(groups)
    _, first = np.unique(pool, axis=0, return_index=True)
    keep = np.sort(first)
    return pool[keep], keep < n_extra


def limit_set(seq: SetSequence, epsilon: float, extra_candidates=None, *,
              tail_fraction: float = TAIL_FRACTION, include_sets: bool = True) -> LimitApprox:
    """Approximate A = intersection over n of closure(A_n u A_{n+1} u ...).

    A candidate x is kept when rho(x, tail_union(n)) <= epsilon for every
    n <= N_check. Tail unions shrink as n grows, so that is one test against
    tail_union(N_check). Survivors are thinned by a greedy net of radius
    2*epsilon, scanning extra candidates before sequence points: injected
    points stand for cluster points the sequence only approaches.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    n_check = check_count(seq, tail_fraction)
    pool, _ = candidate_pool(seq, extra_candidates, include_sets)
    d = points_set_distances(pool, tail_union(seq, n_check), seq.metric)
    ok = d <= epsilon
    if not ok.any():
        raise EmptyLimit(
            f"no candidate within epsilon={epsilon!r} of the tail union from n={n_check}"
        )
    # pool order is already extras-first, lexicographic within each group
    qualifying = pool[ok]
    keep = greedy_net_indices(qualifying, 2.0 * epsilon, seq.metric)
    reps = qualifying[keep]
    reps = reps[lexsort_rows(reps)]
    cauchy = is_cauchy(seq, epsilon).is_cauchy if epsilon > 0 else False
    return LimitApprox(
        PointSet._trusted(reps, 2.0 * epsilon),
        float(epsilon),
        int(len(pool)),
        int(ok.sum()),
        n_check,
        cauchy,
    )


def _tail_table(seq: SetSequence, candidates, tail_fraction: float):
    """Candidate pool and ``D[p, k] = rho(pool[p], A_{N_check + k})`` over the inspected tail."""
    n_check = check_count(seq, tail_fraction)
    pool, _ = candidate_pool(seq, candidates)
    cols = [points_set_distances(pool, seq.at(n), seq.metric) for n in range(n_check, len(seq) + 1)]
    return pool, np.stack(cols, axis=1)


def _finish(points: np.ndarray, what: str, epsilon: float) -> PointSet:
    if points.shape[0] == 0:
        raise EmptyLimit(f"{what} is empty at epsilon={epsilon!r}")
    return PointSet._trusted(points[lexsort_rows(points)])


def _lower(pool, D, epsilon):
    return _finish(pool[(D <= epsilon).all(axis=1)], "lower limit", epsilon)


def _upper(pool, D, epsilon, subseq_fraction):
    need = max(1, math.ceil(subseq_fraction * (D.shape[1] - 1)))
    return _finish(pool[(D <= epsilon).sum(axis=1) >= need], "upper limit", epsilon)


def liminf_set(seq: SetSequence, epsilon: float, candidates=None, *,
               tail_fraction: float = TAIL_FRACTION) -> PointSet:
    """Candidates within epsilon of every A_n of the inspected tail.

    The selections y_n = nearest_point(x, A_n) are the sequence that
    converges to x.
    """
    return _lower(*_tail_table(seq, candidates, tail_fraction), epsilon)


def limsup_set(seq: SetSequence, epsilon: float, candidates=None, *,
               tail_fraction: float = TAIL_FRACTION,
               subseq_fraction: float = SUBSEQ_FRACTION) -> PointSet:
    """Candidates within epsilon of A_n for a positive fraction of the inspected tail."""
    return _upper(*_tail_table(seq, candidates, tail_fraction), epsilon, subseq_fraction)


# -- Main Lemma --------------------------------------------------------------


@dataclass(frozen=True)
class LemmaVerdict:
    distance: float
    bound: float
    holds: bool
    nearest: tuple
    epsilon: float
    m: int
    hypothesis_max: float

    def to_dict(self):
        return {
            "distance": self.distance,
            "bound": self.bound,
            "holds": self.holds,
            "nearest": list(self.nearest),
            "epsilon": self.epsilon,
            "m": self.m,
            "hypothesis_max": self.hypothesis_max,
        }


def check_hypothesis(seq: SetSequence, x, epsilon: float, m: int) -> float:
    """Verify rho(x, A_i) < epsilon for m < i <= N; returns the largest such distance."""
    if not 0 <= m < len(seq):
        raise ValueError(f"m must lie in 0..{len(seq) - 1}")
    x = as_point(x, seq.dim)
    worst = 0.0
    for i in range(m + 1, len(seq) + 1):
        d = nearest_point(x, seq.at(i), seq.metric)[1]
        if not d < epsilon:
            raise HypothesisViolated(i, d, epsilon)
        worst = max(worst, d)
    return worst


def main_lemma_check(seq: SetSequence, x, epsilon: float, m: int,
                     limit: Union[LimitApprox, PointSet], tol: float = DEFAULT_TOL) -> LemmaVerdict:
    """Given rho(x, A_i) < epsilon for all i > m, test rho(x, A) <= epsilon.

    ``A`` is the approximate limit, so the test allows its own resolution:
    rho(x, limit) <= epsilon + limit.epsilon + tol.
    """
    x = as_point(x, seq.dim)
    worst = check_hypothesis(seq, x, epsilon, m)
    pts = limit.points if isinstance(limit, LimitApprox) else limit
    lim_eps = limit.epsilon if isinstance(limit, LimitApprox) else 0.0
    near, d = nearest_point(x, pts, seq.metric)
    bound = epsilon + lim_eps + tol
    return LemmaVerdict(d, bound, d <= bound, tuple(near.tolist()), float(epsilon), int(m), worst)


@dataclass(frozen=True)
class WitnessChain:
    """Points z_i in A_{n_i} with rho(x, z_1) < eps and rho(z_i, z_{i+1}) < eps / b**i."""

    b: float
    epsilon: float
    x: tuple
    indices: tuple
    points: tuple
    first_gap: float
    gaps: tuple
    y_estimate: tuple
    distance_to_estimate: float

    @property
    def total_length(self) -> float:
        return float(math.fsum(self.gaps))

    @property
    def length_bound(self) -> float:
        """Geometric series: sum of eps / b**i = eps / (b - 1)."""
        return self.epsilon / (self.b - 1.0)

    @property
    def bound(self) -> float:
        return self.epsilon * (self.b + 1.0) / (self.b - 1.0)

    def violations(self, slack: float = 1e-12) -> list:
        out = []
        if not self.first_gap < self.epsilon:
            out.append(f"rho(x, z_1) = {self.first_gap!r} >= {self.epsilon!r}")
        for i, g in enumerate(self.gaps, start=1):
            if not g < self.epsilon / self.b ** i:
                out.append(f"gap {i} = {g!r} >= eps/b^{i}")
        if not all(a < c for a, c in zip(self.indices, self.indices[1:])):
            out.append("indices not strictly increasing")
        if self.total_length > self.length_bound + slack:
            out.append(f"chain length {self.total_length!r} exceeds eps/(b-1)")
        if not self.distance_to_estimate < self.bound:
            out.append(f"rho(x, y) = {self.distance_to_estimate!r} >= eps(b+1)/(b-1)")
        return out

    def to_dict(self):
        return {
            "b": self.b,
            "epsilon": self.epsilon,
            "x": list(self.x),
            "indices": list(self.indices),
            "points": [list(p) for p in self.points],
            "first_gap": self.first_gap,
            "gaps": list(self.gaps),
            "total_length": self.total_length,
            "length_bound": self.length_bound,
            "y_estimate": list(self.y_estimate),
            "distance_to_estimate": self.distance_to_estimate,
            "bound": self.bound,
        }


def witness_chain(seq: SetSequence, x, epsilon: float, m: int, b: float = DEFAULT_B, *,
                  min_margin: int = MIN_MARGIN, max_points: Optional[int] = None) -> WitnessChain:
    """Build the chain z_1, z_2, ... that converges to a point of the limit near x.

    n_i is the smallest index after n_{i-1} (after m for i = 1) such that
    every point of A_{n_i} is within eps / b**i of every later set in the
    prefix, with at least ``min_margin`` sets left after it. Each z is the
    nearest point of the next subsequence set to the previous one.
    """
    if not b > 1:
        raise ValueError("b must be > 1")
    x = as_point(x, seq.dim)
    check_hypothesis(seq, x, epsilon, m)
    N = len(seq)
    U = seq.directed_matrix
    # tail_u[k] = max_{j > k} u(A_k, A_j), 0-based
    tail_u = np.zeros(N)
    for k in range(N - 1):
        tail_u[k] = U[k, k + 1:].max()

    indices, points, gaps = [], [], []
    prev = x
    start = m + 1
    i = 1
    while max_points is None or len(indices) < max_points:
        radius = epsilon / b ** i
        found = None
        for n in range(start, N - min_margin + 1):
            if tail_u[n - 1] < radius:
                found = n
                break
        if found is None:
            if not indices or max_points is not None:
                raise PrefixExhausted(i)
            break
        z, d = nearest_point(prev, seq.at(found), seq.metric)
        if indices:
            gaps.append(d)
        else:
            first_gap = d
        indices.append(found)
        points.append(tuple(z.tolist()))
        prev = z
        start = found + 1
        i += 1

    y = np.asarray(points[-1])
    chain = WitnessChain(
        float(b), float(epsilon), tuple(x.tolist()), tuple(indices), tuple(points),
        float(first_gap), tuple(gaps), tuple(y.tolist()),
        distance(x, y, seq.metric),
    )
    bad = chain.violations()
    if bad:
        raise HyperspaceError("witness chain failed its own invariants: " + "; ".join(bad))
    return chain


# -- convergence and agreement ------------------------------------------------


class TraceRow(NamedTuple):
    n: int
    u_limit_to_set: float
    u_set_to_limit: float
    rho_h: float


def convergence_trace(seq: SetSequence, limit: Union[LimitApprox, PointSet]) -> list:
    """Per index n: u(A, A_n), u(A_n, A) and rho_H(A, A_n) against the limit A."""
    pts = limit.points if isinstance(limit, LimitApprox) else limit
    rows = []
    for n in range(1, len(seq) + 1):
        bd = hausdorff_distance(pts, seq.at(n), seq.metric)
        rows.append(TraceRow(n, bd.u_ab, bd.u_ba, bd.rho_h))
    return rows


@dataclass(frozen=True)
class AgreementRecord:
    limit: PointSet
    liminf: Optional[PointSet]
    limsup: Optional[PointSet]
    epsilon: float
    distances: dict = field(default_factory=dict)
    is_cauchy: bool = True

    @property
    def agree(self) -> bool:
        return all(v <= 2.0 * self.epsilon for v in self.distances.values())

    @property
    def upper_limit_identity(self) -> bool:
        """Upper limit matches the tail-closure limit; needs no convergence."""
        return self.distances["limit_limsup"] <= 2.0 * self.epsilon

    def to_dict(self):
        def pts(s):
            return None if s is None else s.points.tolist()

        return {
            "epsilon": self.epsilon,
            "is_cauchy": self.is_cauchy,
            "agree": self.agree,
            "upper_limit_identity": self.upper_limit_identity,
            "distances": {k: (v if math.isfinite(v) else None) for k, v in self.distances.items()},
            "limit": pts(self.limit),
            "liminf": pts(self.liminf),
            "limsup": pts(self.limsup),
        }


def _maybe(fn, *args):
    try:
        return fn(*args)
    except EmptyLimit:
        return None


def limit_characterization_agreement(seq: SetSequence, epsilon: float, candidates=None, *,
                                     tail_fraction: float = TAIL_FRACTION,
                                     subseq_fraction: float = SUBSEQ_FRACTION) -> AgreementRecord:
    """Compare the tail-closure limit with the lower and upper limits.

    An empty lower or upper limit is recorded as ``None`` with infinite
    distances; only an empty tail-closure limit raises.
    """
    lim = limit_set(seq, epsilon, candidates, tail_fraction=tail_fraction)
    pool, D = _tail_table(seq, candidates, tail_fraction)
    lo = _maybe(_lower, pool, D, epsilon)
    hi = _maybe(_upper, pool, D, epsilon, subseq_fraction)

    def rho(a, c):
        if a is None or c is None:
            return math.inf
        return hausdorff_distance(a, c, seq.metric).rho_h

    distances = {
        "limit_liminf": rho(lim.points, lo),
        "limit_limsup": rho(lim.points, hi),
        "liminf_limsup": rho(lo, hi),
    }
    return AgreementRecord(lim.points, lo, hi, float(epsilon), distances, lim.is_cauchy)
