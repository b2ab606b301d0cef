"""Independent reference computations for the tests.

Plain Python over tuples: no numpy, no kernels, no shared helpers with the
package. Results agree with the package to rounding, not bit for bit.
"""

import math
from fractions import Fraction


def dist(x, y, kind="euclidean"):
    if kind == "euclidean":
        return math.sqrt(sum((a - b) ** 2 for a, b in zip(x, y)))
    if kind == "manhattan":
        return sum(abs(a - b) for a, b in zip(x, y))
    return max(abs(a - b) for a, b in zip(x, y))


def point_set(x, A, kind="euclidean"):
    return min(dist(x, a, kind) for a in A)


def directed(A, B, kind="euclidean"):
    return max(point_set(a, B, kind) for a in A)


def hausdorff(A, B, kind="euclidean"):
    return max(directed(A, B, kind), directed(B, A, kind))


def union(*sets):
    out = []
    seen = set()
    for S in sets:
        for p in S:
            if p not in seen:
                seen.add(p)
                out.append(p)
    return out


def tail_closure_limit(seq, candidates, epsilon, n_check):
    """Right-hand side of A = cap_n cl(cup_{i>=n} A_i) on a truncation.

    Evaluated literally: for every n in 1..n_check build the tail union and
    keep x only if it is within epsilon of each of them.
    """
    keep = []
    for x in candidates:
        if all(point_set(x, union(*seq[n - 1:])) <= epsilon for n in range(1, n_check + 1)):
            keep.append(x)
    return keep


def power_iteration_norm(M, iters=500):
    """Largest singular value via power iteration on M^T M."""
    d = len(M)
    v = [1.0 / math.sqrt(d)] * d
    lam = 0.0
    for _ in range(iters):
        Mv = [sum(M[i][j] * v[j] for j in range(d)) for i in range(d)]
        w = [sum(M[i][j] * Mv[i] for i in range(d)) for j in range(d)]
        norm = math.sqrt(sum(t * t for t in w))
        if norm == 0:
            return 0.0
        v = [t / norm for t in w]
        lam = norm
    return math.sqrt(lam)


def cantor_endpoints(level):
    """Exact endpoints of the level-`level` middle-thirds construction."""
    intervals = [(Fraction(0), Fraction(1))]
    for _ in range(level):
        nxt = []
        for a, b in intervals:
            t = (b - a) / 3
            nxt += [(a, a + t), (b - t, b)]
        intervals = nxt
    return sorted({p for iv in intervals for p in iv})
