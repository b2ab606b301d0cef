"""Pure numpy implementation of the distance kernels.

Used when the compiled ``_ckernels`` extension is unavailable. Every
function returns exactly what the compiled version returns: distances are
built with the same per-axis operation order, and min/max are exact.

Metric codes: 0 euclidean, 1 manhattan, 2 chebyshev.
"""

import numpy as np

ROW_BLOCK = 64
COL_BLOCK = 512


def _block(X, Y, code):
    acc = None
    for k in range(X.shape[1]):
        t = X[:, k, None] - Y[None, :, k]
        term = t * t if code == 0 else np.abs(t)
        if acc is None:
            acc = term
        elif code == 2:
            acc = np.maximum(acc, term)
        else:
            acc = acc + term
    return np.sqrt(acc) if code == 0 else acc


def nearest(X, B, code):
    n, m = X.shape[0], B.shape[0]
    best = np.full(n, np.inf)
    arg = np.zeros(n, dtype=np.int64)
    for s in range(0, n, 256):
        rows = X[s:s + 256]
        bb = best[s:s + 256]
        ba = arg[s:s + 256]
        for t in range(0, m, 4 * COL_BLOCK):
            D = _block(rows, B[t:t + 4 * COL_BLOCK], code)
            j = np.argmin(D, axis=1)
            v = D[np.arange(len(rows)), j]
            # strict: an equal value in a later chunk has a higher index
            better = v < bb
            bb[better] = v[better]
            ba[better] = j[better] + t
    return best, arg


def directed(A, B, code):
    """max over rows a of A of min over rows b of B of rho(a, b), with early break.

    Returns ``(value, index)`` where ``index`` is the lowest row of ``A``
    attaining the maximum. A row stops scanning ``B`` as soon as its running
    minimum is <= the current maximum: it can no longer raise it.
    """
    n, m = A.shape[0], B.shape[0]
    cmax = -np.inf
    widx = 0
    for s in range(0, n, ROW_BLOCK):
        rows = A[s:s + ROW_BLOCK]
        run = np.full(len(rows), np.inf)
        alive = np.arange(len(rows))
        for t in range(0, m, COL_BLOCK):
            d = _block(rows[alive], B[t:t + COL_BLOCK], code).min(axis=1)
            run[alive] = np.minimum(run[alive], d)
            alive = alive[run[alive] > cmax]
            if alive.size == 0:
                break
        if alive.size:
            # rows still alive finished their scan; dropped rows are <= cmax
            j = int(alive[np.argmax(run[alive])])
            if run[j] > cmax:
                cmax = float(run[j])
                widx = s + j
    return cmax, widx


def greedy_net(P, delta, code):
    n = P.shape[0]
    kept = np.empty_like(P)
    idx = []
    k = 0
    for i in range(n):
        if k and _block(P[i:i + 1], kept[:k], code)[0].min() <= delta:
            continue
        kept[k] = P[i]
        k += 1
        idx.append(i)
    return np.asarray(idx, dtype=np.int64)
