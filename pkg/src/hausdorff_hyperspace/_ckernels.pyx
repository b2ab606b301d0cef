# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled distance kernels.

Same contract as ``_pykernels``: results are bit-identical to the numpy
route. Nearest-neighbour queries go through a uniform grid over the target
set for d <= 3 (exact: rings are searched until a conservative lower bound
exceeds the best distance found), otherwise a linear scan.

Metric codes: 0 euclidean, 1 manhattan, 2 chebyshev.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, floor, ceil, pow, INFINITY

cnp.import_array()

cdef Py_ssize_t GRID_MIN_POINTS = 48
cdef double MAX_CELL_COORD = 1099511627776.0  # 2**40, keeps cell arithmetic in range
cdef long long NET_MAX_CELLS = 4194304  # 2**22


cdef inline double _dist(const double* x, const double* y, Py_ssize_t d, int code) noexcept nogil:
    cdef double acc = 0.0
    cdef double t
    cdef Py_ssize_t k
    if code == 0:
        for k in range(d):
            t = x[k] - y[k]
            acc = acc + t * t
        return sqrt(acc)
    elif code == 1:
        for k in range(d):
            acc = acc + fabs(x[k] - y[k])
        return acc
    else:
        for k in range(d):
            t = fabs(x[k] - y[k])
            if t > acc:
                acc = t
        return acc


cdef inline long long _clampcell(double v) noexcept nogil:
    if v > MAX_CELL_COORD:
        return <long long>MAX_CELL_COORD
    if v < -MAX_CELL_COORD:
        return -<long long>MAX_CELL_COORD
    return <long long>v


cdef class _Grid:
    cdef const double[:, ::1] pts
    cdef Py_ssize_t d, m
    cdef double lo[3]
    cdef double h
    cdef long long size[3]
    cdef long long[::1] start
    cdef long long[::1] items

    def __init__(self, const double[:, ::1] pts):
        cdef Py_ssize_t i, k
        cdef double hi[3]
        cdef double diag = 0.0, ext
        cdef long long c, cid, ncells
        self.pts = pts
        self.m = pts.shape[0]
        self.d = pts.shape[1]
        for k in range(3):
            self.lo[k] = 0.0
            hi[k] = 0.0
            self.size[k] = 1
        for k in range(self.d):
            self.lo[k] = pts[0, k]
            hi[k] = pts[0, k]
            for i in range(1, self.m):
                if pts[i, k] < self.lo[k]:
                    self.lo[k] = pts[i, k]
                if pts[i, k] > hi[k]:
                    hi[k] = pts[i, k]
            ext = hi[k] - self.lo[k]
            diag += ext * ext
        diag = sqrt(diag)
        self.h = diag / ceil(pow(<double>self.m, 1.0 / self.d))
        if not (self.h > 0.0):
            self.h = 1.0
        for k in range(self.d):
            self.size[k] = <long long>floor((hi[k] - self.lo[k]) / self.h) + 1
            if self.size[k] < 1:
                self.size[k] = 1
        ncells = self.size[0] * self.size[1] * self.size[2]
        start = np.zeros(ncells + 1, dtype=np.int64)
        items = np.empty(self.m, dtype=np.int64)
        cell_of = np.empty(self.m, dtype=np.int64)
        cdef long long[::1] st = start
        cdef long long[::1] it = items
        cdef long long[::1] co = cell_of
        for i in range(self.m):
            cid = 0
            for k in range(3):
                if k < self.d:
                    c = <long long>floor((pts[i, k] - self.lo[k]) / self.h)
                    if c < 0:
                        c = 0
                    if c >= self.size[k]:
                        c = self.size[k] - 1
                else:
                    c = 0
                cid = cid * self.size[k] + c
            co[i] = cid
            st[cid + 1] += 1
        for c in range(ncells):
            st[c + 1] += st[c]
        fill = start[:-1].copy()
        cdef long long[::1] fl = fill
        for i in range(self.m):
            it[fl[co[i]]] = i
            fl[co[i]] += 1
        self.start = start
        self.items = items

    cdef double query(self, const double* x, int code, double stop_at, long long* best_idx) noexcept nogil:
        """Nearest distance from x; returns early once it is <= stop_at."""
        cdef long long cx[3]
        cdef long long lo_c[3]
        cdef long long hi_c[3]
        cdef long long r, rmin = 0, rmax = 0, far, near, a, b, c, step, cid, p
        cdef long long d0, d1, d2
        cdef Py_ssize_t k
        cdef double best = INFINITY, dd, lb
        cdef long long bi = -1
        for k in range(3):
            if k < self.d:
                cx[k] = _clampcell(floor((x[k] - self.lo[k]) / self.h))
            else:
                cx[k] = 0
            if cx[k] < 0:
                near = -cx[k]
            elif cx[k] >= self.size[k]:
                near = cx[k] - self.size[k] + 1
            else:
                near = 0
            far = cx[k] if cx[k] > self.size[k] - 1 - cx[k] else self.size[k] - 1 - cx[k]
            if far < 0:
                far = -far
            if near > rmin:
                rmin = near
            if far > rmax:
                rmax = far
        r = rmin
        while r <= rmax:
            if r >= 2:
                # cells at Chebyshev cell-distance >= r are >= (r-1)h away on
                # some axis; half a cell of slack absorbs rounding in floor()
                lb = (r - 1.5) * self.h
                if best < lb:
                    break
            for k in range(3):
                lo_c[k] = cx[k] - r
                if lo_c[k] < 0:
                    lo_c[k] = 0
                hi_c[k] = cx[k] + r
                if hi_c[k] > self.size[k] - 1:
                    hi_c[k] = self.size[k] - 1
            a = lo_c[0]
            while a <= hi_c[0]:
                d0 = a - cx[0]
                if d0 < 0:
                    d0 = -d0
                b = lo_c[1]
                while b <= hi_c[1]:
                    d1 = b - cx[1]
                    if d1 < 0:
                        d1 = -d1
                    c = lo_c[2]
                    step = 1
                    if d0 < r and d1 < r:
                        # interior column: only the two faces c = cx2 -+ r
                        c = cx[2] - r
                        step = 2 * r
                        if step == 0:
                            step = 1
                    while c <= hi_c[2]:
                        if c >= lo_c[2]:
                            cid = (a * self.size[1] + b) * self.size[2] + c
                            for p in range(self.start[cid], self.start[cid + 1]):
                                dd = _dist(x, &self.pts[self.items[p], 0], self.d, code)
                                if dd < best or (dd == best and self.items[p] < bi):
                                    best = dd
                                    bi = self.items[p]
                                    if best <= stop_at:
                                        best_idx[0] = bi
                                        return best
                        c += step
                    b += 1
                a += 1
            r += 1
        best_idx[0] = bi
        return best


cdef inline double _linear(const double* x, const double[:, ::1] B, int code, double stop_at,
                           long long* best_idx) noexcept nogil:
    cdef double best = INFINITY, dd
    cdef long long bi = -1
    cdef Py_ssize_t j, d = B.shape[1]
    for j in range(B.shape[0]):
        dd = _dist(x, &B[j, 0], d, code)
        if dd < best:
            best = dd
            bi = j
            if best <= stop_at:
                break
    best_idx[0] = bi
    return best


def _use_grid(Py_ssize_t m, Py_ssize_t d):
    return d <= 3 and m >= GRID_MIN_POINTS


def nearest(const double[:, ::1] X, const double[:, ::1] B, int code):
    cdef Py_ssize_t n = X.shape[0], i
    out = np.empty(n, dtype=np.float64)
    arg = np.empty(n, dtype=np.int64)
    cdef double[::1] o = out
    cdef long long[::1] g = arg
    cdef long long bi = 0
    cdef _Grid grid
    if _use_grid(B.shape[0], B.shape[1]):
        grid = _Grid(B)
        for i in range(n):
            o[i] = grid.query(&X[i, 0], code, -1.0, &bi)
            g[i] = bi
    else:
        for i in range(n):
            o[i] = _linear(&X[i, 0], B, code, -1.0, &bi)
            g[i] = bi
    return out, arg


def directed(const double[:, ::1] A, const double[:, ::1] B, int code):
    """(max_a min_b rho(a, b), lowest index of A attaining it)."""
    cdef Py_ssize_t n = A.shape[0], i
    cdef double cmax = -INFINITY, v
    cdef long long widx = 0, bi = 0
    cdef _Grid grid
    cdef bint use_grid = _use_grid(B.shape[0], B.shape[1])
    if use_grid:
        grid = _Grid(B)
    for i in range(n):
        if use_grid:
            v = grid.query(&A[i, 0], code, cmax, &bi)
        else:
            v = _linear(&A[i, 0], B, code, cmax, &bi)
        if v > cmax:
            cmax = v
            widx = i
    return cmax, widx


def greedy_net(const double[:, ::1] P, double delta, int code):
    """Indices of a greedy delta-net: keep a row iff it is > delta from all kept rows."""
    cdef Py_ssize_t n = P.shape[0], d = P.shape[1], i, j, k, nk = 0
    kept = np.empty(n, dtype=np.int64)
    cdef long long[::1] kp = kept
    cdef bint ok
    cdef double lo[3]
    cdef double hi[3]
    cdef long long size[3]
    cdef long long cc[3]
    cdef long long ncells = 1, cid, a, b, c, q
    cdef double h = 1.01 * delta
    cdef bint use_grid = d <= 3 and delta > 0 and n > 32
    # one int64 head per cell; cap the table at 32 MB or 16 cells per point
    cdef long long max_cells = max(16 * n, NET_MAX_CELLS)
    if use_grid:
        for k in range(3):
            lo[k] = 0.0
            hi[k] = 0.0
            size[k] = 1
        for k in range(d):
            lo[k] = P[0, k]
            hi[k] = P[0, k]
            for i in range(1, n):
                if P[i, k] < lo[k]:
                    lo[k] = P[i, k]
                if P[i, k] > hi[k]:
                    hi[k] = P[i, k]
            if (hi[k] - lo[k]) / h > max_cells:
                use_grid = False
                break
            size[k] = <long long>floor((hi[k] - lo[k]) / h) + 1
            ncells *= size[k]
            if ncells > max_cells:
                use_grid = False
                break
    if not use_grid:
        for i in range(n):
            ok = True
            for j in range(nk):
                if _dist(&P[i, 0], &P[kp[j], 0], d, code) <= delta:
                    ok = False
                    break
            if ok:
                kp[nk] = i
                nk += 1
        return kept[:nk].copy()

    # bucket kept points; a neighbour within delta is at most one cell away per axis
    head = np.full(ncells, -1, dtype=np.int64)
    nxt = np.full(n, -1, dtype=np.int64)
    cdef long long[::1] hd = head
    cdef long long[::1] nx = nxt
    cdef long long lo_c[3]
    cdef long long hi_c[3]
    for i in range(n):
        for k in range(3):
            if k < d:
                cc[k] = <long long>floor((P[i, k] - lo[k]) / h)
                if cc[k] < 0:
                    cc[k] = 0
                if cc[k] >= size[k]:
                    cc[k] = size[k] - 1
            else:
                cc[k] = 0
            lo_c[k] = cc[k] - 1 if cc[k] > 0 else 0
            hi_c[k] = cc[k] + 1 if cc[k] + 1 < size[k] else size[k] - 1
        ok = True
        a = lo_c[0]
        while ok and a <= hi_c[0]:
            b = lo_c[1]
            while ok and b <= hi_c[1]:
                c = lo_c[2]
                while ok and c <= hi_c[2]:
                    q = hd[(a * size[1] + b) * size[2] + c]
                    while q >= 0:
                        if _dist(&P[i, 0], &P[q, 0], d, code) <= delta:
                            ok = False
                            break
                        q = nx[q]
                    c += 1
                b += 1
            a += 1
        if ok:
            kp[nk] = i
            nk += 1
            cid = (cc[0] * size[1] + cc[1]) * size[2] + cc[2]
            nx[i] = hd[cid]
            hd[cid] = i
    return kept[:nk].copy()
