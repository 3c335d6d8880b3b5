# Compiled twins of mmsgeo._kernels_np. Semantics must match exactly:
# out-of-domain neighbours skipped, neighbourless points get 0.

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

ctypedef cnp.float64_t f64
ctypedef cnp.int64_t i64


def grid_slope_nd(cnp.ndarray values, cnp.ndarray offsets, cnp.ndarray dists):
    cdef int ndim = values.ndim
    if ndim == 1:
        return _grid_slope_1d(values, offsets, dists)
    elif ndim == 2:
        return _grid_slope_2d(values, offsets, dists)
    elif ndim == 3:
        return _grid_slope_3d(values, offsets, dists)
    raise ValueError("grid kernels support 1-3 dimensions")


cdef _grid_slope_1d(const f64[::1] v, const i64[:, ::1] off, const f64[::1] dist):
    cdef Py_ssize_t n = v.shape[0], k = off.shape[0]
    cdef Py_ssize_t i, j, t
    cdef double q, best
    out_arr = np.zeros(n, dtype=np.float64)
    cdef f64[::1] out = out_arr
    for i in range(n):
        best = 0.0
        for j in range(k):
            t = i + off[j, 0]
            if t < 0 or t >= n:
                continue
            q = v[t] - v[i]
            if q < 0.0:
                q = -q
            q = q / dist[j]
            if q > best:
                best = q
        out[i] = best
    return out_arr


cdef _grid_slope_2d(const f64[:, ::1] v, const i64[:, ::1] off, const f64[::1] dist):
    cdef Py_ssize_t n0 = v.shape[0], n1 = v.shape[1], k = off.shape[0]
    cdef Py_ssize_t i0, i1, j, t0, t1
    cdef double q, best
    out_arr = np.zeros((n0, n1), dtype=np.float64)
    cdef f64[:, ::1] out = out_arr
    for i0 in range(n0):
        for i1 in range(n1):
            best = 0.0
            for j in range(k):
                t0 = i0 + off[j, 0]
                if t0 < 0 or t0 >= n0:
                    continue
                t1 = i1 + off[j, 1]
                if t1 < 0 or t1 >= n1:
                    continue
                q = v[t0, t1] - v[i0, i1]
                if q < 0.0:
                    q = -q
                q = q / dist[j]
                if q > best:
                    best = q
            out[i0, i1] = best
    return out_arr


cdef _grid_slope_3d(const f64[:, :, ::1] v, const i64[:, ::1] off, const f64[::1] dist):
    cdef Py_ssize_t n0 = v.shape[0], n1 = v.shape[1], n2 = v.shape[2]
    cdef Py_ssize_t k = off.shape[0]
    cdef Py_ssize_t i0, i1, i2, j, t0, t1, t2
    cdef double q, best
    out_arr = np.zeros((n0, n1, n2), dtype=np.float64)
    cdef f64[:, :, ::1] out = out_arr
    for i0 in range(n0):
        for i1 in range(n1):
            for i2 in range(n2):
                best = 0.0
                for j in range(k):
                    t0 = i0 + off[j, 0]
                    if t0 < 0 or t0 >= n0:
                        continue
                    t1 = i1 + off[j, 1]
                    if t1 < 0 or t1 >= n1:
                        continue
                    t2 = i2 + off[j, 2]
                    if t2 < 0 or t2 >= n2:
                        continue
                    q = v[t0, t1, t2] - v[i0, i1, i2]
                    if q < 0.0:
                        q = -q
                    q = q / dist[j]
                    if q > best:
                        best = q
                out[i0, i1, i2] = best
    return out_arr


def grid_pair_lip_nd(cnp.ndarray values, cnp.ndarray offsets,
                     cnp.ndarray pair_i, cnp.ndarray pair_j,
                     cnp.ndarray pair_dists):
    cdef int ndim = values.ndim
    if ndim == 1:
        return _grid_pair_lip_1d(values, offsets, pair_i, pair_j, pair_dists)
    elif ndim == 2:
        return _grid_pair_lip_2d(values, offsets, pair_i, pair_j, pair_dists)
    elif ndim == 3:
        return _grid_pair_lip_3d(values, offsets, pair_i, pair_j, pair_dists)
    raise ValueError("grid kernels support 1-3 dimensions")


cdef _grid_pair_lip_1d(const f64[::1] v, const i64[:, ::1] off, const i64[::1] pi,
                       const i64[::1] pj, const f64[::1] pd):
    cdef Py_ssize_t n = v.shape[0], m = pi.shape[0]
    cdef Py_ssize_t i, p, a, b
    cdef double q, best
    out_arr = np.zeros(n, dtype=np.float64)
    cdef f64[::1] out = out_arr
    for i in range(n):
        best = 0.0
        for p in range(m):
            a = i + off[pi[p], 0]
            if a < 0 or a >= n:
                continue
            b = i + off[pj[p], 0]
            if b < 0 or b >= n:
                continue
            q = v[a] - v[b]
            if q < 0.0:
                q = -q
            q = q / pd[p]
            if q > best:
                best = q
        out[i] = best
    return out_arr


cdef _grid_pair_lip_2d(const f64[:, ::1] v, const i64[:, ::1] off, const i64[::1] pi,
                       const i64[::1] pj, const f64[::1] pd):
    cdef Py_ssize_t n0 = v.shape[0], n1 = v.shape[1], m = pi.shape[0]
    cdef Py_ssize_t i0, i1, p, a0, a1, b0, b1
    cdef double q, best
    out_arr = np.zeros((n0, n1), dtype=np.float64)
    cdef f64[:, ::1] out = out_arr
    for i0 in range(n0):
        for i1 in range(n1):
            best = 0.0
            for p in range(m):
                a0 = i0 + off[pi[p], 0]
                if a0 < 0 or a0 >= n0:
                    continue
                a1 = i1 + off[pi[p], 1]
                if a1 < 0 or a1 >= n1:
                    continue
                b0 = i0 + off[pj[p], 0]
                if b0 < 0 or b0 >= n0:
                    continue
                b1 = i1 + off[pj[p], 1]
                if b1 < 0 or b1 >= n1:
                    continue
                q = v[a0, a1] - v[b0, b1]
                if q < 0.0:
                    q = -q
                q = q / pd[p]
                if q > best:
                    best = q
            out[i0, i1] = best
    return out_arr


cdef _grid_pair_lip_3d(const f64[:, :, ::1] v, const i64[:, ::1] off, const i64[::1] pi,
                       const i64[::1] pj, const f64[::1] pd):
    cdef Py_ssize_t n0 = v.shape[0], n1 = v.shape[1], n2 = v.shape[2]
    cdef Py_ssize_t m = pi.shape[0]
    cdef Py_ssize_t i0, i1, i2, p, a0, a1, a2, b0, b1, b2
    cdef double q, best
    out_arr = np.zeros((n0, n1, n2), dtype=np.float64)
    cdef f64[:, :, ::1] out = out_arr
    for i0 in range(n0):
        for i1 in range(n1):
            for i2 in range(n2):
                best = 0.0
                for p in range(m):
                    a0 = i0 + off[pi[p], 0]
                    if a0 < 0 or a0 >= n0:
                        continue
                    a1 = i1 + off[pi[p], 1]
                    if a1 < 0 or a1 >= n1:
                        continue
                    a2 = i2 + off[pi[p], 2]
                    if a2 < 0 or a2 >= n2:
                        continue
                    b0 = i0 + off[pj[p], 0]
                    if b0 < 0 or b0 >= n0:
                        continue
                    b1 = i1 + off[pj[p], 1]
                    if b1 < 0 or b1 >= n1:
                        continue
                    b2 = i2 + off[pj[p], 2]
                    if b2 < 0 or b2 >= n2:
                        continue
                    q = v[a0, a1, a2] - v[b0, b1, b2]
                    if q < 0.0:
                        q = -q
                    q = q / pd[p]
                    if q > best:
                        best = q
                out[i0, i1, i2] = best
    return out_arr


def grid_ball_max_nd(cnp.ndarray values, cnp.ndarray offsets):
    cdef int ndim = values.ndim
    if ndim == 1:
        return _grid_ball_max_1d(values, offsets)
    elif ndim == 2:
        return _grid_ball_max_2d(values, offsets)
    elif ndim == 3:
        return _grid_ball_max_3d(values, offsets)
    raise ValueError("grid kernels support 1-3 dimensions")


cdef _grid_ball_max_1d(const f64[::1] v, const i64[:, ::1] off):
    cdef Py_ssize_t n = v.shape[0], k = off.shape[0]
    cdef Py_ssize_t i, j, t
    cdef double best
    cdef int seen
    out_arr = np.empty(n, dtype=np.float64)
    cdef f64[::1] out = out_arr
    for i in range(n):
        best = -np.inf
        seen = 0
        for j in range(k):
            t = i + off[j, 0]
            if t < 0 or t >= n:
                continue
            if not seen or v[t] > best:
                best = v[t]
                seen = 1
        out[i] = best
    return out_arr


cdef _grid_ball_max_2d(const f64[:, ::1] v, const i64[:, ::1] off):
    cdef Py_ssize_t n0 = v.shape[0], n1 = v.shape[1], k = off.shape[0]
    cdef Py_ssize_t i0, i1, j, t0, t1
    cdef double best
    cdef int seen
    out_arr = np.empty((n0, n1), dtype=np.float64)
    cdef f64[:, ::1] out = out_arr
    for i0 in range(n0):
        for i1 in range(n1):
            best = -np.inf
            seen = 0
            for j in range(k):
                t0 = i0 + off[j, 0]
                if t0 < 0 or t0 >= n0:
                    continue
                t1 = i1 + off[j, 1]
                if t1 < 0 or t1 >= n1:
                    continue
                if not seen or v[t0, t1] > best:
                    best = v[t0, t1]
                    seen = 1
            out[i0, i1] = best
    return out_arr


cdef _grid_ball_max_3d(const f64[:, :, ::1] v, const i64[:, ::1] off):
    cdef Py_ssize_t n0 = v.shape[0], n1 = v.shape[1], n2 = v.shape[2]
    cdef Py_ssize_t k = off.shape[0]
    cdef Py_ssize_t i0, i1, i2, j, t0, t1, t2
    cdef double best
    cdef int seen
    out_arr = np.empty((n0, n1, n2), dtype=np.float64)
    cdef f64[:, :, ::1] out = out_arr
    for i0 in range(n0):
        for i1 in range(n1):
            for i2 in range(n2):
                best = -np.inf
                seen = 0
                for j in range(k):
                    t0 = i0 + off[j, 0]
                    if t0 < 0 or t0 >= n0:
                        continue
                    t1 = i1 + off[j, 1]
                    if t1 < 0 or t1 >= n1:
                        continue
                    t2 = i2 + off[j, 2]
                    if t2 < 0 or t2 >= n2:
                        continue
                    if not seen or v[t0, t1, t2] > best:
                        best = v[t0, t1, t2]
                        seen = 1
                out[i0, i1, i2] = best
    return out_arr


def csr_slope(cnp.ndarray values, cnp.ndarray indptr, cnp.ndarray indices,
              cnp.ndarray dists):
    cdef const f64[::1] v = values
    cdef const i64[::1] ip = indptr
    cdef const i64[::1] ix = indices
    cdef const f64[::1] dd = dists
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef Py_ssize_t i, p
    cdef double q, best
    out_arr = np.zeros(n, dtype=np.float64)
    cdef f64[::1] out = out_arr
    for i in range(n):
        best = 0.0
        for p in range(ip[i], ip[i + 1]):
            q = v[ix[p]] - v[i]
            if q < 0.0:
                q = -q
            q = q / dd[p]
            if q > best:
                best = q
        out[i] = best
    return out_arr


def csr_pair_lip(cnp.ndarray values, cnp.ndarray coords, cnp.ndarray indptr,
                 cnp.ndarray indices):
    cdef const f64[::1] v = values
    cdef const f64[:, ::1] xy = coords
    cdef const i64[::1] ip = indptr
    cdef const i64[::1] ix = indices
    cdef Py_ssize_t n = ip.shape[0] - 1
    cdef Py_ssize_t d = coords.shape[1]
    cdef Py_ssize_t i, p, q_, a, b, ax
    cdef double dd, dv, t, best
    out_arr = np.zeros(n, dtype=np.float64)
    cdef f64[::1] out = out_arr
    for i in range(n):
        best = 0.0
        for p in range(ip[i], ip[i + 1]):
            a = ix[p]
            for q_ in range(p + 1, ip[i + 1]):
                b = ix[q_]
                dd = 0.0
                for ax in range(d):
                    t = xy[a, ax] - xy[b, ax]
                    dd += t * t
                if dd <= 0.0:
                    continue
                dd = sqrt(dd)
                dv = v[a] - v[b]
                if dv < 0.0:
                    dv = -dv
                dv = dv / dd
                if dv > best:
                    best = dv
        out[i] = best
    return out_arr
