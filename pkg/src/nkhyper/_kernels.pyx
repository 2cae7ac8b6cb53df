# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_kernels_py``.

Same signatures, same arithmetic, written as explicit loops so that small
fixed-size tensors (3x3, 6x6, 6x6x6) do not pay numpy dispatch costs.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, sin, cos

cnp.import_array()

from ._kernels_py import EPS7 as _EPS7_PY

cdef double[:, :, ::1] _EPS7 = np.ascontiguousarray(_EPS7_PY)
cdef double _SQRT3 = sqrt(3.0)


def qmul(const double[:, ::1] a, const double[:, ::1] b):
    cdef Py_ssize_t n = a.shape[0], i
    out = np.empty((n, 4))
    cdef double[:, ::1] o = out
    cdef double aw, ax, ay, az, bw, bx, by, bz
    for i in range(n):
        aw = a[i, 0]; ax = a[i, 1]; ay = a[i, 2]; az = a[i, 3]
        bw = b[i, 0]; bx = b[i, 1]; by = b[i, 2]; bz = b[i, 3]
        o[i, 0] = aw * bw - ax * bx - ay * by - az * bz
        o[i, 1] = aw * bx + ax * bw + ay * bz - az * by
        o[i, 2] = aw * by - ax * bz + ay * bw + az * bx
        o[i, 3] = aw * bz + ax * by - ay * bx + az * bw
    return out


def cross7(const double[:, ::1] a, const double[:, ::1] b):
    cdef Py_ssize_t n = a.shape[0], m, i, j, k
    out = np.zeros((n, 7))
    cdef double[:, ::1] o = out
    cdef double e
    for m in range(n):
        for i in range(7):
            for j in range(7):
                for k in range(7):
                    e = _EPS7[i, j, k]
                    if e != 0.0:
                        o[m, k] += e * a[m, i] * b[m, j]
    return out


cdef inline void _dexp_one(double v0, double v1, double v2, double[:, ::1] out) noexcept nogil:
    cdef double theta = 2.0 * sqrt(v0 * v0 + v1 * v1 + v2 * v2)
    cdef double t2 = theta * theta
    cdef double c1, c2
    if theta < 1e-3:
        c1 = 0.5 - t2 / 24.0 + t2 * t2 / 720.0
        c2 = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0
    else:
        c1 = (1.0 - cos(theta)) / t2
        c2 = (theta - sin(theta)) / (t2 * theta)
    # K = 2 [v]_x
    cdef double k[3][3]
    k[0][0] = 0.0; k[0][1] = -2.0 * v2; k[0][2] = 2.0 * v1
    k[1][0] = 2.0 * v2; k[1][1] = 0.0; k[1][2] = -2.0 * v0
    k[2][0] = -2.0 * v1; k[2][1] = 2.0 * v0; k[2][2] = 0.0
    cdef int i, j, l
    cdef double kk
    for i in range(3):
        for j in range(3):
            kk = 0.0
            for l in range(3):
                kk += k[i][l] * k[l][j]
            out[i, j] = (1.0 if i == j else 0.0) - c1 * k[i][j] + c2 * kk


cdef inline void _inv3(double[:, ::1] m, double[:, ::1] out) noexcept nogil:
    cdef double det = (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
                       - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
                       + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))
    cdef double r = 1.0 / det
    out[0, 0] = (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]) * r
    out[0, 1] = (m[0, 2] * m[2, 1] - m[0, 1] * m[2, 2]) * r
    out[0, 2] = (m[0, 1] * m[1, 2] - m[0, 2] * m[1, 1]) * r
    out[1, 0] = (m[1, 2] * m[2, 0] - m[1, 0] * m[2, 2]) * r
    out[1, 1] = (m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]) * r
    out[1, 2] = (m[0, 2] * m[1, 0] - m[0, 0] * m[1, 2]) * r
    out[2, 0] = (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]) * r
    out[2, 1] = (m[0, 1] * m[2, 0] - m[0, 0] * m[2, 1]) * r
    out[2, 2] = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]) * r


def dexp_left(const double[:, ::1] v):
    cdef Py_ssize_t n = v.shape[0], i
    out = np.empty((n, 3, 3))
    cdef double[:, :, ::1] o = out
    for i in range(n):
        _dexp_one(v[i, 0], v[i, 1], v[i, 2], o[i])
    return out


def s3s3_chart_tensors(const double[:, ::1] coords):
    cdef Py_ssize_t n = coords.shape[0], s, i, j, l
    g_arr = np.empty((n, 6, 6))
    j_arr = np.empty((n, 6, 6))
    p_arr = np.zeros((n, 6, 6))
    cdef double[:, :, ::1] g = g_arr
    cdef double[:, :, ::1] jm = j_arr
    cdef double[:, :, ::1] pm = p_arr
    cdef double[:, ::1] mx = np.empty((3, 3))
    cdef double[:, ::1] my = np.empty((3, 3))
    cdef double[:, ::1] mxi = np.empty((3, 3))
    cdef double[:, ::1] myi = np.empty((3, 3))
    cdef double axx, ayy, axy, ayx, bxy, byx, eye
    with nogil:
        for s in range(n):
            _dexp_one(coords[s, 0], coords[s, 1], coords[s, 2], mx)
            _dexp_one(coords[s, 3], coords[s, 4], coords[s, 5], my)
            _inv3(mx, mxi)
            _inv3(my, myi)
            for i in range(3):
                for j in range(3):
                    axx = 0.0; ayy = 0.0; axy = 0.0; ayx = 0.0; bxy = 0.0; byx = 0.0
                    for l in range(3):
                        axx += mx[l, i] * mx[l, j]
                        ayy += my[l, i] * my[l, j]
                        axy += mx[l, i] * my[l, j]
                        ayx += my[l, i] * mx[l, j]
                        bxy += mxi[i, l] * my[l, j]
                        byx += myi[i, l] * mx[l, j]
                    g[s, i, j] = (4.0 / 3.0) * axx
                    g[s, 3 + i, 3 + j] = (4.0 / 3.0) * ayy
                    g[s, i, 3 + j] = (-2.0 / 3.0) * axy
                    g[s, 3 + i, j] = (-2.0 / 3.0) * ayx
                    eye = 1.0 if i == j else 0.0
                    jm[s, i, j] = -eye / _SQRT3
                    jm[s, i, 3 + j] = 2.0 * bxy / _SQRT3
                    jm[s, 3 + i, j] = -2.0 * byx / _SQRT3
                    jm[s, 3 + i, 3 + j] = eye / _SQRT3
                    pm[s, i, 3 + j] = bxy
                    pm[s, 3 + i, j] = byx
    return g_arr, j_arr, p_arr


def koszul(const double[:, :, ::1] ginv, const double[:, :, :, ::1] dg):
    cdef Py_ssize_t n = ginv.shape[0], d = ginv.shape[1], s, k, i, j, l
    out = np.empty((n, d, d, d))
    cdef double[:, :, :, ::1] o = out
    cdef double acc
    with nogil:
        for s in range(n):
            for k in range(d):
                for i in range(d):
                    for j in range(i, d):
                        acc = 0.0
                        for l in range(d):
                            acc += ginv[s, k, l] * (dg[s, i, j, l] + dg[s, j, i, l] - dg[s, l, i, j])
                        o[s, k, i, j] = 0.5 * acc
                        o[s, k, j, i] = 0.5 * acc
    return out
