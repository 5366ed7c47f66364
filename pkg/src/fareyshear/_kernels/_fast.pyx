# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled kernels; signatures and conventions mirror the pure module."""

from libc.math cimport log, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def tree_cocycles(parents, tmats):
    """Compose 2x2 matrices down a forest: out[i] = out[parents[i]] @ tmats[i].

    parents[i] < i; roots have parent -1 and out[root] = tmats[root].
    Every product is renormalized to determinant 1.
    """
    cdef cnp.int64_t[::1] par = np.ascontiguousarray(parents, dtype=np.int64)
    t_arr = np.ascontiguousarray(tmats, dtype=np.float64)
    out_arr = np.array(t_arr, copy=True)
    cdef double[:, :, ::1] t = t_arr
    cdef double[:, :, ::1] out = out_arr
    if t.shape[1] != 2 or t.shape[2] != 2:
        raise ValueError("expected matrices of shape (2, 2)")
    if par.shape[0] != t.shape[0]:
        raise ValueError("parents and tmats disagree on length")
    cdef Py_ssize_t i, n = par.shape[0]
    cdef cnp.int64_t p
    cdef double pa, pb, pc, pd, fa, fb, fc, fd
    cdef double m00, m01, m10, m11, s
    for i in range(n):
        p = par[i]
        if p < 0:
            continue
        pa = out[p, 0, 0]; pb = out[p, 0, 1]
        pc = out[p, 1, 0]; pd = out[p, 1, 1]
        fa = t[i, 0, 0]; fb = t[i, 0, 1]
        fc = t[i, 1, 0]; fd = t[i, 1, 1]
        m00 = pa * fa + pb * fc
        m01 = pa * fb + pb * fd
        m10 = pc * fa + pd * fc
        m11 = pc * fb + pd * fd
        s = sqrt(m00 * m11 - m01 * m10)
        out[i, 0, 0] = m00 / s
        out[i, 0, 1] = m01 / s
        out[i, 1, 0] = m10 / s
        out[i, 1, 1] = m11 / s
    return out_arr


def apply_proj_batch(mats, pts):
    """Row-wise projective action: mats (n,2,2) on pts (n,2), returning (n,2)."""
    cdef double[:, :, ::1] m = np.ascontiguousarray(mats, dtype=np.float64)
    cdef double[:, ::1] p = np.ascontiguousarray(pts, dtype=np.float64)
    if m.shape[1] != 2 or m.shape[2] != 2 or p.shape[1] != 2:
        raise ValueError("expected matrices (n,2,2) and points (n,2)")
    if m.shape[0] != p.shape[0]:
        raise ValueError("mats and pts disagree on length")
    out_arr = np.empty((p.shape[0], 2), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, n = p.shape[0]
    for i in range(n):
        out[i, 0] = m[i, 0, 0] * p[i, 0] + m[i, 0, 1] * p[i, 1]
        out[i, 1] = m[i, 1, 0] * p[i, 0] + m[i, 1, 1] * p[i, 1]
    return out_arr


def shear_quads(quads):
    """Shears of pre-arranged projective quadruples (a, b, c, d), rows (n,4,2).

    The quadruple must be negatively cyclically ordered with diagonal (a, c);
    the result is ln(-(D(d,a) D(b,c)) / (D(d,c) D(b,a))) with D the projective
    difference.  Degenerate rows come back as nan.
    """
    cdef double[:, :, ::1] q = np.ascontiguousarray(quads, dtype=np.float64)
    if q.shape[1] != 4 or q.shape[2] != 2:
        raise ValueError("expected rows of shape (4, 2)")
    out_arr = np.empty(q.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, n = q.shape[0]
    cdef double a0, a1, b0, b1, c0, c1, d0, d1
    cdef double pda, pbc, pdc, pba
    for i in range(n):
        a0 = q[i, 0, 0]; a1 = q[i, 0, 1]
        b0 = q[i, 1, 0]; b1 = q[i, 1, 1]
        c0 = q[i, 2, 0]; c1 = q[i, 2, 1]
        d0 = q[i, 3, 0]; d1 = q[i, 3, 1]
        pda = d0 * a1 - a0 * d1
        pbc = b0 * c1 - c0 * b1
        pdc = d0 * c1 - c0 * d1
        pba = b0 * a1 - a0 * b1
        out[i] = log(-(pda * pbc) / (pdc * pba))
    return out_arr
