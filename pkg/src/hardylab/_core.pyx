# cython: language_level=3
"""Compiled kernels: Gram-Schmidt, complex Jacobi, and the constrained
maximum that dominates every optimizer objective.

Same contracts as ``_core_py``; arrays are row-stacked complex vectors.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()

NAME = "cython"

ctypedef double complex cplx


cdef inline double _abs2(cplx z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline cplx _conj(cplx z) nogil:
    return z.real - 1j * z.imag


cdef Py_ssize_t _mgs(cplx[:, ::1] src, cplx[:, ::1] out, double tol) nogil:
    cdef Py_ssize_t m = src.shape[0], n = src.shape[1]
    cdef Py_ssize_t r = 0, i, j, k, rep
    cdef double v0, nw
    cdef cplx dot
    for i in range(m):
        v0 = 0.0
        for k in range(n):
            v0 += _abs2(src[i, k])
        v0 = sqrt(v0)
        if v0 <= tol:
            continue
        for k in range(n):
            out[r, k] = src[i, k]
        for rep in range(2):
            for j in range(r):
                dot = 0.0
                for k in range(n):
                    dot = dot + _conj(out[j, k]) * out[r, k]
                for k in range(n):
                    out[r, k] = out[r, k] - dot * out[j, k]
        nw = 0.0
        for k in range(n):
            nw += _abs2(out[r, k])
        nw = sqrt(nw)
        if nw > tol * v0:
            for k in range(n):
                out[r, k] = out[r, k] / nw
            r += 1
    return r


def orthonormalize(vs, double tol=1e-10):
    cdef cplx[:, ::1] src = np.ascontiguousarray(vs, dtype=np.complex128)
    out = np.zeros((src.shape[0], src.shape[1]), dtype=np.complex128)
    cdef cplx[:, ::1] o = out
    cdef Py_ssize_t r
    with nogil:
        r = _mgs(src, o, tol)
    return out[:r].copy()


cdef void _jacobi(cplx[:, ::1] a, cplx[:, ::1] v, double tol, int max_sweeps) nogil:
    cdef Py_ssize_t n = a.shape[0], p, q, k
    cdef int sweep
    cdef double off, scale, r, tau, t, c, s
    cdef cplx ph, gqp, gqq, xp, xq
    scale = 0.0
    for p in range(n):
        for q in range(n):
            scale += _abs2(a[p, q])
    scale = sqrt(scale)
    if scale < 1.0:
        scale = 1.0
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += _abs2(a[p, q])
        if sqrt(off) < tol * scale:
            return
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = sqrt(_abs2(a[p, q]))
                if r < 1e-300:
                    continue
                ph = a[p, q] / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau >= 0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                gqp = -s * _conj(ph)
                gqq = c * _conj(ph)
                for k in range(n):
                    xp = a[k, p]
                    xq = a[k, q]
                    a[k, p] = c * xp + gqp * xq
                    a[k, q] = s * xp + gqq * xq
                for k in range(n):
                    xp = a[p, k]
                    xq = a[q, k]
                    a[p, k] = c * xp + _conj(gqp) * xq
                    a[q, k] = s * xp + _conj(gqq) * xq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    xp = v[k, p]
                    xq = v[k, q]
                    v[k, p] = c * xp + gqp * xq
                    v[k, q] = s * xp + gqq * xq


def jacobi_eigh(h, double tol=1e-12, int max_sweeps=64):
    a_arr = np.array(h, dtype=np.complex128, order="C", copy=True)
    n = a_arr.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    cdef cplx[:, ::1] a = a_arr
    cdef cplx[:, ::1] v = v_arr
    with nogil:
        _jacobi(a, v, tol, max_sweeps)
    w = np.diag(a_arr).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v_arr[:, order]


def constrained_max(zero_vecs, targets, double tol=1e-10):
    cdef cplx[:, ::1] z = np.ascontiguousarray(zero_vecs, dtype=np.complex128)
    cdef cplx[:, ::1] tg = np.ascontiguousarray(targets, dtype=np.complex128)
    cdef Py_ssize_t m = z.shape[0], n = tg.shape[1], kt = tg.shape[0]
    basis_arr = np.zeros((m if m > 0 else 1, n), dtype=np.complex128)
    w_arr = np.array(tg, dtype=np.complex128, order="C", copy=True)
    gram_arr = np.zeros((kt, kt), dtype=np.complex128)
    vec_arr = np.eye(kt, dtype=np.complex128)
    cdef cplx[:, ::1] basis = basis_arr
    cdef cplx[:, ::1] w = w_arr
    cdef cplx[:, ::1] gram = gram_arr
    cdef cplx[:, ::1] vecs = vec_arr
    cdef Py_ssize_t r = 0, i, j, k, rep
    cdef cplx dot
    cdef double best, val
    with nogil:
        if m > 0:
            r = _mgs(z, basis, tol)
        for rep in range(2):
            for i in range(kt):
                for j in range(r):
                    dot = 0.0
                    for k in range(n):
                        dot = dot + _conj(basis[j, k]) * w[i, k]
                    for k in range(n):
                        w[i, k] = w[i, k] - dot * basis[j, k]
        if kt == 1:
            best = 0.0
            for k in range(n):
                best += _abs2(w[0, k])
        else:
            for i in range(kt):
                for j in range(kt):
                    dot = 0.0
                    for k in range(n):
                        dot = dot + _conj(w[i, k]) * w[j, k]
                    gram[i, j] = dot
            _jacobi(gram, vecs, 1e-12, 64)
            best = 0.0
            for i in range(kt):
                val = gram[i, i].real
                if val > best:
                    best = val
    return best
