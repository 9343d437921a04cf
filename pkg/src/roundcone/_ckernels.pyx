# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops for the sampling oracle.

Every function writes into caller-allocated output buffers and releases the
GIL, so the oracle can run chunks on a thread pool.  The semantics are
identical to ``roundcone._kernels_py``; ``roundcone.kernels`` picks one.
"""
from libc.math cimport sqrt
from libc.stdlib cimport free, malloc


def projected_stats(const double[:, ::1] D, const double[:, ::1] B,
                    const double[::1] axis_unit, double[::1] dots,
                    double[::1] norms, double[::1] perps):
    cdef Py_ssize_t m = D.shape[0]
    cdef Py_ssize_t n = D.shape[1]
    cdef Py_ssize_t k = B.shape[0]
    cdef Py_ssize_t i, j, l
    cdef double acc, dot, nn, pp, r
    cdef double *coef = <double *> malloc((k + 1) * sizeof(double))
    if coef == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(m):
                dot = 0.0
                nn = 0.0
                for j in range(k):
                    acc = 0.0
                    for l in range(n):
                        acc = acc + B[j, l] * D[i, l]
                    coef[j] = acc
                    dot = dot + acc * axis_unit[j]
                    nn = nn + acc * acc
                pp = 0.0
                for j in range(k):
                    r = coef[j] - dot * axis_unit[j]
                    pp = pp + r * r
                dots[i] = dot
                norms[i] = sqrt(nn)
                perps[i] = sqrt(pp)
    finally:
        free(coef)


def cone_margins(const double[:, ::1] D, const double[::1] axis,
                 double cos_phi, double[::1] out):
    cdef Py_ssize_t m = D.shape[0]
    cdef Py_ssize_t n = D.shape[1]
    cdef Py_ssize_t i, l
    cdef double dv, dd, vv = 0.0, vn, dn
    for l in range(n):
        vv = vv + axis[l] * axis[l]
    vn = sqrt(vv)
    with nogil:
        for i in range(m):
            dv = 0.0
            dd = 0.0
            for l in range(n):
                dv = dv + D[i, l] * axis[l]
                dd = dd + D[i, l] * D[i, l]
            dn = sqrt(dd)
            out[i] = (dv - cos_phi * dn * vn) / (dn * vn + 1.0)


def cap_directions(const double[:, ::1] G, const double[::1] vhat,
                   const double[::1] cos_t, const double[::1] sin_t,
                   double[:, ::1] out):
    cdef Py_ssize_t m = G.shape[0]
    cdef Py_ssize_t n = G.shape[1]
    cdef Py_ssize_t i, l
    cdef double gv, ww, w, scale
    with nogil:
        for i in range(m):
            gv = 0.0
            for l in range(n):
                gv = gv + G[i, l] * vhat[l]
            ww = 0.0
            for l in range(n):
                w = G[i, l] - gv * vhat[l]
                ww = ww + w * w
            scale = 0.0
            if ww > 0.0:
                scale = sin_t[i] / sqrt(ww)
            for l in range(n):
                out[i, l] = cos_t[i] * vhat[l] + scale * (G[i, l] - gv * vhat[l])
