# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled quadrature kernels; same contract as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, exp, fabs, isfinite, pow

cnp.import_array()

MAP_ID, MAP_SQ, MAP_EXP = 0, 1, 2
BACKEND = "cython"

cdef double[8] XGK = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
]
cdef double[8] WGK = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
]
cdef double[4] WG = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
]


cdef inline double _horner(const double[:] c, double x) nogil:
    cdef Py_ssize_t i = c.shape[0] - 1
    cdef double acc = c[i]
    while i > 0:
        i -= 1
        acc = acc * x + c[i]
    return acc


cdef inline double _f(int kind, int k, double jac, const double[:] n0,
                      const double[:] dn, double s) nogil:
    cdef double x
    if kind == 0:
        x = s
    elif kind == 1:
        x = s * s
    else:
        x = exp(-s)
    cdef double q = _horner(n0, x) / (2.0 * _horner(dn, x))
    return jac * pow(sqrt(x), k) * sqrt(q)


cdef void _gk15(int kind, int k, double jac, const double[:] n0, const double[:] dn,
                double a, double b, double* val, double* err) nogil:
    cdef double half = 0.5 * (b - a)
    cdef double mid = 0.5 * (a + b)
    cdef double fc = _f(kind, k, jac, n0, dn, mid)
    cdef double rk = WGK[7] * fc
    cdef double rg = WG[3] * fc
    cdef double f1, f2
    cdef int j
    for j in range(7):
        f1 = _f(kind, k, jac, n0, dn, mid - half * XGK[j])
        f2 = _f(kind, k, jac, n0, dn, mid + half * XGK[j])
        rk += WGK[j] * (f1 + f2)
        if j % 2 == 1:
            rg += WG[j // 2] * (f1 + f2)
    val[0] = half * rk
    err[0] = fabs(half * (rk - rg))


cdef int _adaptive(int kind, int k, double jac, const double[:] n0, const double[:] dn,
                   double a, double b, double tol, int max_panels,
                   double* pa, double* pb, double* pv, double* pe,
                   double* out_val, double* out_err) nogil:
    cdef int n = 1
    cdef int i, worst
    cdef double total, err, m, v1, e1, v2, e2, big
    _gk15(kind, k, jac, n0, dn, a, b, &pv[0], &pe[0])
    pa[0] = a
    pb[0] = b
    total = pv[0]
    err = pe[0]
    while n < max_panels:
        if err <= tol * (fabs(total) if fabs(total) > 1.0 else 1.0):
            break
        if not isfinite(err):
            break
        worst = 0
        big = pe[0]
        for i in range(1, n):
            if pe[i] > big:
                big = pe[i]
                worst = i
        m = 0.5 * (pa[worst] + pb[worst])
        _gk15(kind, k, jac, n0, dn, pa[worst], m, &v1, &e1)
        _gk15(kind, k, jac, n0, dn, m, pb[worst], &v2, &e2)
        pa[n] = m
        pb[n] = pb[worst]
        pv[n] = v2
        pe[n] = e2
        pb[worst] = m
        pv[worst] = v1
        pe[worst] = e1
        n += 1
        total = 0.0
        err = 0.0
        for i in range(n):
            total += pv[i]
            err += pe[i]
    total = 0.0
    err = 0.0
    for i in range(n):
        total += pv[i]
        err += pe[i]
    out_val[0] = total
    out_err[0] = err
    return n


def polyval(coeffs, x):
    cdef const double[:] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    xa = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty_like(xa)
    cdef const double[:] xv = xa.reshape(-1)
    cdef double[:] ov = out.reshape(-1)
    cdef Py_ssize_t i
    with nogil:
        for i in range(xv.shape[0]):
            ov[i] = _horner(c, xv[i])
    return out


def integrand(int kind, int k, double jac, n0, dn, s):
    cdef const double[:] a = np.ascontiguousarray(n0, dtype=np.float64)
    cdef const double[:] d = np.ascontiguousarray(dn, dtype=np.float64)
    sa = np.ascontiguousarray(s, dtype=np.float64)
    out = np.empty_like(sa)
    cdef const double[:] sv = sa.reshape(-1)
    cdef double[:] ov = out.reshape(-1)
    cdef Py_ssize_t i
    with nogil:
        for i in range(sv.shape[0]):
            ov[i] = _f(kind, k, jac, a, d, sv[i])
    return out


def gk15(int kind, int k, double jac, n0, dn, double a, double b):
    cdef const double[:] c0 = np.ascontiguousarray(n0, dtype=np.float64)
    cdef const double[:] c1 = np.ascontiguousarray(dn, dtype=np.float64)
    cdef double v, e
    _gk15(kind, k, jac, c0, c1, a, b, &v, &e)
    return v, e


def adaptive(int kind, int k, double jac, n0, dn, double a, double b, double tol, int max_panels):
    cdef const double[:] c0 = np.ascontiguousarray(n0, dtype=np.float64)
    cdef const double[:] c1 = np.ascontiguousarray(dn, dtype=np.float64)
    work = np.empty((4, max_panels), dtype=np.float64)
    cdef double[:, :] w = work
    cdef double v, e
    cdef int n
    with nogil:
        n = _adaptive(kind, k, jac, c0, c1, a, b, tol, max_panels,
                      &w[0, 0], &w[1, 0], &w[2, 0], &w[3, 0], &v, &e)
    return v, e, n


def cells(int kind, int k, double jac, n0, dn, nodes, double tol, int max_panels):
    cdef const double[:] c0 = np.ascontiguousarray(n0, dtype=np.float64)
    cdef const double[:] c1 = np.ascontiguousarray(dn, dtype=np.float64)
    cdef const double[:] nd = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef Py_ssize_t m = nd.shape[0] - 1
    vals = np.empty(m, dtype=np.float64)
    errs = np.empty(m, dtype=np.float64)
    cdef double[:] vv = vals
    cdef double[:] ev = errs
    work = np.empty((4, max_panels), dtype=np.float64)
    cdef double[:, :] w = work
    cdef Py_ssize_t i
    cdef bint ok = True
    cdef double v, e
    with nogil:
        for i in range(m):
            _adaptive(kind, k, jac, c0, c1, nd[i], nd[i + 1], tol, max_panels,
                      &w[0, 0], &w[1, 0], &w[2, 0], &w[3, 0], &v, &e)
            vv[i] = v
            ev[i] = e
            if not (e <= tol * (fabs(v) if fabs(v) > 1.0 else 1.0)):
                ok = False
    return vals, errs, ok
