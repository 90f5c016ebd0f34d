# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled compute kernels: Volterra prefix integrals and the depth march.

Same algorithms and constants as the numpy fallback ``_purekern`` (series
below x=12, fixed-length Hankel expansion above); only the loop structure
differs.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport M_PI, cos, exp, fabs, sin, sqrt

cnp.import_array()

BACKEND_NAME = "cython"

KERNEL_K1 = 1
KERNEL_RETRIEVAL = 2

cdef int _SERIES_TERMS = 34
cdef int _HANKEL_TERMS = 18
cdef double _SPLIT = 12.0
cdef double _K1_SMALL = 1e-3

# reciprocals 1/(k*(k+nu)) for the series recurrences, nu = 0..2
cdef double _R0[35]
cdef double _R1[35]
cdef double _R2[35]
# Hankel term factors (mu - (2k-1)^2) / (8k), nu = 0..2
cdef double _H0[19]
cdef double _H1[19]
cdef double _H2[19]
cdef int _ri
for _ri in range(1, 35):
    _R0[_ri] = 1.0 / (_ri * _ri)
    _R1[_ri] = 1.0 / (_ri * (_ri + 1))
    _R2[_ri] = 1.0 / (_ri * (_ri + 2))
for _ri in range(1, 19):
    _H0[_ri] = (0.0 - (2 * _ri - 1) ** 2) / (8.0 * _ri)
    _H1[_ri] = (4.0 - (2 * _ri - 1) ** 2) / (8.0 * _ri)
    _H2[_ri] = (16.0 - (2 * _ri - 1) ** 2) / (8.0 * _ri)


cdef double _series(int nu, double x) noexcept nogil:
    cdef double q = 0.25 * x * x
    cdef double t, s
    cdef double* recip
    cdef int k
    if nu == 0:
        t = 1.0
        recip = _R0
    elif nu == 1:
        t = 0.5 * x
        recip = _R1
    else:
        t = 0.125 * x * x
        recip = _R2
    s = t
    for k in range(1, _SERIES_TERMS + 1):
        t = t * (-q) * recip[k]
        s = s + t
        if fabs(t) < 1e-18:
            break
    return s


cdef double _hankel(int nu, double x) noexcept nogil:
    cdef double invx = 1.0 / x
    cdef double p = 1.0
    cdef double q = 0.0
    cdef double t = 1.0
    cdef double chi
    cdef double* coef
    cdef int k, r
    if nu == 0:
        coef = _H0
    elif nu == 1:
        coef = _H1
    else:
        coef = _H2
    for k in range(1, _HANKEL_TERMS + 1):
        t = t * coef[k] * invx
        r = k % 4
        if r == 1:
            q = q + t
        elif r == 2:
            p = p - t
        elif r == 3:
            q = q - t
        else:
            p = p + t
    chi = x - (2 * nu + 1) * (M_PI / 4.0)
    return sqrt(2.0 * invx / M_PI) * (p * cos(chi) - q * sin(chi))


cdef inline double _jn(int nu, double x) noexcept nogil:
    if x <= _SPLIT:
        return _series(nu, x)
    return _hankel(nu, x)


cdef inline double _k1(double x) noexcept nogil:
    cdef double x2
    if x < _K1_SMALL:
        x2 = x * x
        return 0.5 - x2 / 16.0 + x2 * x2 / 384.0
    return _jn(1, x) / x


cdef inline double _kern(int kernel, double x) noexcept nogil:
    if kernel == 1:
        return _k1(x)
    return 2.0 * _k1(x) - _jn(2, x)


def j0_arr(x):
    cdef cnp.ndarray[double, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(xv)
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        out[i] = _jn(0, xv[i])
    return out.reshape(np.shape(x))


def j1_arr(x):
    cdef cnp.ndarray[double, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(xv)
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        out[i] = _jn(1, xv[i])
    return out.reshape(np.shape(x))


def j2_arr(x):
    cdef cnp.ndarray[double, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(xv)
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        out[i] = _jn(2, xv[i])
    return out.reshape(np.shape(x))


def k1_arr(x):
    cdef cnp.ndarray[double, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(xv)
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        out[i] = _k1(xv[i])
    return out.reshape(np.shape(x))


def kr_arr(x):
    cdef cnp.ndarray[double, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(xv)
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        out[i] = 2.0 * _k1(xv[i]) - _jn(2, xv[i])
    return out.reshape(np.shape(x))


def volterra_prefix(tau, w, fw, dph, double c1z, double gamma, int kernel):
    """Prefix Volterra integrals; see ``_purekern.volterra_prefix``."""
    cdef cnp.ndarray[double, ndim=1] tv = np.ascontiguousarray(tau, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] fv = np.ascontiguousarray(fw, dtype=np.complex128)
    cdef Py_ssize_t n = tv.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(n, dtype=np.complex128)
    cdef bint use_phase = dph is not None
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] eip
    if use_phase:
        eip = np.exp(1j * np.ascontiguousarray(dph, dtype=np.float64))
    else:
        eip = np.zeros(1, dtype=np.complex128)
    if n < 2 or c1z < 0.0:
        return out
    cdef double h = tv[1] - tv[0]
    cdef double scale = 2.0 * sqrt(c1z)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] g = np.empty(n, dtype=np.complex128)
    cdef Py_ssize_t k, j, m
    cdef double dw
    cdef double complex gj, acc, pk
    for k in range(1, n):
        if use_phase:
            pk = eip[k].conjugate()
        for j in range(k + 1):
            dw = wv[k] - wv[j]
            if dw < 0.0:
                dw = 0.0
            gj = fv[j] * _kern(kernel, scale * sqrt(dw))
            if use_phase:
                gj = gj * (pk * eip[j])
            if gamma > 0.0:
                gj = gj * exp(-gamma * (tv[k] - tv[j]))
            g[j] = gj
        if k == 1:
            out[k] = 0.5 * h * (g[0] + g[1])
        elif k % 2 == 0:
            acc = g[0] + g[k]
            for j in range(1, k, 2):
                acc = acc + 4.0 * g[j]
            for j in range(2, k, 2):
                acc = acc + 2.0 * g[j]
            out[k] = (h / 3.0) * acc
        elif k == 3:
            out[k] = (3.0 * h / 8.0) * (g[0] + 3.0 * g[1] + 3.0 * g[2] + g[3])
        else:
            m = k - 3
            acc = g[0] + g[m]
            for j in range(1, m, 2):
                acc = acc + 4.0 * g[j]
            for j in range(2, m, 2):
                acc = acc + 2.0 * g[j]
            out[k] = ((h / 3.0) * acc
                      + (3.0 * h / 8.0) * (g[m] + 3.0 * g[m + 1]
                                           + 3.0 * g[m + 2] + g[k]))
    return out


cdef void _solve_s(double complex[::1] phi, double complex[::1] s,
                   double[::1] om_n, double[::1] om_m,
                   double[::1] dl_n, double[::1] dl_m,
                   double[::1] gam_n, double[::1] gam_m,
                   double sqc1, double dt) noexcept nogil:
    """RK4 pass for ds/dt = -(i dl + gam) s + i sqc1 om phi along the slice."""
    cdef Py_ssize_t nt = phi.shape[0]
    cdef Py_ssize_t j
    cdef double complex sj = 0.0
    cdef double complex l0, lm, l1, g0, gm, g1, k1_, k2_, k3_, k4_, phim
    s[0] = 0.0
    for j in range(nt - 1):
        l0 = -1j * dl_n[j] - gam_n[j]
        lm = -1j * dl_m[j] - gam_m[j]
        l1 = -1j * dl_n[j + 1] - gam_n[j + 1]
        phim = 0.5 * (phi[j] + phi[j + 1])
        g0 = 1j * sqc1 * om_n[j] * phi[j]
        gm = 1j * sqc1 * om_m[j] * phim
        g1 = 1j * sqc1 * om_n[j + 1] * phi[j + 1]
        k1_ = l0 * sj + g0
        k2_ = lm * (sj + 0.5 * dt * k1_) + gm
        k3_ = lm * (sj + 0.5 * dt * k2_) + gm
        k4_ = l1 * (sj + dt * k3_) + g1
        sj = sj + (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_)
        s[j + 1] = sj


def oracle_march(f_in, om_nodes, om_mids, dl_nodes, dl_mids, gam_nodes,
                 gam_mids, double sqc1, double k_l, double dt, int n_zeta,
                 int store_every):
    """Depth march of the linearized system; see ``_purekern.oracle_march``."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] phi = np.ascontiguousarray(f_in, dtype=np.complex128).copy()
    cdef cnp.ndarray[double, ndim=1] om_n = np.ascontiguousarray(om_nodes, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] om_m = np.ascontiguousarray(om_mids, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] dl_n = np.ascontiguousarray(dl_nodes, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] dl_m = np.ascontiguousarray(dl_mids, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] ga_n = np.ascontiguousarray(gam_nodes, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] ga_m = np.ascontiguousarray(gam_mids, dtype=np.float64)
    cdef Py_ssize_t nt = phi.shape[0]
    cdef double dz = 1.0 / n_zeta
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] s_curr = np.empty(nt, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] s2 = np.empty(nt, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] phi_half = np.empty(nt, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] s_end = np.empty(n_zeta + 1, dtype=np.complex128)
    stored_idx = [0]
    phi_store = [phi.copy()]
    cdef Py_ssize_t m, j, idx
    _solve_s(phi, s_curr, om_n, om_m, dl_n, dl_m, ga_n, ga_m, sqc1, dt)
    s_store = [s_curr.copy()]
    s_end[0] = s_curr[nt - 1]
    for m in range(n_zeta):
        for j in range(nt):
            phi_half[j] = phi[j] + (0.5 * dz) * (1j * sqc1 * om_n[j] * s_curr[j]
                                                 - k_l * phi[j])
        _solve_s(phi_half, s2, om_n, om_m, dl_n, dl_m, ga_n, ga_m, sqc1, dt)
        for j in range(nt):
            phi[j] = phi[j] + dz * (1j * sqc1 * om_n[j] * s2[j]
                                    - k_l * phi_half[j])
        _solve_s(phi, s_curr, om_n, om_m, dl_n, dl_m, ga_n, ga_m, sqc1, dt)
        idx = m + 1
        s_end[idx] = s_curr[nt - 1]
        if idx % store_every == 0 or idx == n_zeta:
            stored_idx.append(idx)
            phi_store.append(phi.copy())
            s_store.append(s_curr.copy())
    return (np.asarray(stored_idx, dtype=np.intp), np.asarray(phi_store),
            np.asarray(s_store), s_end)
