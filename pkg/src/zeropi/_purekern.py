"""Pure-numpy compute kernels (fallback when the compiled extension is absent).

Exposes the same surface as ``_fastkern``: vectorized Bessel kernels, the
prefix-Simpson Volterra evaluation and the depth-marching integrator.  The
fast Bessel evaluations here trade the last few digits for speed (absolute
error below ~1e-10); the accuracy-anchored scalar routines live in
``zeropi.special``.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

_SPLIT = 12.0          # series/asymptotic crossover for the fast kernels
_SERIES_TERMS = 34
_HANKEL_TERMS = 18
_K1_SMALL = 1e-3

KERNEL_K1 = 1
KERNEL_RETRIEVAL = 2


def _series(nu: int, x: np.ndarray) -> np.ndarray:
    q = (0.5 * x) ** 2
    if nu == 0:
        t = np.ones_like(x)
    elif nu == 1:
        t = 0.5 * x
    else:
        t = 0.5 * (0.5 * x) ** 2
    s = t.copy()
    for k in range(1, _SERIES_TERMS + 1):
        t = t * (-q) / (k * (k + nu))
        s = s + t
    return s


def _hankel(nu: int, x: np.ndarray) -> np.ndarray:
    mu = 4.0 * nu * nu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    t = np.ones_like(x)
    for k in range(1, _HANKEL_TERMS + 1):
        t = t * ((mu - (2 * k - 1) ** 2) / (8.0 * k)) / x
        r = k % 4
        if r == 1:
            q = q + t
        elif r == 2:
            p = p - t
        elif r == 3:
            q = q - t
        else:
            p = p + t
    chi = x - (2 * nu + 1) * (np.pi / 4.0)
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def _jn_arr(nu: int, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    lo = x <= _SPLIT
    if lo.any():
        out[lo] = _series(nu, x[lo])
    hi = ~lo
    if hi.any():
        out[hi] = _hankel(nu, x[hi])
    return out


def j0_arr(x):
    return _jn_arr(0, x)


def j1_arr(x):
    return _jn_arr(1, x)


def j2_arr(x):
    return _jn_arr(2, x)


def k1_arr(x):
    """J1(x)/x with a series branch below 1e-3 (value 1/2 at 0)."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < _K1_SMALL
    if small.any():
        x2 = x[small] ** 2
        out[small] = 0.5 - x2 / 16.0 + x2 * x2 / 384.0
    big = ~small
    if big.any():
        xb = x[big]
        out[big] = _jn_arr(1, xb) / xb
    return out


def kr_arr(x):
    """Retrieval kernel 2*J1(x)/x - J2(x)."""
    return 2.0 * k1_arr(x) - j2_arr(x)


def _kernel_arr(kernel: int, x: np.ndarray) -> np.ndarray:
    if kernel == KERNEL_K1:
        return k1_arr(x)
    if kernel == KERNEL_RETRIEVAL:
        return kr_arr(x)
    raise ValueError(f"unknown kernel id {kernel}")


def volterra_prefix(tau, w, fw, dph, c1z, gamma, kernel):
    """Prefix integrals I_k = int_{tau_0}^{tau_k} fw(t') K(psi(k, t'))
    exp(-i(D_k - D')) exp(-gamma (tau_k - t')) dt' for every k.

    tau, w, dph are node arrays on a uniform grid (dph may be None when the
    phase factor is identically one); fw is the complex product of the input
    profile and the control envelope; psi = 2 sqrt(c1z (w_k - w_j)).  Prefix
    weights are Simpson with a 3/8 closing block on odd prefixes.
    """
    tau = np.asarray(tau, dtype=float)
    w = np.asarray(w, dtype=float)
    fw = np.asarray(fw, dtype=complex)
    n = tau.shape[0]
    out = np.zeros(n, dtype=complex)
    if n < 2 or c1z < 0:
        return out
    h = tau[1] - tau[0]
    scale = 2.0 * np.sqrt(c1z)
    # alternating composite-Simpson base weights 1,4,2,4,2,...
    base = np.empty(n)
    base[0] = 1.0
    base[1::2] = 4.0
    base[2::2] = 2.0
    use_phase = dph is not None
    if use_phase:
        eip = np.exp(1j * np.asarray(dph, dtype=float))
    for k in range(1, n):
        dw = w[k] - w[: k + 1]
        np.maximum(dw, 0.0, out=dw)
        g = fw[: k + 1] * _kernel_arr(kernel, scale * np.sqrt(dw))
        if use_phase:
            g = g * (np.conj(eip[k]) * eip[: k + 1])
        if gamma > 0.0:
            g = g * np.exp(-gamma * (tau[k] - tau[: k + 1]))
        if k == 1:
            out[k] = 0.5 * h * (g[0] + g[1])
        elif k % 2 == 0:
            out[k] = (h / 3.0) * (np.dot(base[:k], g[:k]) + g[k])
        elif k == 3:
            out[k] = (3.0 * h / 8.0) * (g[0] + 3.0 * g[1] + 3.0 * g[2] + g[3])
        else:
            m = k - 3
            out[k] = ((h / 3.0) * (np.dot(base[:m], g[:m]) + g[m])
                      + (3.0 * h / 8.0) * (g[m] + 3.0 * g[m + 1]
                                           + 3.0 * g[m + 2] + g[k]))
    return out


def oracle_march(f_in, om_nodes, om_mids, dl_nodes, dl_mids, gam_nodes,
                 gam_mids, sqc1, k_l, dt, n_zeta, store_every):
    """March the linearized two-field system from zeta=0 to 1.

        dphi/dzeta = i sqc1 om(t) s - k_l phi
        ds/dt      = -(i dl(t) + gam(t)) s + i sqc1 om(t) phi

    The time integration is classical RK4 per depth slice (the field at
    half-steps is averaged, the control sampled exactly at midpoints); depth
    coupling is the explicit midpoint rule.  Returns the stored slice
    indices, phi and s on stored slices, and s at the window end for every
    slice (the residual excitation bookkeeping).
    """
    f_in = np.asarray(f_in, dtype=complex)
    nt = f_in.shape[0]
    lam_n = -1j * np.asarray(dl_nodes, float) - np.asarray(gam_nodes, float)
    lam_m = -1j * np.asarray(dl_mids, float) - np.asarray(gam_mids, float)
    om_n = np.asarray(om_nodes, dtype=float)
    om_m = np.asarray(om_mids, dtype=float)
    l0, l1 = lam_n[:-1], lam_n[1:]
    # state-propagation coefficients of the linear RK4 step: s+ = A s + B
    c2 = lam_m * (1.0 + 0.5 * dt * l0)
    c3 = lam_m * (1.0 + 0.5 * dt * c2)
    c4 = l1 * (1.0 + dt * c3)
    a_coef = 1.0 + (dt / 6.0) * (l0 + 2.0 * c2 + 2.0 * c3 + c4)
    p_run = np.cumprod(a_coef)

    def solve_s(phi):
        g_n = 1j * sqc1 * om_n * phi
        g_m = 1j * sqc1 * om_m * (0.5 * (phi[:-1] + phi[1:]))
        g0, g1 = g_n[:-1], g_n[1:]
        d2 = lam_m * (0.5 * dt) * g0 + g_m
        d3 = lam_m * (0.5 * dt) * d2 + g_m
        d4 = l1 * dt * d3 + g1
        b_coef = (dt / 6.0) * (g0 + 2.0 * d2 + 2.0 * d3 + d4)
        s = np.empty(nt, dtype=complex)
        s[0] = 0.0
        s[1:] = p_run * np.cumsum(b_coef / p_run)
        return s

    dz = 1.0 / n_zeta
    stored_idx = [0]
    phi = f_in.copy()
    s_curr = solve_s(phi)
    phi_store = [phi.copy()]
    s_store = [s_curr]
    s_end = np.empty(n_zeta + 1, dtype=complex)
    s_end[0] = s_curr[-1]
    for m in range(n_zeta):
        phi_half = phi + (0.5 * dz) * (1j * sqc1 * om_n * s_curr - k_l * phi)
        s2 = solve_s(phi_half)
        phi = phi + dz * (1j * sqc1 * om_n * s2 - k_l * phi_half)
        s_curr = solve_s(phi)
        idx = m + 1
        s_end[idx] = s_curr[-1]
        if idx % store_every == 0 or idx == n_zeta:
            stored_idx.append(idx)
            phi_store.append(phi.copy())
            s_store.append(s_curr)
    return (np.asarray(stored_idx, dtype=np.intp),
            np.asarray(phi_store), np.asarray(s_store), s_end)
