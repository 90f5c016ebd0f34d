"""Reference-grade Bessel functions, regularized kernels and quadrature.

These scalar implementations are the accuracy anchor of the package: power
series summed in compensated double-double arithmetic below the crossover
point, Hankel asymptotic expansions truncated at the minimal term above it.
They are deliberately independent of the vectorized kernels used in the hot
propagation loops (see ``backend``), so the two routes can be checked against
each other.

The regularized kernels are
    kernel_k1(x)        = J1(x)/x            (limit 1/2 at x = 0)
    kernel_retrieval(x) = 2*J1(x)/x - J2(x)  (limit 1 at x = 0)
and the Bessel recurrence makes the retrieval kernel equal to J0; that
identity is *checked*, never assumed, because J2 is summed from its own
series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NumericalError

__all__ = [
    "bessel_j0",
    "bessel_j1",
    "bessel_j2",
    "kernel_k1",
    "kernel_retrieval",
    "integrate",
    "integrate_samples",
    "simpson_prefix",
    "QuadResult",
]

_SERIES_CUTOFF = 20.0
_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant


# ----------------------------------------------------------------------
# double-double primitives (error-free transforms)
# ----------------------------------------------------------------------

def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _split(a: float) -> tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def _dd_add(ahi: float, alo: float, bhi: float, blo: float):
    s, e = _two_sum(ahi, bhi)
    e += alo + blo
    hi, lo = _two_sum(s, e)
    return hi, lo


def _dd_mul(ahi: float, alo: float, bhi: float, blo: float):
    p, e = _two_prod(ahi, bhi)
    e += ahi * blo + alo * bhi
    hi, lo = _two_sum(p, e)
    return hi, lo


def _dd_div_d(ahi: float, alo: float, b: float):
    q1 = ahi / b
    p, e = _two_prod(q1, b)
    r = ((ahi - p) - e) + alo
    q2 = r / b
    hi, lo = _two_sum(q1, q2)
    return hi, lo


def _series_jn(nu: int, x: float) -> float:
    """Power series for J_nu, terms carried in double-double precision.

    Intermediate terms can exceed the result by many orders of magnitude
    (alternating-series cancellation); double-double term recurrence keeps
    the final relative error at the last-bit level for x <= 20.
    """
    if x == 0.0:
        return 1.0 if nu == 0 else 0.0
    half = x / 2.0
    # q = (x/2)^2 exactly as a double-double
    qhi, qlo = _two_prod(half, half)
    # t = (x/2)^nu / nu!
    thi, tlo = 1.0, 0.0
    for _ in range(nu):
        thi, tlo = _dd_mul(thi, tlo, half, 0.0)
    if nu == 2:
        thi, tlo = _dd_div_d(thi, tlo, 2.0)
    shi, slo = thi, tlo
    for k in range(1, 200):
        thi, tlo = _dd_mul(thi, tlo, qhi, qlo)
        thi, tlo = _dd_div_d(thi, tlo, -float(k * (k + nu)))
        shi, slo = _dd_add(shi, slo, thi, tlo)
        if abs(thi) < 1e-35 * (abs(shi) + 1e-300):
            break
    return shi + slo


def _hankel_jn(nu: int, x: float) -> float:
    """Large-argument asymptotic expansion, truncated at the minimal term."""
    mu = 4.0 * nu * nu
    p, q = 1.0, 0.0
    term = 1.0
    prev = math.inf
    for k in range(1, 60):
        term *= (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        mag = abs(term)
        if mag >= prev:  # divergence onset: stop at the minimal term
            break
        prev = mag
        r = k % 4
        if r == 1:
            q += term
        elif r == 2:
            p -= term
        elif r == 3:
            q -= term
        else:
            p += term
        if mag < 1e-18:
            break
    chi = x - (2 * nu + 1) * math.pi / 4.0
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi)
                                             - q * math.sin(chi))


def _besselj(nu: int, x: float) -> float:
    if math.isnan(x) or x < 0:
        raise ValueError(f"bessel_j{nu} requires x >= 0, got {x!r}")
    if x <= _SERIES_CUTOFF:
        return _series_jn(nu, x)
    return _hankel_jn(nu, x)


def bessel_j0(x: float) -> float:
    """Bessel function of the first kind, order 0, for x >= 0."""
    return _besselj(0, x)


def bessel_j1(x: float) -> float:
    """Bessel function of the first kind, order 1, for x >= 0."""
    return _besselj(1, x)


def bessel_j2(x: float) -> float:
    """Bessel function of the first kind, order 2, for x >= 0."""
    return _besselj(2, x)


def kernel_k1(x: float) -> float:
    """J1(x)/x with the removable singularity filled in; K1(0) = 1/2.

    Below 1e-3 the even power series 1/2 - x^2/16 + x^4/384 is exact to
    better than 1e-14.
    """
    if math.isnan(x) or x < 0:
        raise ValueError(f"kernel_k1 requires x >= 0, got {x!r}")
    if x < 1e-3:
        x2 = x * x
        return 0.5 - x2 / 16.0 + x2 * x2 / 384.0
    return bessel_j1(x) / x


def kernel_retrieval(x: float) -> float:
    """2*J1(x)/x - J2(x); limit 1 at x = 0."""
    return 2.0 * kernel_k1(x) - bessel_j2(x)


# ----------------------------------------------------------------------
# quadrature
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class QuadResult:
    """Integral value with a Richardson error estimate."""

    value: float
    error: float
    n_intervals: int
    converged: bool


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-6,
    n0: int = 16,
    max_doublings: int = 18,
) -> QuadResult:
    """Composite Simpson on a uniform grid with doubling refinement.

    ``f`` is evaluated on whole arrays. The resolution doubles until the
    Richardson estimate |S_2n - S_n|/15 drops below ``tol`` relative to the
    integral (or below tol absolutely for near-zero integrals).  On
    non-convergence the best value is returned with ``converged=False``.
    """
    if b == a:
        return QuadResult(0.0, 0.0, 0, True)
    if b < a:
        r = integrate(f, b, a, tol=tol, n0=n0, max_doublings=max_doublings)
        return QuadResult(-r.value, r.error, r.n_intervals, r.converged)

    n = max(2, n0 + n0 % 2)
    x = np.linspace(a, b, n + 1)
    y = np.asarray(f(x), dtype=float)
    s = s_prev = _simpson_even(y, (b - a) / n)
    err = math.inf
    for _ in range(max(1, max_doublings)):
        n *= 2
        x = np.linspace(a, b, n + 1)
        y = np.asarray(f(x), dtype=float)
        s = _simpson_even(y, (b - a) / n)
        err = abs(s - s_prev) / 15.0
        if err <= tol * max(abs(s), 1e-15):
            return QuadResult(s + (s - s_prev) / 15.0, err, n, True)
        s_prev = s
    return QuadResult(s, err, n, False)


def _simpson_even(y: np.ndarray, h: float) -> float:
    """Simpson rule for an even number of intervals."""
    return (h / 3.0) * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum()
                        + 2.0 * y[2:-1:2].sum())


def integrate_samples(y: np.ndarray, dx: float) -> float | complex:
    """Composite Simpson over fixed samples on a uniform grid.

    An odd interval count is handled with a closing Newton-Cotes 3/8 block,
    keeping the rule fourth-order throughout.
    """
    y = np.asarray(y)
    n = y.shape[0] - 1
    if n < 1:
        return 0.0 * y[..., 0]
    if n == 1:
        return 0.5 * dx * (y[0] + y[1])
    if n % 2 == 0:
        return (dx / 3.0) * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum()
                             + 2.0 * y[2:-1:2].sum())
    head = integrate_samples(y[:-3], dx) if n > 3 else 0.0 * y[0]
    tail = (3.0 * dx / 8.0) * (y[-4] + 3.0 * y[-3] + 3.0 * y[-2] + y[-1])
    return head + tail


def simpson_prefix(y: np.ndarray, dx: float) -> np.ndarray:
    """Running integrals int_{x0}^{xk} y dx for every k, Simpson quality.

    Entry 0 is zero; entry 1 uses the trapezoid rule; even prefixes use
    composite Simpson and odd ones close with a 3/8 block.  This mirrors the
    prefix weights used inside the compiled Volterra kernels.
    """
    y = np.asarray(y)
    n = y.shape[0]
    out = np.zeros(n, dtype=y.dtype)
    if n < 2:
        return out
    out[1] = 0.5 * dx * (y[0] + y[1])
    # cumulative Simpson over even prefixes
    if n > 2:
        pair = (dx / 3.0) * (y[:-2:2] + 4.0 * y[1:-1:2] + y[2::2])
        out[2::2] = np.cumsum(pair)
        if n > 3:
            out[3::2] = out[:-3:2] + (3.0 * dx / 8.0) * (
                y[:-3:2] + 3.0 * y[1:-2:2] + 3.0 * y[2:-1:2] + y[3::2])
    return out


def require_finite(arr: np.ndarray, what: str) -> None:
    """Raise NumericalError naming the first non-finite entry."""
    bad = ~np.isfinite(arr)
    if bad.any():
        idx = tuple(int(i) for i in np.argwhere(bad)[0])
        raise NumericalError(f"{what}: non-finite value at index {idx}")
