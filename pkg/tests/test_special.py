import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeropi import (bessel_j0, bessel_j1, bessel_j2, integrate,
                    integrate_samples, kernel_k1, kernel_retrieval)
from zeropi.special import simpson_prefix

# high-precision reference values (40-digit arbitrary-precision evaluation),
# sampled away from zeros so relative comparison is meaningful
J_REFERENCE = {
    0: [(0.5, 0.9384698072408129042284), (1.0, 0.7651976865579665514497),
        (2.0, 0.2238907791412356680518), (3.0, -0.2600519549019334376242),
        (5.0, -0.1775967713143383043474), (7.5, 0.266339657880378396866),
        (10.0, -0.2459357644513483351978), (12.0, 0.04768931079683353662381),
        (20.0, 0.1670246643405831547273), (25.0, 0.0962667832759581161735),
        (60.0, -0.09147180408906186953148), (100.0, 0.01998585030422312242423),
        (200.0, -0.01543743993056509159192)],
    1: [(0.5, 0.242268457674873886384), (1.0, 0.4400505857449335159597),
        (2.0, 0.5767248077568733872024), (3.0, 0.3390589585259364589255),
        (5.0, -0.3275791375914652220377), (7.5, 0.1352484275797055051822),
        (12.0, -0.2234471044906276123677), (15.0, 0.2051040386135227611471),
        (20.0, 0.06683312417585004557899), (25.0, -0.1253502495802899046518),
        (40.0, 0.1260383180375849992056), (100.0, -0.07714535201411215803269),
        (150.0, -0.06514516365772736030458), (200.0, -0.05430453818237822271067)],
    2: [(0.5, 0.03060402345868264130741), (1.0, 0.1149034849319004804696),
        (2.0, 0.3528340286156377191506), (3.0, 0.4860912605858910769078),
        (7.5, -0.2302734105257902621508), (10.0, 0.2546303136851206225317),
        (12.0, -0.08493049487860480535176), (15.0, 0.04157167797525047472015),
        (20.0, -0.1603413519229981501694), (25.0, -0.1062948032423813085456),
        (60.0, 0.09302508354766741346044), (100.0, -0.02152875734450536558488),
        (200.0, 0.01489439454874130936482)],
}

J1_FIRST_ZERO = 3.8317059702075123


@pytest.mark.parametrize("nu,fn", [(0, bessel_j0), (1, bessel_j1),
                                   (2, bessel_j2)])
def test_bessel_reference_values(nu, fn):
    for x, ref in J_REFERENCE[nu]:
        assert fn(x) == pytest.approx(ref, rel=1e-12), f"J{nu}({x})"


def test_bessel_limits_and_domain():
    assert bessel_j0(0.0) == 1.0
    assert bessel_j1(0.0) == 0.0
    assert bessel_j2(0.0) == 0.0
    for fn in (bessel_j0, bessel_j1, bessel_j2):
        with pytest.raises(ValueError):
            fn(-1.0)
        with pytest.raises(ValueError):
            fn(math.nan)


def test_j1_first_zero():
    assert abs(bessel_j1(J1_FIRST_ZERO)) < 1e-9
    assert abs(kernel_k1(J1_FIRST_ZERO)) < 1e-9


def test_against_scipy_sweep():
    scipy_special = pytest.importorskip("scipy.special")
    x = np.linspace(1e-3, 200.0, 4001)
    for nu, fn in ((0, bessel_j0), (1, bessel_j1), (2, bessel_j2)):
        ours = np.array([fn(v) for v in x])
        ref = scipy_special.jv(nu, x)
        assert np.abs(ours - ref).max() < 5e-13


def test_recurrence_residual_sweep():
    # 2 J1(x)/x - J0(x) - J2(x) == 0; computed from three independent series
    x = np.logspace(-3, 2, 10000)
    res = np.array([2.0 * bessel_j1(v) / v - bessel_j0(v) - bessel_j2(v)
                    for v in x])
    assert np.abs(res).max() < 1e-11


def test_kernel_k1_small_argument():
    assert kernel_k1(0.0) == 0.5
    x = 1e-4
    assert kernel_k1(x) == pytest.approx(0.5 * (1 - x * x / 8.0), abs=1e-14)
    # series branch agrees with the J1(x)/x route at the seam
    x = 0.999e-3
    assert kernel_k1(x) == pytest.approx(bessel_j1(x) / x, abs=1e-14)


def test_kernel_k1_monotone_on_first_lobe():
    x = np.linspace(0.0, J1_FIRST_ZERO, 500)
    vals = np.array([kernel_k1(v) for v in x])
    assert np.all(np.diff(vals) < 0)


def test_retrieval_kernel_limit_and_identity():
    assert kernel_retrieval(0.0) == 1.0
    for x in (0.5, 2.0, 7.0):
        assert kernel_retrieval(x) == pytest.approx(bessel_j0(x), abs=1e-11)
    assert kernel_retrieval(3.8317) == pytest.approx(
        -bessel_j2(3.8317) + 2 * bessel_j1(3.8317) / 3.8317, abs=1e-15)
    # at the J1 zero the retrieval kernel reduces to -J2
    assert kernel_retrieval(J1_FIRST_ZERO) == pytest.approx(
        -bessel_j2(J1_FIRST_ZERO), abs=1e-9)


def test_retrieval_identity_sweep():
    x = np.logspace(-3, 2, 10000)
    res = np.array([kernel_retrieval(v) - bessel_j0(v) for v in x])
    assert np.abs(res).max() < 1e-11


def test_integrate_polynomial():
    r = integrate(lambda x: x * x, 0.0, 1.0, tol=1e-12)
    assert r.converged
    assert r.value == pytest.approx(1.0 / 3.0, abs=1e-10)


def test_integrate_zero_and_reversed():
    r = integrate(lambda x: np.zeros_like(x), 0.0, 5.0)
    assert r.value == 0.0 and r.converged
    fwd = integrate(lambda x: np.exp(-x * x), -1.0, 2.0, tol=1e-9)
    rev = integrate(lambda x: np.exp(-x * x), 2.0, -1.0, tol=1e-9)
    assert rev.value == pytest.approx(-fwd.value, rel=1e-12)


def test_integrate_kernel_self_convergence():
    def f(x):
        return np.array([kernel_k1(v) for v in np.atleast_1d(x)])

    coarse = integrate(f, 0.0, 20.0, tol=1e-6)
    fine = integrate(f, 0.0, 20.0, tol=1e-8)
    assert coarse.converged and fine.converged
    assert coarse.value == pytest.approx(fine.value, rel=1e-6)
    # analytic cross-check: 2b * int K1(2 sqrt(bs)) ds = 1 - J0(2 sqrt(bu))
    closed = (1.0 - bessel_j0(20.0)) / 2.0

    def g(s):
        return np.array([kernel_k1(2.0 * math.sqrt(v))
                         for v in np.atleast_1d(s)])

    r = integrate(g, 0.0, 100.0, tol=1e-9)
    assert r.value == pytest.approx(closed, rel=1e-7)


@settings(max_examples=30, deadline=None)
@given(a=st.floats(-3.0, 3.0), b=st.floats(-3.0, 3.0))
def test_integrate_linearity(a, b):
    f1 = lambda x: np.sin(x)
    f2 = lambda x: np.exp(-x * x)
    combo = integrate(lambda x: a * f1(x) + b * f2(x), 0.0, 2.0, tol=1e-10)
    parts = (a * integrate(f1, 0.0, 2.0, tol=1e-10).value
             + b * integrate(f2, 0.0, 2.0, tol=1e-10).value)
    assert combo.value == pytest.approx(parts, abs=5e-9)


def test_integrate_reports_nonconvergence():
    # needle far below the initial sampling and a hard refinement cap
    r = integrate(lambda x: np.exp(-(x / 1e-5) ** 2), -1.0, 1.0,
                  tol=1e-12, n0=4, max_doublings=2)
    assert not r.converged


def test_integrate_samples_matches_simpson():
    x = np.linspace(0.0, 1.0, 101)
    assert integrate_samples(x ** 3, x[1] - x[0]) == pytest.approx(
        0.25, abs=1e-10)
    x = np.linspace(0.0, 1.0, 102)  # odd interval count -> 3/8 tail
    assert integrate_samples(x ** 3, x[1] - x[0]) == pytest.approx(
        0.25, abs=1e-10)


def test_simpson_prefix_consistent_with_full_rule():
    x = np.linspace(0.0, 3.0, 97)
    y = np.exp(-x) * np.cos(2 * x)
    run = simpson_prefix(y, x[1] - x[0])
    assert run[0] == 0.0
    for k in (1, 2, 3, 50, 95, 96):
        direct = integrate_samples(y[:k + 1], x[1] - x[0])
        assert run[k] == pytest.approx(direct, abs=1e-12)
