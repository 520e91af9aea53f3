import math
import warnings

import numpy as np
import pytest

from conftest import approx
from scipy import special
from scipy.integrate import quad

from bohmrad.specfun import (CROSSOVER, EULER_GAMMA, bessel_k0, bessel_k1, evaluate,
                             spectrum_peak_argument)


def k_integral(order, x):
    # K_nu(x) = int_0^inf exp(-x cosh u) cosh(nu u) du, cut where the integrand underflows
    top = math.acosh(745.0 / x + 1.0)
    return quad(lambda u: math.exp(-x * math.cosh(u)) * math.cosh(order * u), 0.0, top,
                epsabs=0.0, epsrel=1e-13, limit=400)[0]


GRID = np.geomspace(1e-6, 50, 400)


@pytest.mark.parametrize("ours, ref", [(bessel_k0, special.k0), (bessel_k1, special.k1)])
def test_matches_scipy_on_contract_range(ours, ref):
    err = np.abs(ours(GRID) / ref(GRID) - 1)
    assert err.max() <= 1e-10


@pytest.mark.parametrize("x", [1e-6, 1e-3, 0.1, 0.5, 1.0, 1.9, 2.0, 2.1, 5.0, 20.0, 50.0])
@pytest.mark.parametrize("order", [0, 1])
def test_matches_integral_representation(order, x):
    fn = bessel_k0 if order == 0 else bessel_k1
    assert fn(x) == approx(k_integral(order, x), rel=1e-10)


def test_k0_at_one():
    assert bessel_k0(1.0) == approx(0.4210244382407083, rel=1e-13)


def test_small_argument_limits():
    for x in (1e-5, 1e-7):
        assert abs(bessel_k0(x) + math.log(x / 2) + EULER_GAMMA) < 10 * x * x * abs(math.log(x))
        assert x * bessel_k1(x) == approx(1.0, abs=10 * x * x * abs(math.log(x)))


def test_large_argument_asymptotic():
    x = 30.0
    assert bessel_k0(x) * math.sqrt(2 * x / math.pi) * math.exp(x) == approx(1.0, rel=1e-2)


def test_crossover_continuity():
    below, above = np.nextafter(CROSSOVER, 0), np.nextafter(CROSSOVER, 3)
    assert bessel_k0(above) / bessel_k0(below) - 1 == approx(0.0, abs=1e-10)
    assert bessel_k1(above) / bessel_k1(below) - 1 == approx(0.0, abs=1e-10)


def test_positive_decreasing_log_convex():
    x = np.linspace(1e-3, 50, 1000)
    k0 = bessel_k0(x)
    assert np.all(k0 > 0)
    assert np.all(np.diff(k0) < 0)
    assert np.all(np.diff(np.log(k0), 2) > 0)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_derivative_identity(x):
    h = 1e-5
    dk0 = (bessel_k0(x + h) - bessel_k0(x - h)) / (2 * h)
    assert abs(bessel_k1(x) + dk0) < 1e-6


def test_derivative_identity_random_points():
    rng = np.random.default_rng(11)
    x = rng.uniform(0.05, 30, 20)
    h = 1e-5 * x
    dk0 = (bessel_k0(x + h) - bessel_k0(x - h)) / (2 * h)
    assert np.all(np.abs(bessel_k1(x) + dk0) < 1e-6)


def test_error_estimate_contract():
    for x in GRID[::20]:
        for order in (0, 1):
            ev = evaluate(order, x)
            assert ev.value > 0
            assert ev.est_error <= 1e-10


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan")])
def test_domain_error(bad):
    with pytest.raises(ValueError):
        bessel_k0(bad)
    with pytest.raises(ValueError):
        bessel_k1(np.array([1.0, bad]))


def test_underflow_flagged():
    with pytest.warns(RuntimeWarning):
        assert bessel_k0(750.0) == 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bessel_k0(699.0)


def test_peak_root():
    root = spectrum_peak_argument()
    assert bessel_k0(root) == approx(root * bessel_k1(root), rel=1e-12)
    # independent oracle: scipy root of the same equation
    from scipy.optimize import brentq
    ref = brentq(lambda z: special.k0(z) - z * special.k1(z), 0.1, 2.0, xtol=1e-15)
    assert root == approx(ref, rel=1e-12)
    assert abs(root / 0.6 - 1) < 0.1
