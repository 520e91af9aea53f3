"""Modified Bessel functions of the second kind, orders 0 and 1.

Two regimes, switching at x = 2:

* ``x <= 2``: ascending series with the ``-ln(x/2) I_n(x)`` structure.
* ``x > 2``: Steed's continued fraction for K_0 and K_1 together
  (Temme's CF2), which converges quickly once x is not small.

Both paths are vectorised over numpy arrays.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

EULER_GAMMA = 0.57721566490153286061
CROSSOVER = 2.0
UNDERFLOW_X = 700.0

_EPS = np.finfo(float).eps
_SERIES_TERMS = 30
_CF_MAXITER = 400


@dataclass(frozen=True)
class BesselEval:
    x: float
    value: float
    est_error: float


def _check_domain(x: np.ndarray) -> None:
    if np.any(~(x > 0)):
        raise ValueError("modified Bessel K is only defined here for x > 0")
    if np.any(x > UNDERFLOW_X):
        warnings.warn(f"K_n(x) underflows to zero for x > {UNDERFLOW_X:g}", RuntimeWarning,
                      stacklevel=3)


def _series(x: np.ndarray):
    """Series values of (K0, K1) and their relative error estimates for x <= 2."""
    q = 0.25 * x * x
    log_half = np.log(0.5 * x)
    term0 = np.ones_like(x)        # (x^2/4)^k / (k!)^2
    term1 = np.ones_like(x)        # (x^2/4)^k / (k! (k+1)!)
    i0 = np.zeros_like(x)
    i1 = np.zeros_like(x)
    s0 = np.zeros_like(x)          # sum term0 * H_k
    s1 = np.zeros_like(x)          # sum term1 * (psi(k+1) + psi(k+2))
    abs0 = np.zeros_like(x)
    harmonic = 0.0
    for k in range(_SERIES_TERMS):
        if k > 0:
            harmonic += 1.0 / k
            term0 = term0 * q / (k * k)
            term1 = term1 * q / (k * (k + 1))
        i0 += term0
        i1 += term1
        s0 += term0 * harmonic
        digamma_sum = -2.0 * EULER_GAMMA + 2.0 * harmonic + 1.0 / (k + 1)
        s1 += term1 * digamma_sum
        abs0 += term0 * (abs(harmonic) + abs(log_half + EULER_GAMMA))
    i1 *= 0.5 * x
    k0 = -(log_half + EULER_GAMMA) * i0 + s0
    k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1
    # truncation is negligible after 30 terms for x <= 2; rounding dominates
    err0 = 4 * _EPS * (abs0 + np.abs(k0)) / np.abs(k0)
    err1 = 4 * _EPS * (1.0 / x + np.abs(log_half * i1) + 0.25 * x * np.abs(s1)) / np.abs(k1)
    return k0, k1, err0, err1


def _continued_fraction(x: np.ndarray):
    """Steed's algorithm for (K0, K1) with nu = 0, valid for x > 2."""
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    a1 = 0.25
    q = np.full_like(x, a1)
    c = np.full_like(x, a1)
    a = -a1
    s = 1.0 + q * delh
    last = np.ones_like(x)
    done = np.zeros(x.shape, dtype=bool)
    for i in range(1, _CF_MAXITER + 1):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        step_h = np.where(done, 0.0, delh)
        h = h + step_h
        dels = q * delh
        step_s = np.where(done, 0.0, dels)
        s = s + step_s
        last = np.where(done, last, np.abs(dels / s))
        done |= last < _EPS
        if done.all():
            break
    else:
        raise ArithmeticError("continued fraction for K0/K1 did not converge")
    h = a1 * h
    k0 = np.sqrt(np.pi / (2.0 * x)) * np.exp(-x) / s
    k1 = k0 * (x + 0.5 - h) / x
    err = 8 * _EPS + last
    return k0, k1, err, err


def _evaluate(x):
    arr = np.asarray(x, dtype=float)
    _check_domain(arr)
    flat = np.atleast_1d(arr).ravel()
    k0 = np.empty_like(flat)
    k1 = np.empty_like(flat)
    e0 = np.empty_like(flat)
    e1 = np.empty_like(flat)
    low = flat <= CROSSOVER
    if low.any():
        k0[low], k1[low], e0[low], e1[low] = _series(flat[low])
    if (~low).any():
        with np.errstate(under="ignore"):
            k0[~low], k1[~low], e0[~low], e1[~low] = _continued_fraction(flat[~low])
    shape = arr.shape
    return k0.reshape(shape), k1.reshape(shape), e0.reshape(shape), e1.reshape(shape)


def _unwrap(value: np.ndarray):
    return float(value) if value.ndim == 0 else value


def bessel_k0(x):
    """K_0(x) for x > 0 (scalar or array)."""
    return _unwrap(_evaluate(x)[0])


def bessel_k1(x):
    """K_1(x) for x > 0 (scalar or array)."""
    return _unwrap(_evaluate(x)[1])


def evaluate(order: int, x: float) -> BesselEval:
    """Evaluate K_0 or K_1 at a scalar point together with an error estimate."""
    if order not in (0, 1):
        raise ValueError("only orders 0 and 1 are implemented")
    k0, k1, e0, e1 = _evaluate(float(x))
    if order == 0:
        return BesselEval(float(x), float(k0), float(e0))
    return BesselEval(float(x), float(k1), float(e1))


def spectrum_peak_argument(tol: float = 1e-14) -> float:
    """Root of K0(x) = x K1(x): the maximiser of x^2 K0(x)^2, by bisection."""
    lo, hi = 0.1, 2.0
    f = lambda z: bessel_k0(z) - z * bessel_k1(z)
    flo = f(lo)
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)
