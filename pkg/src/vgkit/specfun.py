"""Special-function kernel used by the distribution, estimation and pricing layers.

Everything here is a thin, numerically hardened layer over ``scipy.special``:
modified Bessel functions of the second kind K_nu (linear and log scale),
the modified Struve function L_nu, incomplete gamma, the Gaussian
hypergeometric function 2F1 and the polynomial confluent function
U(-m, b, x).  Log-scale Bessel evaluation never overflows or underflows on
the supported envelope, which is what the heavy-tail formulas downstream
rely on.
"""

from __future__ import annotations

import enum
import math

import numpy as np
from scipy import special

from ._fastbessel import log_kve as _fast_log_kve


class EvalScale(enum.Enum):
    """Evaluation scale for Bessel routines: plain value or its natural log."""

    LINEAR = "linear"
    LOG = "log"


class NonConvergenceError(RuntimeError):
    """A series or iteration failed to reach its tolerance."""


def _as_float_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _log_kve(nu, x):
    """log(K_nu(x) * e^x), vectorized, finite on the whole positive axis."""
    return _fast_log_kve(np.asarray(nu, dtype=float), np.asarray(x, dtype=float))


def bessel_k(nu, x, scale: EvalScale = EvalScale.LINEAR):
    """Modified Bessel function of the second kind K_nu(x), nu real, x > 0.

    Symmetric in the order (K_nu = K_{-nu}).  ``scale=EvalScale.LOG`` returns
    log K_nu(x) and stays finite where the linear value would under- or
    overflow.  Accuracy is close to machine level for 1e-6 <= x <= 700 and
    |nu| <= 60; outside that envelope the result is best effort.
    """
    x_arr, scalar = _as_float_array(x)
    nu_arr = np.asarray(nu, dtype=float)
    if not np.all(np.isfinite(nu_arr)):
        raise ValueError("bessel_k: order must be finite")
    if not np.all(np.isfinite(x_arr)) or np.any(x_arr <= 0.0):
        raise ValueError("bessel_k: argument must be positive and finite")
    log_val = _log_kve(nu_arr, x_arr) - x_arr
    if scale is EvalScale.LOG:
        return float(log_val) if scalar else log_val
    out = np.exp(log_val)
    return float(out) if scalar else out


def bessel_k_half_integer(m: int, x):
    """Closed form for K_{m+1/2}(x): sqrt(pi/2x) e^{-x} * finite sum, m >= 0."""
    if m != int(m) or m < 0:
        raise ValueError("bessel_k_half_integer: m must be a nonnegative integer")
    m = int(m)
    x_arr, scalar = _as_float_array(x)
    if np.any(x_arr <= 0.0) or not np.all(np.isfinite(x_arr)):
        raise ValueError("bessel_k_half_integer: argument must be positive and finite")
    acc = np.zeros_like(x_arr)
    for j in range(m + 1):
        coef = math.factorial(m + j) / (math.factorial(m - j) * math.factorial(j))
        acc = acc + coef * (2.0 * x_arr) ** (-j)
    out = np.sqrt(0.5 * np.pi / x_arr) * np.exp(-x_arr) * acc
    return float(out) if scalar else out


def bessel_k_ratio(nu, x):
    """Ratio K_{nu-1}(x) / K_nu(x) for nu >= 1/2, evaluated via log differences.

    Lies in (0, 1) for nu > 1/2; the log-space route keeps it stable for
    arguments where both Bessel values over- or underflow.
    """
    x_arr, scalar = _as_float_array(x)
    nu = float(nu)
    if nu < 0.5:
        raise ValueError("bessel_k_ratio: requires nu >= 1/2")
    if np.any(x_arr <= 0.0) or not np.all(np.isfinite(x_arr)):
        raise ValueError("bessel_k_ratio: argument must be positive and finite")
    out = np.exp(_log_kve(nu - 1.0, x_arr) - _log_kve(nu, x_arr))
    return float(out) if scalar else out


def bessel_k_order_derivative(nu: float, x, h: float = 1e-5):
    """Central difference (K_{nu+h}(x) - K_{nu-h}(x)) / (2h) in the order."""
    if not 0.0 < h <= 1e-3:
        raise ValueError("bessel_k_order_derivative: need 0 < h <= 1e-3")
    x_arr, scalar = _as_float_array(x)
    if np.any(x_arr <= 0.0) or not np.all(np.isfinite(x_arr)):
        raise ValueError("bessel_k_order_derivative: argument must be positive and finite")
    out = (special.kve(abs(nu + h), x_arr) - special.kve(abs(nu - h), x_arr)) * np.exp(-x_arr) / (2.0 * h)
    return float(out) if scalar else out


def bessel_k_order_log_derivative(nu: float, x, h: float = 1e-5):
    """Approximation of (d/dnu) K_nu(x) / K_nu(x) that never over/underflows.

    Equals bessel_k_order_derivative(nu, x, h) / bessel_k(nu, x) up to O(h^2),
    but is computed from scaled Bessel values so it survives extreme
    arguments.  This is the quantity the ECM E-step consumes.
    """
    if not 0.0 < h <= 1e-3:
        raise ValueError("bessel_k_order_log_derivative: need 0 < h <= 1e-3")
    x_arr, scalar = _as_float_array(x)
    base = _log_kve(nu, x_arr)
    up = _log_kve(nu + h, x_arr)
    down = _log_kve(nu - h, x_arr)
    out = (np.exp(up - base) - np.exp(down - base)) / (2.0 * h)
    return float(out) if scalar else out


_STRUVE_MAX_TERMS = 10**6


def struve_l(nu: float, x):
    """Modified Struve function L_nu(x) by its ascending power series.

    Terms are accumulated until the running term falls below 1e-14 of the
    partial sum.  All terms are positive for nu > -3/2, so there is no
    cancellation; arguments in this package are moderate (x <= ~40).
    """
    x_arr, scalar = _as_float_array(x)
    nu = float(nu)
    if np.any(x_arr <= 0.0) or not np.all(np.isfinite(x_arr)):
        raise ValueError("struve_l: argument must be positive and finite")
    half = 0.5 * x_arr
    term = np.asarray(half ** (nu + 1.0) / (special.gamma(1.5) * special.gamma(nu + 1.5)), dtype=float)
    total = term.copy()
    q = half * half
    for k in range(_STRUVE_MAX_TERMS):
        term = term * q / ((k + 1.5) * (k + nu + 1.5))
        total = total + term
        if np.all(np.abs(term) <= 1e-14 * np.abs(total)):
            break
    else:
        raise NonConvergenceError("struve_l: series did not converge")
    return float(total) if scalar else total


def upper_incomplete_gamma(a: float, x):
    """Unnormalised upper incomplete gamma Gamma(a, x) = int_x^inf t^{a-1} e^{-t} dt."""
    if not a > 0.0:
        raise ValueError("upper_incomplete_gamma: requires a > 0")
    x_arr, scalar = _as_float_array(x)
    if np.any(x_arr < 0.0):
        raise ValueError("upper_incomplete_gamma: requires x >= 0")
    out = special.gammaincc(a, x_arr) * special.gamma(a)
    return float(out) if scalar else out


def gauss_2f1(a: float, b: float, c: float, z: float) -> float:
    """Gaussian hypergeometric function 2F1(a, b; c; z) for 0 <= z < 1."""
    if c <= 0.0 and c == int(c):
        raise ValueError("gauss_2f1: c must not be a nonpositive integer")
    if not 0.0 <= z < 1.0:
        raise ValueError("gauss_2f1: requires 0 <= z < 1")
    val = float(special.hyp2f1(a, b, c, z))
    if not math.isfinite(val):
        raise NonConvergenceError(f"gauss_2f1 failed for ({a}, {b}, {c}, {z})")
    return val


def hyp_u_poly(m: int, b: float, x: float) -> float:
    """Confluent hypergeometric U(-m, b, x) for integer m >= 0 (a polynomial).

    U(-m, b, x) = (-1)^m sum_{j=0}^m C(m, j) (b+j)_{m-j} (-x)^j with the
    Pochhammer convention (a)_0 = 1.
    """
    if m != int(m) or m < 0:
        raise ValueError("hyp_u_poly: m must be a nonnegative integer")
    m = int(m)
    if not (math.isfinite(b) and math.isfinite(x)):
        raise ValueError("hyp_u_poly: b and x must be finite")
    total = 0.0
    for j in range(m + 1):
        poch = 1.0
        for i in range(m - j):
            poch *= b + j + i
        total += math.comb(m, j) * poch * (-x) ** j
    return (-1.0) ** m * total


def log_gamma(x):
    """log Gamma(x) for x > 0."""
    x_arr, scalar = _as_float_array(x)
    if np.any(x_arr <= 0.0):
        raise ValueError("log_gamma: requires x > 0")
    out = special.gammaln(x_arr)
    return float(out) if scalar else out
