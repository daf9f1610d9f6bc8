"""Compiled kernels for log K_nu and the likelihood/E-step hot loops.

The Bessel evaluator uses the classic two-regime scheme: Temme's ascending
series for x <= 2 with the order reduced to [-1/2, 1/2], a Steed/
Thompson-Barnett continued fraction for x > 2, and the (stable, increasing)
forward recurrence K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu carried on scaled
mantissas with an explicit log offset so large orders never overflow.  For
orders beyond ~300 the uniform (Debye) large-order expansion takes over.

On top of the scalar core sit three fused kernels: a ufunc for
log(K_nu(x) e^x), the full VG negative log-likelihood, and the ECM
conditional expectations (which read three consecutive orders off a single
recurrence ladder).
"""

from __future__ import annotations

import math

import numba
import numpy as np

# Even-index coefficients c_{2k} of the Maclaurin series 1/Gamma(z) = sum c_k z^k,
# feeding the cancellation-free evaluation of
# gam1(mu) = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu) = -(c2 + c4 mu^2 + ...).
_G1 = (
    0.57721566490153286061,
    -0.04200263503409523553,
    -0.04219773455554433675,
    0.00721894324666309954,
    -0.00021524167411495097,
    -0.00002013485478078824,
    0.00000113302723198170,
    0.00000000611609510448,
    -0.00000000118127457049,
    0.00000000000778226344,
    0.00000000000051003703,
    -0.00000000000000534812,
    -0.00000000000000011813,
)

_EPS = 1e-16
_MAXIT = 400
_RENORM = 1e250
_LOG_RENORM = math.log(_RENORM)
_DEBYE_MIN_ORDER = 300.0


@numba.njit(cache=True)
def _gam1(mu):
    mu2 = mu * mu
    acc = 0.0
    power = 1.0
    for c in _G1:
        acc += c * power
        power *= mu2
    return -acc


@numba.njit(cache=True)
def _temme_pair(mu, x):
    """(K_mu(x), K_{mu+1}(x)) unscaled, for |mu| <= 1/2 and 0 < x <= 2."""
    half_x = 0.5 * x
    pimu = math.pi * mu
    fact = 1.0 if abs(pimu) < 1e-15 else pimu / math.sin(pimu)
    d = -math.log(half_x)
    e = mu * d
    fact2 = 1.0 if abs(e) < 1e-15 else math.sinh(e) / e
    gam1 = _gam1(mu)
    gam2 = 0.5 * (1.0 / math.gamma(1.0 - mu) + 1.0 / math.gamma(1.0 + mu))
    ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
    total = ff
    e = math.exp(e)
    p = 0.5 * e * math.gamma(1.0 + mu)
    q = 0.5 / e * math.gamma(1.0 - mu)
    c = 1.0
    d = half_x * half_x
    total1 = p
    mu2 = mu * mu
    for i in range(1, _MAXIT + 1):
        ff = (i * ff + p + q) / (i * i - mu2)
        c *= d / i
        p /= i - mu
        q /= i + mu
        delta = c * ff
        total += delta
        total1 += c * (p - i * ff)
        if abs(delta) < abs(total) * _EPS:
            break
    return total, total1 * (2.0 / x)


@numba.njit(cache=True)
def _cf2_pair(mu, x):
    """(K_mu(x) e^x, K_{mu+1}(x) e^x) via Steed's continued fraction, x >= 2."""
    mu2 = mu * mu
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d
    delh = d
    q1 = 0.0
    q2 = 1.0
    a1 = 0.25 - mu2
    q = a1
    c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _MAXIT + 1):
        a -= 2.0 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    h = a1 * h
    k0 = math.sqrt(math.pi / (2.0 * x)) / s
    k1 = k0 * (mu + x + 0.5 - h) / x
    return k0, k1


@numba.njit(cache=True)
def _base_pair(f, x):
    """Scaled pair (K_f e^x, K_{f+1} e^x) with |f| <= 1/2, any x > 0."""
    if x <= 2.0:
        k0, k1 = _temme_pair(f, x)
        scale = math.exp(x)
        return k0 * scale, k1 * scale
    return _cf2_pair(f, x)


@numba.njit(cache=True)
def _debye_log_kve(nu, x):
    """Uniform large-order expansion of log(K_nu(x) e^x), three corrections."""
    w = math.hypot(nu, x)
    t = nu / w
    t2 = t * t
    u1 = (3.0 * t - 5.0 * t * t2) / 24.0
    u2 = (81.0 * t2 - 462.0 * t2 * t2 + 385.0 * t2 * t2 * t2) / 1152.0
    t3 = t * t2
    u3 = (30375.0 * t3 - 369603.0 * t3 * t2 + 765765.0 * t3 * t2 * t2 - 425425.0 * t3 * t2 * t2 * t2) / 414720.0
    series = 1.0 - u1 / nu + u2 / (nu * nu) - u3 / (nu * nu * nu)
    return (
        0.5 * math.log(0.5 * math.pi)
        - 0.5 * math.log(w)
        - w
        + x
        + nu * math.log((nu + w) / x)
        + math.log(series)
    )


@numba.njit(cache=True)
def _log_kve_core(nu, x):
    """log(K_nu(x) e^x), scalar core."""
    nu = abs(nu)
    if nu >= _DEBYE_MIN_ORDER:
        return _debye_log_kve(nu, x)
    m = int(math.floor(nu + 0.5))
    f = nu - m
    k0, k1 = _base_pair(f, x)
    if m == 0:
        return math.log(k0)
    offset = 0.0
    for j in range(1, m):
        k2 = k0 + (2.0 * (f + j) / x) * k1
        k0 = k1
        k1 = k2
        if k1 > _RENORM:
            k0 /= _RENORM
            k1 /= _RENORM
            offset += _LOG_RENORM
    return math.log(k1) + offset


@numba.vectorize(["float64(float64, float64)"], nopython=True, cache=True)
def log_kve(nu, x):
    """log(K_nu(x) * e^x) for real nu and x > 0; nan on invalid input."""
    if not (x > 0.0) or math.isnan(nu):
        return math.nan
    return _log_kve_core(nu, x)


@numba.njit(cache=True)
def _ladder_triple(nu_low, x):
    """Scaled mantissas (K_{nu_low} e^x, K_{nu_low+1} e^x, K_{nu_low+2} e^x)
    sharing one normalisation, plus their log offset.  nu_low > -3/2."""
    if nu_low >= -0.5:
        m = int(math.floor(nu_low + 0.5))
        f = nu_low - m
        k0, k1 = _base_pair(f, x)
        offset = 0.0
        for j in range(1, m + 1):
            k2 = k0 + (2.0 * (f + j) / x) * k1
            k0 = k1
            k1 = k2
            if k1 > _RENORM:
                k0 /= _RENORM
                k1 /= _RENORM
                offset += _LOG_RENORM
        # (k0, k1) = (K_{nu_low}, K_{nu_low+1})
    else:
        f = -nu_low - 1.0  # in (-1/2, 1/2]; symmetric reduction of both orders
        kf, kf1 = _base_pair(f, x)
        k0, k1 = kf1, kf  # K_{nu_low} = K_{f+1}, K_{nu_low+1} = K_f
        offset = 0.0
    k2 = k0 + (2.0 * (nu_low + 1.0) / x) * k1
    if k2 > _RENORM:
        k0 /= _RENORM
        k1 /= _RENORM
        k2 /= _RENORM
        offset += _LOG_RENORM
    return k0, k1, k2, offset


# ---------------------------------------------------------------------------
# Chebyshev acceleration: inside one likelihood call the order is fixed and
# only the argument varies, so t -> log(K_nu(e^t) e^{e^t}) is interpolated
# once per call (the function is asymptotically linear in t on both ends and
# smooth in between).  Probe points guard the approximation; on failure the
# caller falls back to the direct per-element loop.
# ---------------------------------------------------------------------------

_CHEB_N = 56
_CHEB_MIN_POINTS = 600
_CHEB_MAX_WIDTH = 40.0
_CHEB_PROBE_TOL = 1e-8


@numba.njit(cache=True)
def _cheb_fit_log_kve(nu, t_lo, t_hi):
    mid = 0.5 * (t_hi + t_lo)
    half = 0.5 * (t_hi - t_lo)
    xs = np.empty(_CHEB_N)
    fvals = np.empty(_CHEB_N)
    for j in range(_CHEB_N):
        xj = math.cos(math.pi * (j + 0.5) / _CHEB_N)
        xs[j] = xj
        fvals[j] = _log_kve_core(nu, math.exp(mid + half * xj))
    coef = np.zeros(_CHEB_N)
    for j in range(_CHEB_N):
        tk_prev = 1.0
        tk = xs[j]
        f = fvals[j]
        coef[0] += f
        coef[1] += f * tk
        for k in range(2, _CHEB_N):
            tk_next = 2.0 * xs[j] * tk - tk_prev
            coef[k] += f * tk_next
            tk_prev = tk
            tk = tk_next
    for k in range(_CHEB_N):
        coef[k] *= 2.0 / _CHEB_N
    coef[0] *= 0.5
    return coef


@numba.njit(cache=True)
def _cheb_eval(coef, u):
    b1 = 0.0
    b2 = 0.0
    for k in range(coef.size - 1, 0, -1):
        b0 = 2.0 * u * b1 - b2 + coef[k]
        b2 = b1
        b1 = b0
    return u * b1 - b2 + coef[0]


@numba.njit(cache=True)
def _cheb_window(nu, z_lo, z_hi):
    """Interpolation window in t = log z, capped in width, probe-validated.

    Returns (t_lo, t_hi, coef, ok); ok = False means the interpolant missed
    its tolerance and the caller must evaluate directly.
    """
    t_hi = math.log(z_hi) + 1e-9
    t_lo = math.log(z_lo) - 1e-9
    if t_hi - t_lo < 1e-8:
        return 0.0, 0.0, np.zeros(1), False
    if t_hi - t_lo > _CHEB_MAX_WIDTH:
        t_lo = t_hi - _CHEB_MAX_WIDTH
    coef = _cheb_fit_log_kve(nu, t_lo, t_hi)
    mid = 0.5 * (t_hi + t_lo)
    half = 0.5 * (t_hi - t_lo)
    for j in range(9):
        t = t_lo + (t_hi - t_lo) * (0.5 + j) / 9.0
        direct = _log_kve_core(nu, math.exp(t))
        approx = _cheb_eval(coef, (t - mid) / half)
        if abs(approx - direct) > _CHEB_PROBE_TOL * max(1.0, abs(direct)):
            return t_lo, t_hi, coef, False
    return t_lo, t_hi, coef, True


@numba.njit(cache=True)
def vg_nll(obs, r, theta, sigma, mu):
    """Negative VG log-likelihood; nan when an observation sits at mu with r <= 1."""
    s = math.hypot(theta, sigma)
    nu = 0.5 * (r - 1.0)
    sig2 = sigma * sigma
    const = -math.log(sigma) - 0.5 * math.log(math.pi) - math.lgamma(0.5 * r) - nu * math.log(2.0 * s)
    at_mu_const = 0.0
    if r > 1.0:
        at_mu_const = (
            math.lgamma(nu)
            - math.lgamma(0.5 * r)
            - math.log(2.0 * sigma * math.sqrt(math.pi))
            - nu * math.log1p(theta * theta / sig2)
        )
    n = obs.size
    scale = s / sig2
    z_lo = math.inf
    z_hi = 0.0
    n_at_mu = 0
    for i in range(n):
        au = abs(obs[i] - mu)
        if au == 0.0:
            if r <= 1.0:
                return math.nan
            n_at_mu += 1
            continue
        z = scale * au
        if z < z_lo:
            z_lo = z
        if z > z_hi:
            z_hi = z
    total = -n_at_mu * at_mu_const
    use_cheb = n - n_at_mu >= _CHEB_MIN_POINTS and z_hi > 0.0
    if use_cheb:
        t_lo, t_hi, coef, ok = _cheb_window(nu, z_lo, z_hi)
        use_cheb = ok
    if use_cheb:
        mid = 0.5 * (t_hi + t_lo)
        half = 0.5 * (t_hi - t_lo)
        z_floor = math.exp(t_lo)
        for i in range(n):
            u = obs[i] - mu
            au = abs(u)
            if au == 0.0:
                continue
            z = scale * au
            la = math.log(au)
            if z < z_floor:
                lk = _log_kve_core(nu, z) - z
            else:
                lk = _cheb_eval(coef, (la + math.log(scale) - mid) / half) - z
            total -= const + theta * u / sig2 + nu * la + lk
        return total
    for i in range(n):
        u = obs[i] - mu
        au = abs(u)
        if au == 0.0:
            continue
        z = scale * au
        lk = _log_kve_core(nu, z) - z
        total -= const + theta * u / sig2 + nu * math.log(au) + lk
    return total


@numba.njit(cache=True)
def vg_logpdf_vec(x, r, theta, sigma, mu):
    """Vectorized VG log-density with the same Chebyshev acceleration."""
    s = math.hypot(theta, sigma)
    nu = 0.5 * (r - 1.0)
    sig2 = sigma * sigma
    const = -math.log(sigma) - 0.5 * math.log(math.pi) - math.lgamma(0.5 * r) - nu * math.log(2.0 * s)
    at_mu = math.inf
    if r > 1.0:
        at_mu = (
            math.lgamma(nu)
            - math.lgamma(0.5 * r)
            - math.log(2.0 * sigma * math.sqrt(math.pi))
            - nu * math.log1p(theta * theta / sig2)
        )
    n = x.size
    out = np.empty(n)
    scale = s / sig2
    z_lo = math.inf
    z_hi = 0.0
    for i in range(n):
        au = abs(x[i] - mu)
        if au == 0.0:
            continue
        z = scale * au
        if z < z_lo:
            z_lo = z
        if z > z_hi:
            z_hi = z
    use_cheb = n >= _CHEB_MIN_POINTS and z_hi > 0.0
    mid = 0.0
    half = 1.0
    z_floor = 0.0
    coef = np.zeros(1)
    if use_cheb:
        t_lo, t_hi, coef, ok = _cheb_window(nu, z_lo, z_hi)
        use_cheb = ok
        if ok:
            mid = 0.5 * (t_hi + t_lo)
            half = 0.5 * (t_hi - t_lo)
            z_floor = math.exp(t_lo)
    for i in range(n):
        u = x[i] - mu
        au = abs(u)
        if au == 0.0:
            out[i] = at_mu
            continue
        z = scale * au
        if use_cheb and z >= z_floor:
            lk = _cheb_eval(coef, (math.log(z) - mid) / half) - z
        else:
            lk = _log_kve_core(nu, z) - z
        out[i] = const + theta * u / sig2 + nu * math.log(au) + lk
    return out


@numba.njit(cache=True)
def ecm_expectations(obs, alpha, theta0, sigma0, mu, h, delta_reg, want_log):
    """Conditional E[S|X], E[1/S|X] and (optionally) E[log S|X] per observation.

    The three Bessel orders alpha - 3/2, alpha - 1/2, alpha + 1/2 are read
    off one recurrence ladder; the order derivative for E[log S] costs two
    extra evaluations at alpha - 1/2 +/- h.
    """
    n = obs.size
    s_hat = np.empty(n)
    inv_s_hat = np.empty(n)
    log_s_hat = np.zeros(n)
    a = 2.0 * alpha + (theta0 / sigma0) ** 2
    sqrt_a = math.sqrt(a)
    nu_low = alpha - 1.5
    nu_mid = alpha - 0.5
    floor = delta_reg / sqrt_a
    for i in range(n):
        delta = abs(obs[i] - mu) / sigma0
        if delta < floor:
            delta = floor
        z = sqrt_a * delta
        k_down, k_mid, k_up, offset = _ladder_triple(nu_low, z)
        s_hat[i] = delta / sqrt_a * (k_up / k_mid)
        inv_s_hat[i] = sqrt_a / delta * (k_down / k_mid)
        if want_log:
            l_mid = math.log(k_mid) + offset  # log(K_mid e^z)
            dlog = (
                math.exp(_log_kve_core(nu_mid + h, z) - l_mid)
                - math.exp(_log_kve_core(nu_mid - h, z) - l_mid)
            ) / (2.0 * h)
            log_s_hat[i] = math.log(delta / sqrt_a) + dlog
    return s_hat, inv_s_hat, log_s_hat
