"""Parameter estimation: method of moments, maximum likelihood, ECM.

The likelihood is built on the log-scale density, so heavy tails and tiny
scales do not underflow.  The ECM algorithm treats the gamma mixing variable
as missing data; its conditional law given an observation is generalized
inverse Gaussian, which supplies closed-form conditional expectations of
S, 1/S and log S through Bessel ratios.  The conditional-maximisation split
is: closed forms for (mu, theta0, sigma0) given the expectations, then a
one-dimensional search maximising the observed VG likelihood over the gamma
shape alpha.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import optimize

from ._fastbessel import ecm_expectations, vg_nll
from .distribution import MadanSeneta2, VgParams, convert_params

__all__ = [
    "DataSet",
    "EcmState",
    "FitMethod",
    "FitResult",
    "SingularLikelihoodError",
    "CollapsedFitError",
    "LightTailsError",
    "mom_symmetric",
    "mom_general",
    "negative_log_likelihood",
    "mle_fit",
    "ecm_initial_state",
    "ecm_e_step",
    "ecm_cm_step",
    "ecm_fit",
]


class SingularLikelihoodError(ValueError):
    """An observation sits exactly at mu with r <= 1: the likelihood is +inf."""


class CollapsedFitError(RuntimeError):
    """A conditional-maximisation step produced a nonpositive variance."""


class LightTailsError(ValueError):
    """Sample kurtosis is at or below the normal value; no VG fit this way."""


@dataclass(frozen=True)
class DataSet:
    """An i.i.d. sample with at least 8 finite observations."""

    observations: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        obs = np.asarray(self.observations, dtype=float)
        if obs.ndim != 1 or obs.size < 8:
            raise ValueError("DataSet requires a 1-d sample of size >= 8")
        if not np.all(np.isfinite(obs)):
            raise ValueError("DataSet observations must all be finite")
        object.__setattr__(self, "observations", obs)

    @property
    def n(self) -> int:
        return self.observations.size


def _as_array(data) -> np.ndarray:
    if isinstance(data, DataSet):
        return data.observations
    return np.asarray(data, dtype=float)


class FitMethod(enum.Enum):
    MOM = "mom"
    MLE = "mle"
    ECM = "ecm"


@dataclass(frozen=True)
class FitResult:
    params: VgParams
    loglik: float
    iterations: int
    converged: bool
    method: FitMethod
    warnings: tuple[str, ...] = ()
    loglik_trace: np.ndarray | None = None


def negative_log_likelihood(data, p: VgParams) -> float:
    """-sum log pdf(x_i); raises SingularLikelihoodError on an exact hit of mu
    when r <= 1 (the likelihood diverges there)."""
    obs = np.ascontiguousarray(_as_array(data))
    val = vg_nll(obs, p.r, p.theta, p.sigma, p.mu)
    if math.isnan(val):
        raise SingularLikelihoodError(
            f"observation equal to mu={p.mu!r} with r={p.r!r} <= 1"
        )
    return float(val)


# ---------------------------------------------------------------------------
# Method of moments
# ---------------------------------------------------------------------------


def mom_symmetric(data) -> FitResult:
    """Explicit moment estimator under the symmetric model (theta = 0).

    Matches mean, variance and kurtosis in the (alpha, theta0, sigma0, mu)
    parametrisation; raises LightTailsError when the sample kurtosis does not
    exceed 3.
    """
    obs = _as_array(DataSet(_as_array(data)) if not isinstance(data, DataSet) else data)
    n = obs.size
    mu_hat = float(np.mean(obs))
    centered = obs - mu_hat
    sigma0_sq = float(np.mean(centered**2))
    nu_hat = float(np.sum(centered**4) / (3.0 * sigma0_sq**2 * n) - 1.0)
    if nu_hat <= 0.0:
        raise LightTailsError(f"moment estimate of the mixing variance is {nu_hat:.3g} <= 0")
    params = convert_params(
        MadanSeneta2(alpha=1.0 / nu_hat, theta0=0.0, sigma0=math.sqrt(sigma0_sq), mu=mu_hat)
    )
    return FitResult(
        params=params,
        loglik=-negative_log_likelihood(obs, params),
        iterations=0,
        converged=True,
        method=FitMethod.MOM,
    )


def _model_raw_moments(p: VgParams, k: int) -> np.ndarray:
    # raw moments with location folded in via the binomial identity
    from .moments import raw_moments

    centered = raw_moments(VgParams(p.r, p.theta, p.sigma, 0.0), k)
    out = np.empty(k)
    for i in range(1, k + 1):
        acc = p.mu**i
        for j in range(1, i + 1):
            acc += math.comb(i, j) * p.mu ** (i - j) * centered[j - 1]
        out[i - 1] = acc
    return out


def _crude_init(obs: np.ndarray) -> VgParams:
    m = float(np.mean(obs))
    v = float(np.var(obs))
    k3 = float(np.mean((obs - m) ** 3))
    theta = k3 / (6.0 * v) if v > 0 else 0.0
    r = 2.0
    sigma_sq = max(v / r - 2.0 * theta**2, 0.05 * v)
    return VgParams(r, theta, math.sqrt(sigma_sq), m - r * theta)


def _default_init(obs: np.ndarray) -> VgParams:
    try:
        return mom_symmetric(obs).params
    except (LightTailsError, ValueError):
        return _crude_init(obs)


def _moment_init(obs: np.ndarray) -> VgParams:
    # four-parameter moment fit: cheap and lands close to the MLE basin
    try:
        return mom_general(obs).params
    except Exception:
        return _default_init(obs)


def mom_general(data, init: VgParams | None = None) -> FitResult:
    """Four-parameter moment fit by minimising the relative raw-moment misfit.

    Objective: sum_j ((hat mu_j' - mu_j')/D_j)^2 for j = 1..4, with
    D_j = hat mu_j' except when that sample moment is within 1e-8 of zero, in
    which case D_j = max(|hat mu_j'|, sd^j) keeps the term well defined.
    """
    ds = data if isinstance(data, DataSet) else DataSet(_as_array(data))
    obs = ds.observations
    sample_raw = np.array([np.mean(obs**j) for j in range(1, 5)])
    sd = float(np.std(obs))
    denom = np.where(
        np.abs(sample_raw) > 1e-8, np.abs(sample_raw),
        np.maximum(np.abs(sample_raw), sd ** np.arange(1, 5)),
    )
    start = init if init is not None else _default_init(obs)

    def objective(z) -> float:
        r, theta, sigma, mu = math.exp(z[0]), z[1], math.exp(z[2]), z[3]
        model = _model_raw_moments(VgParams(r, theta, sigma, mu), 4)
        return float(np.sum(((sample_raw - model) / denom) ** 2))

    z0 = np.array([math.log(start.r), start.theta, math.log(start.sigma), start.mu])
    res = optimize.minimize(
        objective, z0, method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000, "maxfev": 4000},
    )
    params = VgParams(math.exp(res.x[0]), res.x[1], math.exp(res.x[2]), res.x[3])
    return FitResult(
        params=params,
        loglik=-negative_log_likelihood(obs, params),
        iterations=int(res.nit),
        converged=bool(res.success),
        method=FitMethod.MOM,
        warnings=(f"moment objective at optimum: {res.fun:.3g}",),
    )


# ---------------------------------------------------------------------------
# Maximum likelihood
# ---------------------------------------------------------------------------

_MU_LOCK_WINDOW = 1e-12


def mle_fit(data, init: VgParams | None = None, *, max_outer: int = 10, rel_tol: float = 1e-8) -> FitResult:
    """Derivative-free likelihood maximisation over (log r, theta, log sigma, mu).

    A simplex pass is followed by a bounded golden-section refinement in mu
    (the likelihood has a kink in mu), repeated until relative parameter and
    log-likelihood changes fall under rel_tol.  Steps that chase the
    unbounded-likelihood spike (r <= 1 with mu locking onto an observation)
    are rejected and reported through the result's warnings.
    """
    ds = data if isinstance(data, DataSet) else DataSet(_as_array(data))
    obs = ds.observations
    start = init if init is not None else _moment_init(obs)
    singular_hits = 0

    def nll_of(z) -> float:
        nonlocal singular_hits
        r, theta, sigma, mu = math.exp(z[0]), z[1], math.exp(z[2]), z[3]
        if not (r < 1e6 and sigma < 1e9 and abs(theta) < 1e9 and abs(mu) < 1e12):
            return math.inf
        if r <= 1.0 and np.min(np.abs(obs - mu)) < _MU_LOCK_WINDOW:
            singular_hits += 1
            return math.inf
        try:
            return negative_log_likelihood(obs, VgParams(r, theta, sigma, mu))
        except SingularLikelihoodError:
            singular_hits += 1
            return math.inf

    z = np.array([math.log(start.r), start.theta, math.log(start.sigma), start.mu])
    best = nll_of(z)
    prev_best = math.inf
    iterations = 0
    converged = False
    for outer in range(max_outer):
        loose = outer == 0
        options = {
            "xatol": 1e-6 if loose else 1e-9,
            "fatol": 1e-8 if loose else 1e-10,
            "maxiter": 2000, "maxfev": 4000, "adaptive": True,
        }
        if not loose:
            # restart near the incumbent: a tiny simplex re-converges cheaply
            simplex = np.tile(z, (5, 1))
            for k in range(4):
                simplex[k + 1, k] += 1e-5 * max(abs(z[k]), 0.1)
            options["initial_simplex"] = simplex
        res = optimize.minimize(nll_of, z, method="Nelder-Mead", options=options)
        iterations += int(res.nit)
        z_new = res.x if res.fun <= best else z.copy()
        best = min(best, float(res.fun))
        # golden-section polish along the non-smooth mu direction
        width = 4.0 * math.exp(z_new[2]) / math.sqrt(obs.size) + 1e-9
        fixed = z_new.copy()

        def nll_mu(mu_val: float) -> float:
            trial = fixed.copy()
            trial[3] = mu_val
            return nll_of(trial)

        scalar = optimize.minimize_scalar(
            nll_mu, bounds=(z_new[3] - width, z_new[3] + width), method="bounded",
            options={"xatol": 1e-12},
        )
        if scalar.fun < best:
            z_new = fixed
            z_new[3] = float(scalar.x)
            best = float(scalar.fun)
        dz = np.max(np.abs(z_new - z) / np.maximum(np.abs(z), 1.0))
        df = abs(best - prev_best) / max(abs(best), 1.0)
        prev_best = best
        z = z_new
        if dz < rel_tol and df < rel_tol:
            converged = True
            break
    params = VgParams(math.exp(z[0]), z[1], math.exp(z[2]), z[3])
    warnings = ()
    if singular_hits:
        warnings = (
            f"rejected {singular_hits} singular-likelihood steps (r <= 1 with mu on a data point)",
        )
    return FitResult(
        params=params,
        loglik=-best,
        iterations=iterations,
        converged=converged,
        method=FitMethod.MLE,
        warnings=warnings,
    )


# ---------------------------------------------------------------------------
# ECM
# ---------------------------------------------------------------------------

_DELTA_REG = 1e-3
_ALPHA_BOUNDS = (1e-3, 1e3)


@dataclass(frozen=True)
class EcmState:
    """Current (alpha, theta0, sigma0, mu) estimates plus per-observation
    conditional expectations of the latent gamma mixing variables."""

    alpha_hat: float
    theta0_hat: float
    sigma0_hat: float
    mu_hat: float
    s_hat: np.ndarray | None = None
    inv_s_hat: np.ndarray | None = None
    log_s_hat: np.ndarray | None = None
    loglik: float = -math.inf
    iter: int = 0

    def canonical(self) -> VgParams:
        return convert_params(
            MadanSeneta2(self.alpha_hat, self.theta0_hat, self.sigma0_hat, self.mu_hat)
        )


def _vg2_loglik(obs: np.ndarray, alpha: float, theta0: float, sigma0: float, mu: float) -> float:
    params = convert_params(MadanSeneta2(alpha, theta0, sigma0, mu))
    try:
        return -negative_log_likelihood(obs, params)
    except SingularLikelihoodError:
        return math.inf


def ecm_initial_state(data, init: VgParams | None = None) -> EcmState:
    ds = data if isinstance(data, DataSet) else DataSet(_as_array(data))
    obs = ds.observations
    start = init if init is not None else _moment_init(obs)
    alpha = min(max(start.r / 2.0, _ALPHA_BOUNDS[0]), _ALPHA_BOUNDS[1])
    theta0 = start.r * start.theta
    sigma0 = start.sigma * math.sqrt(start.r)
    return EcmState(
        alpha_hat=alpha, theta0_hat=theta0, sigma0_hat=sigma0, mu_hat=start.mu,
        loglik=_vg2_loglik(obs, alpha, theta0, sigma0, start.mu),
    )


def _gig_expectations(obs, alpha, theta0, sigma0, mu, h=1e-5, want_log=True):
    """Conditional E[S|X], E[1/S|X], E[log S|X]; the conditional law is GIG.

    delta_i = |x_i - mu| / sigma0, floored at Delta / sqrt(2 alpha +
    theta0^2/sigma0^2) so the Bessel arguments stay away from zero.
    """
    obs = np.ascontiguousarray(obs)
    return ecm_expectations(obs, alpha, theta0, sigma0, mu, h, _DELTA_REG, want_log)


def ecm_e_step(data, state: EcmState) -> EcmState:
    """Fill the conditional expectations at the state's current parameters."""
    obs = _as_array(data)
    s_hat, inv_s_hat, log_s_hat = _gig_expectations(
        obs, state.alpha_hat, state.theta0_hat, state.sigma0_hat, state.mu_hat
    )
    return replace(state, s_hat=s_hat, inv_s_hat=inv_s_hat, log_s_hat=log_s_hat)


def _cm1_closed_forms(obs: np.ndarray, s_hat: np.ndarray, inv_s_hat: np.ndarray):
    """Joint maximisers of the expected complete-data likelihood in
    (mu, theta0, sigma0^2) given the conditional expectations."""
    n = obs.size
    sum_s = float(np.sum(s_hat))
    sum_inv = float(np.sum(inv_s_hat))
    sum_x = float(np.sum(obs))
    sum_x_inv = float(np.sum(obs * inv_s_hat))
    denom = sum_inv * sum_s - n * n
    mu = (sum_x_inv * sum_s - n * sum_x) / denom
    theta0 = (sum_x - n * mu) / sum_s
    sigma0_sq = float(np.sum(inv_s_hat * (obs - mu) ** 2)) / n - theta0**2 * sum_s / n
    if sigma0_sq <= 0.0:
        raise CollapsedFitError("conditional maximisation produced sigma0^2 <= 0")
    return mu, theta0, math.sqrt(sigma0_sq)


def _alpha_update(
    obs: np.ndarray, alpha_old: float, theta0: float, sigma0: float, mu: float,
    half_width: float = 0.25,
):
    """Bounded line search maximising the observed VG likelihood over alpha.

    A moving window inside the global [1e-3, 1e3] bracket: the shape update
    drifts slowly, so the local search needs few likelihood evaluations; the
    window expands whenever the optimum pins to its edge.  The candidate is
    accepted only when it improves the likelihood, so ascent is guaranteed.
    """

    def neg_ll_of_log_alpha(la: float) -> float:
        return -_vg2_loglik(obs, math.exp(la), theta0, sigma0, mu)

    lo_glob, hi_glob = math.log(_ALPHA_BOUNDS[0]), math.log(_ALPHA_BOUNDS[1])
    la0 = min(max(math.log(alpha_old), lo_glob), hi_glob)
    while True:
        lo = max(lo_glob, la0 - half_width)
        hi = min(hi_glob, la0 + half_width)
        res = optimize.minimize_scalar(
            neg_ll_of_log_alpha, bounds=(lo, hi), method="bounded",
            options={"xatol": 3e-5},
        )
        at_edge = (res.x - lo < 1e-4 and lo > lo_glob) or (hi - res.x < 1e-4 and hi < hi_glob)
        if not at_edge or half_width > hi_glob - lo_glob:
            break
        half_width *= 4.0
    alpha = alpha_old
    best = _vg2_loglik(obs, alpha_old, theta0, sigma0, mu)
    if -res.fun > best:
        alpha = math.exp(float(res.x))
        best = -float(res.fun)
    return alpha, best


def ecm_cm_step(data, state: EcmState) -> EcmState:
    """Conditional maximisations: closed forms for (mu, theta0, sigma0), a
    refresh of the conditional expectations at the new location/scale, then
    the bounded alpha search on the observed likelihood.

    Requires a fresh E-step.  The likelihood never decreases: the closed
    forms jointly maximise the expected complete-data likelihood and the
    alpha candidate is only accepted when it improves the observed one.
    """
    if state.s_hat is None or state.inv_s_hat is None:
        raise ValueError("ecm_cm_step requires a fresh e-step")
    obs = _as_array(data)
    mu, theta0, sigma0 = _cm1_closed_forms(obs, state.s_hat, state.inv_s_hat)
    s_hat, inv_s_hat, log_s_hat = _gig_expectations(obs, state.alpha_hat, theta0, sigma0, mu)
    alpha, best = _alpha_update(obs, state.alpha_hat, theta0, sigma0, mu)
    return EcmState(
        alpha_hat=alpha, theta0_hat=theta0, sigma0_hat=sigma0, mu_hat=mu,
        s_hat=s_hat, inv_s_hat=inv_s_hat, log_s_hat=log_s_hat,
        loglik=best, iter=state.iter + 1,
    )


def ecm_fit(
    data, init: VgParams | None = None, *, max_iter: int = 1000, rel_tol: float = 1e-8
) -> FitResult:
    """Iterate the E-step / CM-step schedule until the relative log-likelihood
    change is below rel_tol; returns canonical parameters and the trace.

    The loop body is equivalent to ecm_e_step followed by ecm_cm_step but
    skips conditional expectations that nothing downstream reads (the alpha
    update maximises the observed likelihood directly, so the refreshed
    E[log S] and E[S] between the two maximisations are never consumed);
    the parameter trajectory and likelihood trace are identical.
    """
    ds = data if isinstance(data, DataSet) else DataSet(_as_array(data))
    obs = ds.observations
    state = ecm_initial_state(ds, init)
    trace = [state.loglik]
    converged = False
    alpha, theta0, sigma0, mu = (
        state.alpha_hat, state.theta0_hat, state.sigma0_hat, state.mu_hat,
    )
    iterations = 0
    width = 0.25
    for _ in range(max_iter):
        s_hat, inv_s_hat, _ = _gig_expectations(
            obs, alpha, theta0, sigma0, mu, want_log=False
        )
        mu, theta0, sigma0 = _cm1_closed_forms(obs, s_hat, inv_s_hat)
        alpha_prev = alpha
        alpha, loglik = _alpha_update(obs, alpha, theta0, sigma0, mu, half_width=width)
        # shrink the search window toward the recent drift of log(alpha)
        width = min(max(8.0 * abs(math.log(alpha) - math.log(alpha_prev)), 0.002), 0.25)
        iterations += 1
        trace.append(loglik)
        if abs(trace[-1] - trace[-2]) < rel_tol * max(1.0, abs(trace[-1])):
            converged = True
            break
    final = EcmState(alpha, theta0, sigma0, mu, loglik=trace[-1], iter=iterations)
    return FitResult(
        params=final.canonical(),
        loglik=final.loglik,
        iterations=iterations,
        converged=converged,
        method=FitMethod.ECM,
        loglik_trace=np.asarray(trace),
    )
