"""The VG Levy process: gamma-subordinated Brownian motion.

Two equivalent path constructions are provided: Brownian motion with drift
run on a gamma clock, and the difference of two independent increasing
gamma processes (returns minus losses).  Increments over a window of
length h follow VG(2h/nu, theta nu/2, sigma sqrt(nu/2), 0), which ties the
process layer to the distribution layer and is what the marginal-law tests
check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distribution import VgParams
from .sampling import _gen

__all__ = [
    "VgProcessParams",
    "PathGrid",
    "GammaDifferenceDecomposition",
    "increment_params",
    "gamma_difference_decomposition",
    "simulate_gamma_process",
    "simulate_path_subordinator",
    "simulate_path_gamma_difference",
    "process_moments",
    "process_cf",
    "process_levy_density",
]


@dataclass(frozen=True)
class VgProcessParams:
    """Process-level parameters: volatility sigma, subordinator variance rate nu,
    drift theta of the subordinated Brownian motion."""

    sigma: float
    nu: float
    theta: float = 0.0

    def __post_init__(self):
        if not (self.sigma > 0.0 and self.nu > 0.0):
            raise ValueError("VgProcessParams requires sigma > 0 and nu > 0")
        if not math.isfinite(self.theta):
            raise ValueError("VgProcessParams.theta must be finite")


@dataclass(frozen=True)
class PathGrid:
    """A sampled path: strictly increasing times starting at 0."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.size < 1 or times[0] != 0.0:
            raise ValueError("PathGrid.times must be 1-d and start at 0")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("PathGrid.times must be strictly increasing")
        if values.shape != times.shape:
            raise ValueError("PathGrid.values must match times in length")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class GammaDifferenceDecomposition:
    """Mean/variance rates of the returns (p) and losses (n) gamma processes."""

    mu_p: float
    mu_n: float
    nu_p: float
    nu_n: float


def increment_params(pp: VgProcessParams, h: float) -> VgParams:
    """Law of X(t+h) - X(t): VG(2h/nu, theta nu/2, sigma sqrt(nu/2), 0)."""
    if not h > 0.0:
        raise ValueError("increment_params requires h > 0")
    return VgParams(
        2.0 * h / pp.nu,
        pp.theta * pp.nu / 2.0,
        pp.sigma * math.sqrt(pp.nu / 2.0),
        0.0,
    )


def gamma_difference_decomposition(pp: VgProcessParams) -> GammaDifferenceDecomposition:
    root = 0.5 * math.sqrt(pp.theta**2 + 2.0 * pp.sigma**2 / pp.nu)
    mu_p = root + 0.5 * pp.theta
    mu_n = root - 0.5 * pp.theta
    return GammaDifferenceDecomposition(mu_p, mu_n, mu_p**2 * pp.nu, mu_n**2 * pp.nu)


def _validate_times(times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2 or times[0] != 0.0 or np.any(np.diff(times) <= 0):
        raise ValueError("grid times must be strictly increasing and start at 0")
    return times


def simulate_gamma_process(mean_rate: float, variance_rate: float, times, rng) -> PathGrid:
    """Increasing gamma process with stationary Gamma(mu^2 h/nu, rate mu/nu)
    increments over steps of length h."""
    if not (mean_rate > 0.0 and variance_rate > 0.0):
        raise ValueError("gamma process requires positive mean and variance rates")
    times = _validate_times(times)
    g = _gen(rng)
    h = np.diff(times)
    shape = mean_rate**2 * h / variance_rate
    scale = variance_rate / mean_rate
    increments = g.gamma(shape, scale)
    return PathGrid(times, np.concatenate(([0.0], np.cumsum(increments))))


def simulate_path_subordinator(pp: VgProcessParams, times, rng) -> PathGrid:
    """Brownian motion with drift theta and volatility sigma run on a gamma
    clock with unit mean rate and variance rate nu."""
    times = _validate_times(times)
    g = _gen(rng)
    h = np.diff(times)
    tau = g.gamma(h / pp.nu, pp.nu)
    z = g.standard_normal(h.size)
    increments = pp.theta * tau + pp.sigma * np.sqrt(tau) * z
    return PathGrid(times, np.concatenate(([0.0], np.cumsum(increments))))


def simulate_path_gamma_difference(pp: VgProcessParams, times, rng) -> PathGrid:
    """Returns process minus losses process; equal in law to the subordinator
    construction."""
    times = _validate_times(times)
    dec = gamma_difference_decomposition(pp)
    g = _gen(rng)
    pos = simulate_gamma_process(dec.mu_p, dec.nu_p, times, g)
    neg = simulate_gamma_process(dec.mu_n, dec.nu_n, times, g)
    return PathGrid(times, pos.values - neg.values)


@dataclass(frozen=True)
class ProcessMoments:
    mean: float
    var: float
    central3: float
    central4: float

    @property
    def kurtosis(self) -> float:
        return self.central4 / self.var**2


def process_moments(pp: VgProcessParams, t: float) -> ProcessMoments:
    """Mean and central moments of X(t); at theta = 0 the kurtosis is 3(1 + nu/t)."""
    if not t > 0.0:
        raise ValueError("process_moments requires t > 0")
    th, sg, nu = pp.theta, pp.sigma, pp.nu
    mean = th * t
    var = (th**2 * nu + sg**2) * t
    c3 = (2.0 * th**3 * nu**2 + 3.0 * sg**2 * th * nu) * t
    c4 = (3.0 * sg**4 * nu + 12.0 * sg**2 * th**2 * nu**2 + 6.0 * th**4 * nu**3) * t + (
        3.0 * sg**4 + 6.0 * sg**2 * th**2 * nu + 3.0 * th**4 * nu**2
    ) * t**2
    return ProcessMoments(mean, var, c3, c4)


def process_cf(pp: VgProcessParams, t: float, u: float) -> complex:
    """Characteristic function (1 - i theta nu u + sigma^2 nu u^2 / 2)^(-t/nu)."""
    if not t > 0.0:
        raise ValueError("process_cf requires t > 0")
    w = 1.0 - 1j * pp.theta * pp.nu * u + 0.5 * pp.sigma**2 * pp.nu * u * u
    return w ** (-t / pp.nu)


def process_levy_density(pp: VgProcessParams, x: float) -> float:
    """Levy density of the process (per unit time); infinite activity, finite
    variation."""
    if x == 0.0:
        raise ValueError("process_levy_density is undefined at x = 0")
    dec = gamma_difference_decomposition(pp)
    if x > 0:
        return dec.mu_p**2 / (dec.nu_p * x) * math.exp(-dec.mu_p * x / dec.nu_p)
    return dec.mu_n**2 / (dec.nu_n * abs(x)) * math.exp(-dec.mu_n * abs(x) / dec.nu_n)
