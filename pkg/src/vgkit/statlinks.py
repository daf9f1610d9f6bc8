"""Exact VG laws arising in classical multivariate statistics.

Products of correlated zero-mean normals, the sample product-moment
statistic of a bivariate normal sample, and off-diagonal Wishart entries
are all VG distributed with explicit parameters.  These constructions share
no code path with the density layer, which makes them strong end-to-end
oracles: simulate from raw normals, compare against the VG CDF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distribution import VgParams
from .sampling import _gen

__all__ = [
    "BivariateNormalSpec",
    "WishartSpec",
    "product_normal_params",
    "sample_cov_params",
    "wishart_offdiag_params",
    "bartlett_sample",
]


@dataclass(frozen=True)
class BivariateNormalSpec:
    sigma_x: float
    sigma_y: float
    rho: float

    def __post_init__(self):
        if not (self.sigma_x > 0.0 and self.sigma_y > 0.0):
            raise ValueError("BivariateNormalSpec requires positive variances")
        if not -1.0 < self.rho < 1.0:
            raise ValueError("BivariateNormalSpec requires rho in (-1, 1)")


@dataclass(frozen=True)
class WishartSpec:
    """Scale matrix V (symmetric positive definite, p <= 8) and integer
    degrees of freedom n >= 1."""

    v: np.ndarray
    n: int

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] > 8:
            raise ValueError("WishartSpec.v must be square with dimension <= 8")
        if not np.allclose(v, v.T, atol=1e-12):
            raise ValueError("WishartSpec.v must be symmetric")
        try:
            np.linalg.cholesky(v)
        except np.linalg.LinAlgError as exc:
            raise ValueError("WishartSpec.v must be positive definite") from exc
        if self.n != int(self.n) or self.n < 1:
            raise ValueError("WishartSpec.n must be a positive integer")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "n", int(self.n))


def product_normal_params(spec: BivariateNormalSpec, n_avg: int = 1) -> VgParams:
    """Law of the mean of n_avg independent products of correlated zero-mean
    normals: VG(n, rho sx sy / n, sx sy sqrt(1 - rho^2) / n, 0)."""
    if n_avg != int(n_avg) or n_avg < 1:
        raise ValueError("product_normal_params requires a positive integer n_avg")
    n = int(n_avg)
    s = spec.sigma_x * spec.sigma_y
    return VgParams(float(n), spec.rho * s / n, s * math.sqrt(1.0 - spec.rho**2) / n, 0.0)


def sample_cov_params(n: int, spec: BivariateNormalSpec) -> VgParams:
    """Law of the sample product-moment statistic of n bivariate normal pairs:
    VG(n-1, rho sx sy / n, sx sy sqrt(1 - rho^2) / n, 0)."""
    if n != int(n) or n < 2:
        raise ValueError("sample_cov_params requires integer n >= 2")
    s = spec.sigma_x * spec.sigma_y
    return VgParams(float(n - 1), spec.rho * s / n, s * math.sqrt(1.0 - spec.rho**2) / n, 0.0)


def wishart_offdiag_params(spec: WishartSpec, i: int, j: int) -> VgParams:
    """Law of the (i, j) off-diagonal Wishart entry:
    VG(n, v_ij, sqrt(v_ii v_jj - v_ij^2), 0)."""
    p = spec.v.shape[0]
    if not (0 <= i < p and 0 <= j < p):
        raise IndexError("wishart_offdiag_params: index out of range")
    if i == j:
        raise ValueError("diagonal entries are scaled chi-square, not VG")
    vij = spec.v[i, j]
    return VgParams(float(spec.n), vij, math.sqrt(spec.v[i, i] * spec.v[j, j] - vij**2), 0.0)


def bartlett_sample(spec: WishartSpec, rng) -> np.ndarray:
    """One Wishart draw X = L A A^T L^T via the Bartlett decomposition.

    A is lower triangular with chi_{n-i+1} diagonal entries (built as square
    roots of Gamma(k/2, 1/2) draws) and standard normal subdiagonals.
    """
    g = _gen(rng)
    p = spec.v.shape[0]
    chol = np.linalg.cholesky(spec.v)
    a = np.zeros((p, p))
    for i in range(p):
        a[i, i] = math.sqrt(g.gamma(0.5 * (spec.n - i), 2.0))
        for j in range(i):
            a[i, j] = g.standard_normal()
    la = chol @ a
    return la @ la.T
