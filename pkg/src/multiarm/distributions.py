"""Quantiles and the distribution of the largest of k correlated statistics.

The recurring object is a vector of k exchangeable statistics with common
correlation ``rho``,

    X_j = sqrt(rho) * U + sqrt(1 - rho) * Z_j,      j = 1..k,

where U and the Z_j are independent standard normals. Conditioning on U
makes the components independent, so the CDF of ``max_j X_j`` reduces to a
one-dimensional integral of ``Phi((x - sqrt(rho) u) / sqrt(1 - rho))**k``
against the normal density. The Student variant divides every component by
the same ``sqrt(W / df)`` with W ~ chi-square(df), handled by mixing the
normal answer over a gamma law. Quantiles come from bracketed root finding:
the max of k dependent statistics is stochastically larger than one of them
and (for nonnegative correlation) smaller than the independent max, which
pins the root between the marginal and independence quantiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import betaincinv, ndtr, ndtri, stdtr, stdtrit

from ._quad import GAUSS_TAIL, gamma_sqrt_expect, legendre_rule, refine_vector
from .exceptions import DomainError, NumericError

__all__ = [
    "EquicorrSpec",
    "normal_quantile",
    "t_quantile",
    "beta_quantile",
    "equicorr_max_cdf",
    "equicorr_max_quantile",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class EquicorrSpec:
    """Shape of an equicorrelated max distribution.

    ``df = inf`` (the default) gives the normal case; finite ``df`` the
    Student case with a shared variance estimate.
    """

    k: int
    rho: float
    df: float = math.inf

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 1:
            raise DomainError(f"k must be an integer >= 1, got {self.k!r}")
        if not (0.0 <= self.rho < 1.0):
            raise DomainError(f"rho must lie in [0, 1), got {self.rho!r}")
        if math.isnan(self.df) or not (self.df > 0.0):
            raise DomainError(f"df must be positive (inf for normal), got {self.df!r}")


def _check_open_unit(name: str, p: float) -> None:
    if not (0.0 < p < 1.0):
        raise DomainError(f"{name} must lie strictly in (0, 1), got {p!r}")


def normal_quantile(p: float) -> float:
    """Standard normal quantile."""
    _check_open_unit("p", p)
    return float(ndtri(p))


def t_quantile(df: float, p: float) -> float:
    """Student t quantile; df may be any positive real, inf for normal."""
    _check_open_unit("p", p)
    if math.isnan(df) or not (df > 0.0):
        raise DomainError(f"df must be positive, got {df!r}")
    if math.isinf(df):
        return float(ndtri(p))
    return float(stdtrit(df, p))


def beta_quantile(a: float, b: float, p: float) -> float:
    """Quantile of a Beta(a, b) law."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"beta shapes must be positive, got a={a!r}, b={b!r}")
    _check_open_unit("p", p)
    return float(betaincinv(a, b, p))


def _normal_max_cdf_batch(k: int, rho: float, xs: np.ndarray, tol: float) -> np.ndarray:
    """P(max of k equicorrelated normals <= x) for a vector of thresholds."""
    xs = np.asarray(xs, dtype=float)
    if k == 1:
        return ndtr(xs)
    if rho == 0.0:
        return ndtr(xs) ** k
    sq_rho = math.sqrt(rho)
    sq_comp = math.sqrt(1.0 - rho)

    def evaluate(n: int) -> np.ndarray:
        u, w = legendre_rule(-GAUSS_TAIL, GAUSS_TAIL, n)
        weight = w * np.exp(-0.5 * u * u) / _SQRT_2PI
        inner = ndtr((xs[:, None] - sq_rho * u[None, :]) / sq_comp)
        return (inner**k) @ weight

    return refine_vector(evaluate, tol=tol, start=128, limit=8192, label="equicorrelated max CDF")


def equicorr_max_cdf(spec: EquicorrSpec, x: float, tol: float = 1e-10) -> float:
    """CDF of the largest of the k statistics at threshold ``x``."""
    x = float(x)
    if math.isnan(x):
        raise DomainError("threshold must not be NaN")
    if math.isinf(x):
        return 1.0 if x > 0 else 0.0
    if not (tol > 0.0):
        raise DomainError(f"tol must be positive, got {tol!r}")
    if math.isinf(spec.df):
        if spec.k == 1:
            return float(ndtr(x))
        return float(_normal_max_cdf_batch(spec.k, spec.rho, np.asarray([x]), tol)[0])
    if spec.k == 1:
        return float(stdtr(spec.df, x))

    # Shared denominator: condition on W/df ~ Gamma(df/2, df/2) and mix.
    half_df = 0.5 * spec.df

    def conditional(s: np.ndarray) -> np.ndarray:
        return _normal_max_cdf_batch(spec.k, spec.rho, x * s, tol=0.1 * tol)

    value = gamma_sqrt_expect(
        conditional, half_df, half_df, tol=tol, start=64,
        label="equicorrelated max CDF (Student)",
    )
    return min(max(value, 0.0), 1.0)


def equicorr_max_quantile(spec: EquicorrSpec, p: float, tol: float = 1e-10) -> float:
    """p-quantile of the largest statistic.

    The root is bracketed between the marginal quantile and the
    independence quantile at ``p**(1/k)``; positive exchangeable
    dependence guarantees the CDF crosses ``p`` inside that interval.
    """
    _check_open_unit("p", p)
    if spec.k == 1:
        return t_quantile(spec.df, p)
    if spec.rho == 0.0 and math.isinf(spec.df):
        return float(ndtri(p ** (1.0 / spec.k)))

    p_single = p ** (1.0 / spec.k)
    if math.isinf(spec.df):
        lo, hi = float(ndtri(p)), float(ndtri(p_single))
    else:
        lo, hi = float(stdtrit(spec.df, p)), float(stdtrit(spec.df, p_single))
    pad = 1e-8 * max(1.0, abs(lo), abs(hi))
    lo -= pad
    hi += pad

    def objective(x: float) -> float:
        return equicorr_max_cdf(spec, x, tol=tol) - p

    try:
        root, info = brentq(objective, lo, hi, xtol=1e-10, rtol=4.0 * np.finfo(float).eps,
                            maxiter=200, full_output=True)
    except ValueError as exc:
        raise NumericError(
            f"quantile bracket [{lo!r}, {hi!r}] failed for {spec!r} at p={p!r}: {exc}"
        ) from exc
    if not info.converged:
        raise NumericError(f"quantile root finding did not converge for {spec!r} at p={p!r}")
    return float(root)
