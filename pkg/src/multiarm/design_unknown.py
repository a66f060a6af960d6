"""Sample size determination when the response precision is unknown.

The common precision gets a conjugate gamma prior. Two things change
against the known-precision case: posterior effect tails become Student,
and the design must hold not for one precision value but with a chosen
assurance probability over the precision's own posterior, which brings
in a beta quantile of the variance-reduction fraction. The required
pairwise information then depends on the total sample size through the
Student degrees of freedom and the beta quantile, so the design is the
fixed point of "sample size needed at sample size n".
"""

from __future__ import annotations

import math
from typing import Sequence

from scipy.optimize import brentq
from scipy.stats import gamma as _gamma_dist

from .distributions import (
    EquicorrSpec,
    beta_quantile,
    equicorr_max_cdf,
    equicorr_max_quantile,
    t_quantile,
)
from .exceptions import (
    DataInconsistencyError,
    DomainError,
    InfeasibleDesignError,
    NumericError,
    UnsupportedConfigurationError,
)
from .model import (
    ArmPrior,
    Criterion,
    DesignConfig,
    DesignResult,
    GammaPrecision,
    GammaUpdate,
    PrecisionPrior,
    PrecisionSummary,
    TrialData,
)

__all__ = [
    "update_precision",
    "precision_summary",
    "assured_information_target",
    "assured_design",
    "assured_criterion_met",
]


def update_precision(
    priors: Sequence[ArmPrior],
    precision: PrecisionPrior | GammaPrecision,
    data: TrialData,
) -> GammaUpdate:
    """Gamma posterior for the common precision given all arms' data.

    Each arm contributes its within-arm sum of squares plus a shrinkage
    term from the disagreement between prior mean and sample mean; the
    contributions are returned for reporting. The shape grows by half the
    total number of observations.
    """
    priors = tuple(priors)
    if len(priors) != len(data.n):
        raise DomainError(f"got {len(priors)} priors but data for {len(data.n)} arms")
    contributions = []
    for j, (prior, nj, ybar, ss) in enumerate(zip(priors, data.n, data.mean, data.ss)):
        if nj == 0:
            contributions.append(0.0)
            continue
        within = ss - nj * ybar * ybar
        q0 = prior.information
        shift = q0 * nj * (ybar - prior.mean) ** 2 / (q0 + nj)
        h = within + shift
        if h < -1e-8 * max(1.0, abs(ss)):
            raise DataInconsistencyError(
                f"arm {j}: negative precision contribution {h!r}"
            )
        contributions.append(h)
    alpha = precision.alpha + 0.5 * data.total
    beta = precision.beta + 0.5 * sum(contributions)
    return GammaUpdate(alpha=alpha, beta=beta, contributions=tuple(contributions))


def precision_summary(
    model: GammaPrecision | GammaUpdate | PrecisionPrior,
    threshold: float | None = None,
) -> PrecisionSummary:
    """Moments of a gamma precision law, reported alongside the response
    standard deviation it implies, plus an optional lower tail probability
    (useful as "chance the precision is below 1/c**2", i.e. sd above c)."""
    mean = model.alpha / model.beta
    prob = None
    if threshold is not None:
        if not (threshold > 0.0):
            raise DomainError(f"threshold must be positive, got {threshold!r}")
        prob = float(
            _gamma_dist(a=model.alpha, scale=1.0 / model.beta).cdf(threshold)
        )
    return PrecisionSummary(
        mean=mean,
        sd_equivalent=1.0 / math.sqrt(mean),
        threshold=threshold,
        prob_below=prob,
    )


def _variance_fraction(n_total: float, prior: PrecisionPrior) -> float:
    """Assurance quantile of the fraction of posterior precision owed to
    the data, a Beta(n/2, alpha0) variable."""
    if n_total <= 2e-12:
        return 0.0
    return beta_quantile(0.5 * n_total, prior.alpha, prior.assurance)


def assured_information_target(
    n_total: float,
    config: DesignConfig,
    prior: PrecisionPrior,
    criterion: Criterion,
) -> float:
    """Pairwise information (patient-equivalents) required if the trial
    ends up with ``n_total`` observations in all.

    Unlike the known-precision target this is already in patient units;
    the prior's scale substitutes for the unknown precision and the
    assurance level inflates it through a beta quantile.
    """
    if math.isnan(n_total) or n_total < 0.0 or math.isinf(n_total):
        raise DomainError(f"n_total must be a finite nonnegative number, got {n_total!r}")
    alpha1 = prior.alpha + 0.5 * n_total
    fraction = _variance_fraction(n_total, prior)
    if 1.0 - fraction < 1e-12:
        raise InfeasibleDesignError(
            f"assurance {prior.assurance!r} leaves no precision budget at n={n_total!r}"
        )
    df = 2.0 * alpha1
    t_eta = t_quantile(df, config.eta) if config.eta > 0.5 else 0.0
    if criterion == Criterion.ALL_PROMISING:
        upper = equicorr_max_quantile(EquicorrSpec(k=config.k, rho=config.rho, df=df), config.zeta)
    elif criterion == Criterion.ANY_PROMISING:
        upper = t_quantile(df, config.zeta) if config.zeta > 0.5 else 0.0
    else:
        raise DomainError(f"unknown criterion {criterion!r}")
    scale = prior.beta / (alpha1 * (1.0 - fraction))
    return scale * ((t_eta + upper) / config.delta_star) ** 2


def assured_design(
    config: DesignConfig,
    prior: PrecisionPrior,
    criterion: Criterion,
) -> DesignResult:
    """Solve the self-consistent sample size under precision uncertainty.

    Plain iteration of "total required at total n" converges in a handful
    of steps for realistic inputs; a damped phase and a bracketed root
    fallback cover the rest. The fractional solution is then split across
    arms at the configured allocation and rounded up per arm.
    """
    r = config.allocation_ratio
    k = config.k
    factor = (1.0 + r) * (1.0 + k / r)
    q0 = [p.information for p in config.priors]
    sum_q0 = sum(q0)

    def required_total(n: float) -> float:
        target = assured_information_target(n, config, prior, criterion)
        return factor * target - sum_q0

    n = max(required_total(0.0), 0.0)
    converged = False
    for iteration in range(500):
        proposal = max(required_total(n), 0.0)
        step = proposal - n
        if abs(step) <= 1e-9 * max(1.0, abs(n)):
            n = proposal
            converged = True
            break
        n = max(n + (0.5 * step if iteration >= 50 else step), 0.0)
    if not converged:
        lo, hi = 0.0, max(n, 1.0)
        for _ in range(80):
            if hi - required_total(hi) > 0.0:
                break
            hi *= 2.0
        else:
            raise NumericError("assured design: no bracket for the fixed point")
        n = brentq(lambda m: m - required_total(m), lo, hi, xtol=1e-9)

    target = assured_information_target(n, config, prior, criterion)
    q_exp = target * (1.0 + r) / r
    q_ctl = target * (1.0 + r)
    fractional = [max(q_ctl - q0[0], 0.0)]
    fractional += [max(q_exp - q0[j], 0.0) for j in range(1, k + 1)]
    arms = tuple(max(0, math.ceil(x - 1e-9)) for x in fractional)
    q1 = [q0[j] + arms[j] for j in range(k + 1)]
    achieved = min(q1[0] * q1[j] / (q1[0] + q1[j]) for j in range(1, k + 1))
    return DesignResult(
        criterion=criterion,
        n=arms,
        information_target=target,
        achieved_information=achieved,
        fractional_n=tuple(fractional),
    )


def assured_criterion_met(
    arm_sizes: Sequence[int],
    config: DesignConfig,
    prior: PrecisionPrior,
    criterion: Criterion,
    slack: float = 1e-9,
) -> bool:
    """Directly verify a concrete design against the assured criterion.

    Independent of the fixed-point route: plugs the achieved allocation
    into the defining probability statement and checks it reaches
    ``zeta``. Experimental arms must carry equal information for the
    correlation structure to stay exchangeable.
    """
    arm_sizes = tuple(int(x) for x in arm_sizes)
    if len(arm_sizes) != config.k + 1:
        raise DomainError(f"expected {config.k + 1} arm sizes, got {len(arm_sizes)}")
    if any(x < 0 for x in arm_sizes):
        raise DomainError("arm sizes must be >= 0")
    q0 = [p.information for p in config.priors]
    q1 = [q0[j] + arm_sizes[j] for j in range(config.k + 1)]
    exp_info = set(q1[1:])
    if len(exp_info) != 1:
        raise UnsupportedConfigurationError(
            "direct verification assumes equal information on experimental arms"
        )
    q_exp = q1[1]
    pair = q_exp * q1[0] / (q_exp + q1[0])
    rho = pair / q1[0]

    n_total = float(sum(arm_sizes))
    alpha1 = prior.alpha + 0.5 * n_total
    fraction = _variance_fraction(n_total, prior)
    if 1.0 - fraction < 1e-12:
        raise InfeasibleDesignError(
            f"assurance {prior.assurance!r} leaves no precision budget at n={n_total!r}"
        )
    df = 2.0 * alpha1
    t_eta = t_quantile(df, config.eta) if config.eta > 0.5 else 0.0
    reach = config.delta_star * math.sqrt(
        pair * alpha1 * (1.0 - fraction) / prior.beta
    ) - t_eta
    if criterion == Criterion.ALL_PROMISING:
        prob = equicorr_max_cdf(EquicorrSpec(k=config.k, rho=rho, df=df), reach)
    elif criterion == Criterion.ANY_PROMISING:
        prob = equicorr_max_cdf(EquicorrSpec(k=1, rho=0.0, df=df), reach)
    else:
        raise DomainError(f"unknown criterion {criterion!r}")
    return prob >= config.zeta - slack
