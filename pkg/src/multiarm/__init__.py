"""Bayesian sample size determination and analysis for exploratory
multi-arm trials comparing several experimental treatments with a shared
control."""

from . import datasets
from .distributions import (
    EquicorrSpec,
    beta_quantile,
    equicorr_max_cdf,
    equicorr_max_quantile,
    normal_quantile,
    t_quantile,
)
from .design_known import (
    BoundaryCurve,
    borderline_threshold,
    boundary_curve,
    information_target,
    integer_search,
    optimal_design,
)
from .design_unknown import (
    assured_criterion_met,
    assured_design,
    assured_information_target,
    precision_summary,
    update_precision,
)
from .dunnett import (
    DunnettConfig,
    FrequentistDesign,
    PairwiseDesign,
    dunnett_critical,
    dunnett_design,
    dunnett_pvalue,
    per_pair_frequentist,
    pooled_pair_sd,
    z_statistics,
    z_statistics_pooled,
)
from .exceptions import (
    DataInconsistencyError,
    DomainError,
    InfeasibleDesignError,
    NumericError,
    TrialDesignError,
    UnsupportedConfigurationError,
)
from .model import (
    ArmPrior,
    Criterion,
    Decision,
    DesignConfig,
    DesignResult,
    GammaPrecision,
    GammaUpdate,
    KnownPrecision,
    Outcome,
    PerArmPrecision,
    PosteriorSummary,
    PrecisionPrior,
    PrecisionSummary,
    TrialData,
)
from .montecarlo import (
    GuaranteeReport,
    McConfig,
    McEstimate,
    PosteriorDraws,
    design_guarantee,
    max_prob,
    posterior_probs,
)
from .posterior import (
    decide,
    prob_all_below,
    prob_any_superior,
    prob_pairwise_better,
    prob_superior,
    update_posterior,
)

__version__ = "0.1.0"

__all__ = [
    "ArmPrior",
    "datasets",
    "BoundaryCurve",
    "Criterion",
    "DataInconsistencyError",
    "Decision",
    "DesignConfig",
    "DesignResult",
    "DomainError",
    "DunnettConfig",
    "EquicorrSpec",
    "FrequentistDesign",
    "GammaPrecision",
    "GammaUpdate",
    "GuaranteeReport",
    "InfeasibleDesignError",
    "KnownPrecision",
    "McConfig",
    "McEstimate",
    "NumericError",
    "Outcome",
    "PairwiseDesign",
    "PerArmPrecision",
    "PosteriorDraws",
    "PosteriorSummary",
    "PrecisionPrior",
    "PrecisionSummary",
    "TrialData",
    "TrialDesignError",
    "UnsupportedConfigurationError",
    "assured_criterion_met",
    "assured_design",
    "assured_information_target",
    "beta_quantile",
    "borderline_threshold",
    "boundary_curve",
    "decide",
    "design_guarantee",
    "dunnett_critical",
    "dunnett_design",
    "dunnett_pvalue",
    "equicorr_max_cdf",
    "equicorr_max_quantile",
    "information_target",
    "integer_search",
    "max_prob",
    "normal_quantile",
    "optimal_design",
    "per_pair_frequentist",
    "pooled_pair_sd",
    "posterior_probs",
    "prob_all_below",
    "prob_any_superior",
    "prob_pairwise_better",
    "prob_superior",
    "precision_summary",
    "t_quantile",
    "update_posterior",
    "update_precision",
    "z_statistics",
    "z_statistics_pooled",
]
