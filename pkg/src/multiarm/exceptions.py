"""Exception hierarchy for the package.

Everything raised deliberately by this package derives from
:class:`TrialDesignError`, so callers can catch one type at an API
boundary. Validation failures also subclass ``ValueError`` to stay
friendly to generic input-checking code.
"""

from __future__ import annotations


class TrialDesignError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TrialDesignError, ValueError):
    """An argument is outside its mathematical domain (probability not in
    (0, 1), nonpositive information, wrong vector length, and so on)."""


class UnsupportedConfigurationError(TrialDesignError, ValueError):
    """The inputs are individually valid but the requested operation is not
    defined for their combination (e.g. asymmetric priors where a symmetric
    search is required)."""


class DataInconsistencyError(TrialDesignError, ValueError):
    """Summary statistics contradict each other (e.g. a sum of squares
    smaller than the minimum implied by the sample mean)."""


class InfeasibleDesignError(TrialDesignError):
    """No sample size can meet the requested operating characteristics."""


class NumericError(TrialDesignError, ArithmeticError):
    """A quadrature or root-finding step failed to reach its tolerance.

    Carries enough context in the message to reproduce the failing call.
    """
