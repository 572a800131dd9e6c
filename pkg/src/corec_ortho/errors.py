"""Exception hierarchy shared by all modules.

Everything derives from CorecOrthoError so callers can catch the library's
failures with one except clause.  Numerical-evaluation failures and
domain-validation failures are kept on separate branches.
"""


class CorecOrthoError(Exception):
    """Base class for all library errors."""


# --- numerical evaluation -------------------------------------------------

class NonConvergent(CorecOrthoError):
    """A series failed its convergence test within the term budget."""


class PoleInDenominatorParams(CorecOrthoError):
    """A lower hypergeometric parameter hits a nonpositive integer before the
    series terminates."""


class BranchAmbiguity(CorecOrthoError):
    """Negative real argument passed to a cut function without saying which
    side of the cut is meant."""


class DegenerateParameters(CorecOrthoError):
    """An epsilon-perturbation limit did not stabilise."""


class IntegerBLimitFailure(DegenerateParameters):
    """Integer second parameter of the irregular confluent function: the
    perturbation extrapolants disagree."""


class AlphaDegenerate(DegenerateParameters):
    """Integer alpha in a route that requires noninteger alpha."""


class LimitUnstable(DegenerateParameters):
    """A parameter limit inside an explicit formula did not stabilise."""


class ToleranceNotReached(CorecOrthoError):
    """Quadrature error estimate exceeds the requested tolerance."""


# --- domain / parameter validation ----------------------------------------

class InvalidParams(CorecOrthoError):
    """Parameter bundle violates a hard precondition."""


class OutOfValidityDomain(InvalidParams):
    """Operation requires the orthogonality-measure validity conditions."""


class ConstraintViolation(InvalidParams):
    """Preset constraint inconsistent with the supplied free parameters."""


class GammaVanishes(InvalidParams):
    """A recurrence gamma coefficient becomes zero at a queried level."""


class LevelDenominatorVanishes(InvalidParams):
    """A recurrence-level denominator vanishes at a queried level."""


class CoefficientUnavailable(InvalidParams):
    """Recurrence coefficient undefined at a needed level."""


class DenominatorVanishes(CorecOrthoError):
    """Spectral-density denominator vanished at the evaluation point."""


class NonIntegrableEndpoint(InvalidParams):
    """Endpoint exponent makes the integral divergent."""


class BranchSelection(CorecOrthoError):
    """Principal square-root branch leaves the convergence region of the
    generating-function closed form."""


class UnsupportedFamily(InvalidParams):
    """Unknown differential-operator family tag."""


class UnsupportedKind(InvalidParams):
    """Unknown factored-operator kind."""


class NegativeRate(InvalidParams):
    """Birth-death rate table contains a negative rate where one is not
    allowed."""


class InvalidTrialCount(InvalidParams):
    """Monte Carlo trial count must be a positive integer."""
