"""Exception types shared across the package."""


class ThhTateError(Exception):
    """Base class for all package errors."""


class ResolutionError(ThhTateError):
    """A generator name does not resolve in the given table."""


class ContractViolation(ThhTateError):
    """An algebraic contract failed, e.g. a composite differential is nonzero."""


class TruncationError(ThhTateError):
    """A computation was requested above the configured degree cutoff."""


class HypothesisError(ThhTateError):
    """An operation was applied outside its stated hypotheses."""


class UnsupportedCaseError(ThhTateError):
    """The requested case is deliberately not implemented (e.g. odd-degree coefficients)."""


class ConfigError(ThhTateError):
    """Invalid run configuration or command usage."""


class ResourceBudgetError(ThhTateError):
    """The requested window would exceed the configured memory budget."""


class VerificationFailure(ThhTateError):
    """A mechanical verification found a mismatch."""
