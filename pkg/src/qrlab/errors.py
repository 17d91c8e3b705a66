"""Exception hierarchy shared across the package.

The split mirrors the CLI exit codes: validation problems (bad inputs,
malformed files, dimension mismatches), property violations (a checked
theorem or bound fails), and numeric failures (solver breakdown, sampler
starvation, non-finite values).
"""


class QrlabError(Exception):
    """Base class for all package errors."""


class ValidationError(QrlabError):
    """Input fails a structural precondition (shape, Hermiticity, radius...)."""


class DimensionMismatchError(ValidationError):
    """Operands live on state spaces of different dimension."""


class EmptySectionError(ValidationError):
    """A qr-number would be defined on an empty extent."""


class ExtentError(ValidationError):
    """A state lies outside the extent of the section being evaluated."""


class DomainError(ValidationError):
    """A whitelisted function is applied outside its real domain."""


class PropertyViolation(QrlabError):
    """A checked theorem, bound, or invariant does not hold."""


class NumericError(QrlabError):
    """Numerical breakdown: eigensolver failure, blow-up, starved sampler."""


class SamplingError(NumericError):
    """Rejection sampling exhausted its attempt budget.

    Carries the observed acceptance rate so degenerate conditions
    (radius below numerical noise) are diagnosable.
    """

    def __init__(self, message, acceptance_rate):
        super().__init__(f"{message} (acceptance rate {acceptance_rate:.3g})")
        self.acceptance_rate = acceptance_rate
