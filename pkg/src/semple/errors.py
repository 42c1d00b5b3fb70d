"""Exception hierarchy shared by every module.

The command line tool maps error families to exit statuses:
input/usage errors exit 1, math-domain errors exit 2, exhausted
searches exit 3.
"""

from __future__ import annotations


class SempleError(Exception):
    """Base class for all library errors."""

    exit_code = 2


class InputError(SempleError):
    """Malformed user input (parse errors, invalid vectors or codes)."""

    exit_code = 1


class ParseError(InputError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ConstantTermError(InputError):
    """A curve coordinate has a nonzero constant term."""


class MalformedVectorError(InputError):
    """A derived or small-growth vector violates its shape invariants."""


class MalformedChainError(InputError):
    """Chain-code segment counts must all be positive."""


class InvalidCodeError(InputError):
    """A letter word violates the spelling rules where validity is required."""


class UnsupportedCodeError(InputError):
    """The code is grammatical but outside the block/chain families."""


class MathDomainError(SempleError):
    """A computation left its domain of validity."""

    exit_code = 2


class IndeterminateOrderError(MathDomainError):
    """A vanishing order could not be resolved within the truncation."""


class DivisionOrderError(MathDomainError):
    """Quotient would have negative order, or the divisor is zero."""


class CompositionOrderError(MathDomainError):
    """Inner series of a composition must vanish at the origin."""


class NotUnitError(MathDomainError):
    """Root extraction requires constant term one."""


class NotWellParametrizedError(MathDomainError):
    """The germ is a nontrivial reparametrization of another germ."""


class NotNormalizedError(MathDomainError):
    """Operation requires a germ whose first coordinate is exactly t^m."""


class SwapRequiredError(MathDomainError):
    """The second coordinate dominates; exchange coordinates first."""


class TruncationTooSmallError(MathDomainError):
    def __init__(self, message: str, suggested_trunc: int | None = None):
        if suggested_trunc is not None:
            message = f"{message}; retry with truncation >= {suggested_trunc}"
        super().__init__(message)
        self.suggested_trunc = suggested_trunc


class InvalidCharacteristicError(MathDomainError):
    """Exponent data does not form a valid Puiseux characteristic."""


class NotRegularizedError(MathDomainError):
    """No stable regular level found within the requested depth."""


class SearchExhaustedError(SempleError):
    """A bounded search ended without a witness."""

    exit_code = 3
