"""Truncated formal power series in one variable over exact rationals.

A series stores a sparse map ``exponent -> nonzero Fraction`` together with
a truncation order ``trunc``: coefficients at exponents ``>= trunc`` are
unknown.  ``trunc=None`` means the series is an exact polynomial, i.e. every
absent exponent is known to carry coefficient zero.  Every operation computes
the truncation its result is actually guaranteed to, so downstream order
queries either answer exactly or report indeterminacy; they never lie.
"""

from __future__ import annotations

from fractions import Fraction
from math import inf

from .errors import (
    CompositionOrderError,
    DivisionOrderError,
    IndeterminateOrderError,
    NotUnitError,
    TruncationTooSmallError,
)

# Working precision for curve germs defaults to this multiple of the largest
# input exponent; callers override it when a computation runs out of terms.
DEFAULT_TRUNC_FACTOR = 4


def _min_trunc(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class TruncatedSeries:
    """Immutable sparse power series with explicit truncation bookkeeping."""

    __slots__ = ("terms", "trunc")

    def __init__(self, terms=None, trunc: int | None = None):
        clean: dict[int, Fraction] = {}
        if terms:
            for k, c in dict(terms).items():
                k = int(k)
                if k < 0:
                    raise ValueError("exponents must be non-negative")
                c = Fraction(c)
                if c and (trunc is None or k < trunc):
                    clean[k] = c
        if trunc is not None and trunc < 0:
            raise ValueError("truncation must be non-negative")
        self.terms = clean
        self.trunc = trunc

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, trunc: int | None = None) -> "TruncatedSeries":
        return cls({}, trunc)

    @classmethod
    def one(cls, trunc: int | None = None) -> "TruncatedSeries":
        return cls({0: 1}, trunc)

    @classmethod
    def monomial(cls, exponent: int, coeff=1, trunc: int | None = None) -> "TruncatedSeries":
        return cls({exponent: coeff}, trunc)

    # -- structure queries -------------------------------------------------

    def order(self):
        """Least exponent carrying a nonzero coefficient.

        Returns ``math.inf`` for the exact zero polynomial and ``None``
        (indeterminate) when all known coefficients vanish but terms could
        exist at or beyond the truncation.
        """
        if self.terms:
            return min(self.terms)
        return inf if self.trunc is None else None

    def order_floor(self):
        """Best known lower bound for the order (``inf`` for exact zero)."""
        if self.terms:
            return min(self.terms)
        return inf if self.trunc is None else self.trunc

    @property
    def is_exact(self) -> bool:
        return self.trunc is None

    def is_zero(self) -> bool:
        """True only for the exact zero polynomial."""
        return not self.terms and self.trunc is None

    def coefficient(self, exponent: int) -> Fraction:
        if self.trunc is not None and exponent >= self.trunc:
            raise IndeterminateOrderError(
                f"coefficient of t^{exponent} unknown beyond truncation {self.trunc}"
            )
        return self.terms.get(exponent, Fraction(0))

    def truncate(self, trunc: int | None) -> "TruncatedSeries":
        """Forget coefficients at or beyond ``trunc``."""
        t = _min_trunc(self.trunc, trunc)
        if t == self.trunc:
            return self
        return TruncatedSeries(self.terms, t)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        t = _min_trunc(self.trunc, other.trunc)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return TruncatedSeries(terms, t)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries({k: -c for k, c in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                # Scalar annihilation yields the exact zero polynomial.
                return TruncatedSeries({}, None)
            return TruncatedSeries({k: c * other for k, c in self.terms.items()}, self.trunc)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return TruncatedSeries({}, None)
        bounds = []
        if self.trunc is not None:
            bounds.append(self.trunc + other.order_floor())
        if other.trunc is not None:
            bounds.append(other.trunc + self.order_floor())
        t = min(bounds) if bounds else None
        terms: dict[int, Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                if t is None or k < t:
                    terms[k] = terms.get(k, Fraction(0)) + c1 * c2
        return TruncatedSeries(terms, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = TruncatedSeries.one(self.trunc)
        for _ in range(n):
            result = result * self
        return result

    def derivative(self) -> "TruncatedSeries":
        """Termwise d/dt; the truncation drops by one."""
        t = None if self.trunc is None else max(self.trunc - 1, 0)
        return TruncatedSeries({k - 1: k * c for k, c in self.terms.items() if k >= 1}, t)

    def div(self, other: "TruncatedSeries", cap: int | None = None) -> "TruncatedSeries":
        """Exact quotient self/other.

        Requires ``order(other)`` finite and ``<= order(self)``.  The result
        is valid to ``min(self.trunc, other.trunc) - order(other)``.  When
        both operands are exact but the quotient does not terminate, ``cap``
        supplies the working precision for the result.
        """
        m = other.order()
        if m is None:
            raise IndeterminateOrderError(
                "divisor order unresolved within truncation "
                f"O(t^{other.trunc})"
            )
        if m is inf:
            raise DivisionOrderError("division by the zero series")
        if self.terms and min(self.terms) < m:
            raise DivisionOrderError(
                f"quotient would have negative order ({min(self.terms)} < {m})"
            )
        if not self.terms:
            if self.trunc is None:
                return TruncatedSeries({}, None)
            if self.trunc < m:
                raise IndeterminateOrderError(
                    "dividend order unresolved within truncation "
                    f"O(t^{self.trunc})"
                )
        t = _min_trunc(self.trunc, other.trunc)
        if t is not None:
            return self._long_div(other, m, t - m)
        # Both operands exact.  A monomial divisor gives an exact quotient;
        # otherwise try terminating long division and fall back to cap.
        if len(other.terms) == 1:
            c0 = other.terms[m]
            return TruncatedSeries({k - m: c / c0 for k, c in self.terms.items()}, None)
        if not self.terms:
            return TruncatedSeries({}, None)
        limit = max(self.terms) - m + 1
        q = self._long_div(other, m, limit)
        exact = TruncatedSeries(q.terms, None)
        if other * exact == self:
            return exact
        if cap is None:
            raise TruncationTooSmallError(
                "quotient of exact series does not terminate; supply a working precision"
            )
        return self._long_div(other, m, cap)

    def _long_div(self, other: "TruncatedSeries", m: int, length: int) -> "TruncatedSeries":
        # Coefficient recurrence for self = other * q with ord(other) = m.
        length = max(length, 0)
        g0 = other.terms[m]
        g = {k - m: c for k, c in other.terms.items() if k - m < length}
        f = {k - m: c for k, c in self.terms.items() if k - m < length}
        q: dict[int, Fraction] = {}
        for j in range(length):
            acc = f.get(j, Fraction(0))
            for i, qi in q.items():
                gj = g.get(j - i)
                if gj is not None:
                    acc -= qi * gj
            if acc:
                q[j] = acc / g0
        return TruncatedSeries(q, length)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("scalar division by zero")
            return self * (Fraction(1) / Fraction(other))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.div(other)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """Substitution self(inner(t)); ``inner`` must vanish at the origin."""
        s_floor = inner.order_floor()
        if inner.terms and min(inner.terms) == 0:
            raise CompositionOrderError("inner series has a nonzero constant term")
        if s_floor == 0:
            raise IndeterminateOrderError(
                "inner series unknown at order 0; increase its truncation"
            )
        if inner.is_zero():
            c0 = self.terms.get(0, Fraction(0))
            if self.trunc == 0:
                raise IndeterminateOrderError("constant term unknown")
            return TruncatedSeries({0: c0}, None)
        bounds = []
        if self.trunc is not None:
            bounds.append(self.trunc * s_floor)
        if inner.trunc is not None:
            bounds.append(inner.trunc)
        t = min(bounds) if bounds else None
        result = TruncatedSeries({}, t)
        power = TruncatedSeries.one(t)
        top = max(self.terms, default=-1)
        for k in range(top + 1):
            c = self.terms.get(k)
            if c:
                result = result + power * c
            if k < top:
                power = (power * inner).truncate(t)
                if not power.terms and (t is not None and power.order_floor() >= t):
                    break
        return result

    def unit_root(self, n: int, cap: int | None = None) -> "TruncatedSeries":
        """The n-th root with constant term one, via the binomial series.

        Requires constant term exactly one.  ``cap`` bounds the result when
        the input is exact but the root does not terminate.
        """
        if n < 1:
            raise ValueError("root index must be positive")
        if self.terms.get(0) != 1:
            raise NotUnitError("series must have constant term 1")
        u = self - TruncatedSeries.one(self.trunc)
        if u.is_zero():
            return TruncatedSeries.one(self.trunc)
        t = self.trunc
        if t is None:
            if cap is None:
                raise TruncationTooSmallError(
                    "root of exact series does not terminate; supply a working precision"
                )
            t = cap
        alpha = Fraction(1, n)
        result = TruncatedSeries.one(t)
        upow = TruncatedSeries.one(t)
        binom = Fraction(1)
        for j in range(1, t):
            upow = (upow * u).truncate(t)
            if not upow.terms:
                break
            binom *= (alpha - (j - 1)) / j
            result = result + upow * binom
        return result

    # -- value semantics -----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.terms == other.terms and self.trunc == other.trunc

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.trunc))

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        """Equality of all coefficients below the common truncation."""
        t = _min_trunc(self.trunc, other.trunc)
        a = {k: c for k, c in self.terms.items() if t is None or k < t}
        b = {k: c for k, c in other.terms.items() if t is None or k < t}
        return a == b

    # -- formatting ----------------------------------------------------------

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        tail = "" if self.trunc is None else f" + O(t^{self.trunc})"
        return f"<series {format_series(self)}{tail}>"


def _coerce(value):
    if isinstance(value, TruncatedSeries):
        return value
    if isinstance(value, (int, Fraction)):
        return TruncatedSeries({0: value}, None)
    return NotImplemented


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"({c.numerator}/{c.denominator})"


def format_series(f: TruncatedSeries) -> str:
    """Render in the curve-expression grammar; parsing the result round-trips."""
    if not f.terms:
        return "0"
    parts: list[str] = []
    for k in sorted(f.terms):
        c = f.terms[k]
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if k == 0:
            body = _format_coeff(c)
        elif c == 1:
            body = "t" if k == 1 else f"t^{k}"
        else:
            body = f"{_format_coeff(c)}*t" + ("" if k == 1 else f"^{k}")
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


def default_truncation(max_exponent: int) -> int:
    """Default working precision for a germ whose largest exponent is given."""
    return max(DEFAULT_TRUNC_FACTOR * max_exponent, 4)
