"""Plane curve germs and their classical branch invariants.

Everything here works on a single analytic branch given parametrically as
``(x(t), y(t))`` with ``x(0) = y(0) = 0``.  The Milnor number is obtained
through the semigroup delta invariant (``mu = 2*delta`` for one branch),
which keeps the route independent of the closed-form predictions it is used
to audit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, inf

from .errors import (
    ConstantTermError,
    IndeterminateOrderError,
    InvalidCharacteristicError,
    NotNormalizedError,
    NotWellParametrizedError,
    SwapRequiredError,
    TruncationTooSmallError,
)
from .series import TruncatedSeries, default_truncation


@dataclass(frozen=True)
class PlaneCurveGerm:
    """A parametrized analytic germ ``t -> (x(t), y(t))`` through the origin."""

    x: TruncatedSeries
    y: TruncatedSeries

    def __post_init__(self):
        for name, coord in (("x", self.x), ("y", self.y)):
            if 0 in coord.terms:
                raise ConstantTermError(f"coordinate {name} has a nonzero constant term")
        if self.x.order() is None and self.y.order() is None:
            raise IndeterminateOrderError(
                "both coordinate orders are unknown; increase the truncation"
            )
        if self.x.is_zero() and self.y.is_zero():
            raise ValueError("degenerate germ (0, 0)")

    @classmethod
    def from_exponents(cls, x_exponent: int, y_exponents) -> "PlaneCurveGerm":
        """Exact germ ``(t^a, sum of unit monomials)`` used by tests and search."""
        x = TruncatedSeries.monomial(x_exponent)
        y = TruncatedSeries({e: 1 for e in y_exponents})
        return cls(x, y)

    def swap(self) -> "PlaneCurveGerm":
        return PlaneCurveGerm(self.y, self.x)

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.x.terms) | set(self.y.terms)))

    def max_exponent(self) -> int:
        return max(self.support(), default=1)

    def __str__(self):
        return f"{self.x}, {self.y}"


def default_precision(c: PlaneCurveGerm) -> int:
    return default_truncation(c.max_exponent())


def multiplicity(c: PlaneCurveGerm) -> int:
    """Minimum vanishing order of the two coordinates."""
    orders = [c.x.order(), c.y.order()]
    known = [o for o in orders if o is not None]
    m = min(known)
    for coord, o in ((c.x, orders[0]), (c.y, orders[1])):
        if o is None and coord.trunc <= m:
            raise IndeterminateOrderError(
                "multiplicity unresolved within truncation "
                f"O(t^{coord.trunc})"
            )
    if m is inf:  # pragma: no cover - excluded by the germ invariant
        raise ValueError("degenerate germ")
    return m


def is_well_parametrized(c: PlaneCurveGerm) -> bool:
    """True when the gcd of all support exponents equals one.

    For exact (polynomial) germs this is the exact notion; for truncated
    germs it is decided on the visible window.
    """
    if c.x.order() is None or c.y.order() is None:
        raise IndeterminateOrderError("coordinate order unresolved within truncation")
    g = 0
    for e in c.support():
        g = gcd(g, e)
    return g == 1


def normalize(c: PlaneCurveGerm, precision: int | None = None) -> PlaneCurveGerm:
    """Reparametrize so the dominant coordinate becomes exactly ``t^m``.

    Steps: rescale ``x`` to leading coefficient one (a linear coordinate
    change; the characteristic only depends on the divisibility structure of
    the support, which scaling preserves), factor ``x = t^m * u`` with
    ``u(0) = 1``, and substitute the inverse of ``phi(t) = t * u(t)^(1/m)``,
    so that ``x(sigma(s)) = s^m`` holds to the working precision.
    """
    ox, oy = c.x.order(), c.y.order()
    if ox is None or oy is None:
        raise IndeterminateOrderError("coordinate order unresolved within truncation")
    if oy < ox:
        raise SwapRequiredError("second coordinate dominates; swap coordinates first")
    if not is_well_parametrized(c):
        raise NotWellParametrizedError(
            "support exponents share a common factor; the germ is a reparametrization"
        )
    m = ox
    lead = c.x.terms[m]
    x1 = c.x * (Fraction(1) / lead)
    if x1.terms == {m: Fraction(1)}:
        return PlaneCurveGerm(x1, c.y)
    cap = precision if precision is not None else default_precision(c)
    unit = x1.div(TruncatedSeries.monomial(m), cap=cap)
    root = unit.unit_root(m, cap=cap)
    phi = TruncatedSeries.monomial(1) * root
    sigma = _invert_composition(phi, cap)
    y_hat = c.y.compose(sigma)
    x_hat = TruncatedSeries.monomial(m, 1, trunc=sigma.trunc + m - 1)
    check = x1.compose(sigma) - x_hat
    assert not check.terms, "reparametrization failed to straighten x"
    return PlaneCurveGerm(x_hat, y_hat)


def _invert_composition(phi: TruncatedSeries, precision: int) -> TruncatedSeries:
    """Compositional inverse of ``phi = t*(1 + ...)`` by Newton iteration.

    The iterate is kept as an exact polynomial between steps: Newton doubles
    the number of valid coefficients, so re-reading the computed terms as
    exact data is sound and keeps the truncation bookkeeping from stalling.
    """
    dphi = phi.derivative()
    sigma = TruncatedSeries.monomial(1)
    prec = 2
    while prec < precision:
        prec = min(2 * prec, precision)
        residual = phi.truncate(prec).compose(sigma) - TruncatedSeries.monomial(1, trunc=prec)
        if residual.terms:
            update = residual.div(dphi.truncate(prec).compose(sigma), cap=prec)
            corrected = sigma - update
            sigma = TruncatedSeries(corrected.terms, None)
    final = phi.truncate(precision).compose(sigma) - TruncatedSeries.monomial(1, trunc=precision)
    assert not final.terms, "inverse composition did not converge"
    return sigma.truncate(precision)


@dataclass(frozen=True)
class PuiseuxCharacteristic:
    """The characteristic exponents ``[lambda_0; lambda_1, ..., lambda_g]``
    together with their gcd chain ``e_0 > e_1 > ... > e_g = 1``."""

    exponents: tuple[int, ...]
    gcd_chain: tuple[int, ...] = ()

    def __post_init__(self):
        lam = tuple(int(v) for v in self.exponents)
        if not lam or any(v < 1 for v in lam):
            raise InvalidCharacteristicError("exponents must be positive integers")
        chain = [lam[0]]
        for v in lam[1:]:
            chain.append(gcd(chain[-1], v))
        object.__setattr__(self, "exponents", lam)
        object.__setattr__(self, "gcd_chain", tuple(chain))
        if chain[-1] != 1:
            raise InvalidCharacteristicError(f"gcd chain ends at {chain[-1]}, not 1")
        for a, b in zip(lam, lam[1:]):
            if b <= a:
                raise InvalidCharacteristicError("exponents must increase strictly")
        for a, b in zip(chain, chain[1:]):
            if b >= a:
                raise InvalidCharacteristicError(
                    "gcd chain must decrease strictly (each e_j must not divide the next exponent)"
                )

    @property
    def genus(self) -> int:
        return len(self.exponents) - 1

    @property
    def multiplicity(self) -> int:
        return self.exponents[0]

    def __str__(self):
        head, *tail = self.exponents
        return f"[{head}]" if not tail else f"[{head}; " + ", ".join(map(str, tail)) + "]"


def puiseux_characteristic(c: PlaneCurveGerm) -> PuiseuxCharacteristic:
    """Characteristic exponents of a normalized germ ``(t^m, y(t))``.

    Runs the gcd induction over the support of ``y``: each new exponent is
    the least one not divisible by the current gcd, until the gcd reaches 1.
    """
    m = c.x.order()
    if m is None:
        raise IndeterminateOrderError("x order unresolved within truncation")
    if m is inf or c.x.terms != {m: Fraction(1)}:
        raise NotNormalizedError("first coordinate must be exactly t^m; call normalize")
    if m == 1:
        return PuiseuxCharacteristic((1,))
    if not c.y.terms:
        if c.y.trunc is None:
            raise NotWellParametrizedError(
                f"germ (t^{m}, 0) is a reparametrization of a smooth germ"
            )
        raise TruncationTooSmallError(
            "no visible y terms", suggested_trunc=2 * c.y.trunc
        )
    oy = min(c.y.terms)
    if oy < m:
        raise SwapRequiredError("y has smaller order than x; swap coordinates first")
    exponents = [m]
    e = m
    for k in sorted(c.y.terms):
        if k % e:
            exponents.append(k)
            e = gcd(e, k)
            if e == 1:
                return PuiseuxCharacteristic(tuple(exponents))
    if c.y.trunc is None:
        raise NotWellParametrizedError(
            f"gcd of the support stays {e} > 1; the germ is not well parametrized"
        )
    raise TruncationTooSmallError(
        f"gcd induction stalled at {e} within O(t^{c.y.trunc}) "
        "(not well parametrized, or distinguishing terms lie beyond the truncation)",
        suggested_trunc=2 * c.y.trunc,
    )


@dataclass(frozen=True)
class SemigroupData:
    """Value semigroup of a branch: generators, conductor and gap count."""

    generators: tuple[int, ...]
    conductor: int
    delta: int


def semigroup(pc: PuiseuxCharacteristic) -> SemigroupData:
    """Generators and gap count of the branch semigroup.

    Generators follow the standard recursion
    ``b_{q+1} = (e_{q-1}/e_q) * b_q + lambda_{q+1} - lambda_q``; gaps are
    counted with a boolean sieve up to ``2 * lambda_0 * lambda_g``, which is
    safely beyond the conductor (the sieve certifies this itself).
    """
    lam = pc.exponents
    e = pc.gcd_chain
    gens = [lam[0]]
    if pc.genus >= 1:
        gens.append(lam[1])
        for q in range(1, pc.genus):
            gens.append((e[q - 1] // e[q]) * gens[q] + lam[q + 1] - lam[q])
    if gens == [1]:
        return SemigroupData((1,), 0, 0)
    bound = 2 * lam[0] * lam[-1]
    reachable = bytearray(bound)
    reachable[0] = 1
    for g in gens:
        for i in range(g, bound):
            if reachable[i - g]:
                reachable[i] = 1
    gaps = [i for i in range(bound) if not reachable[i]]
    conductor = gaps[-1] + 1 if gaps else 0
    # The top run certifies the bound: min(gens) consecutive reachable values
    # imply everything beyond is reachable.
    tail = min(gens)
    assert all(reachable[bound - tail:]), "sieve bound too small"
    return SemigroupData(tuple(gens), conductor, len(gaps))


def milnor_oracle(pc: PuiseuxCharacteristic) -> int:
    """Milnor number via the gap count: ``mu = 2 * delta`` for one branch."""
    mu = 2 * semigroup(pc).delta
    if pc.genus == 0:
        assert mu == 0
    elif pc.genus == 1:
        m, n = pc.exponents
        assert mu == (m - 1) * (n - 1), "delta route disagrees with (m-1)(n-1)"
    return mu
