"""Conjectured closed-form Milnor numbers for RVT codes, and the harness
that cross-validates them against the semigroup oracle.

The two closed forms cover a single block ``R^s V^k T^u`` and chains of
single-V segments ``R^s1 V T^u1 ... R^sn V T^un``.  They are conjectural:
the harness searches for a witness curve realizing the code, computes its
Milnor number independently through the Puiseux characteristic and the
semigroup gap count, and reports agreement as data, never assuming it.
"""

from __future__ import annotations

import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass
from math import gcd

from .codes import RVTCode, validate_planar
from .curves import PlaneCurveGerm, milnor_oracle, puiseux_characteristic
from .errors import (
    IndeterminateOrderError,
    InvalidCodeError,
    MalformedChainError,
    SearchExhaustedError,
    TruncationTooSmallError,
    UnsupportedCodeError,
)
from .prolong import init, step
from .series import default_truncation


def fibonacci(n: int) -> int:
    """F(1) = F(2) = 1, F(n) = F(n-1) + F(n-2)."""
    if n < 1:
        raise ValueError("Fibonacci index must be positive")
    return _fib(n)


def _fib(n: int) -> int:
    # Extended with F(0) = 0 so block evaluation at k = 0 stays total.
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def _choose2(a: int) -> int:
    return a * (a - 1) // 2


@dataclass(frozen=True)
class BlockCode:
    """The word ``R^r V^v T^t`` (counts may be zero)."""

    r_count: int
    v_count: int
    t_count: int

    def __post_init__(self):
        if min(self.r_count, self.v_count, self.t_count) < 0:
            raise InvalidCodeError("block counts must be non-negative")

    @property
    def is_grammatical(self) -> bool:
        return self.r_count >= 1 and (self.t_count == 0 or self.v_count >= 1)

    def letters(self) -> tuple[str, ...]:
        return ("R",) * self.r_count + ("V",) * self.v_count + ("T",) * self.t_count

    @classmethod
    def from_letters(cls, letters) -> "BlockCode | None":
        word = "".join(letters)
        r = len(word) - len(word.lstrip("R"))
        rest = word[r:]
        v = len(rest) - len(rest.lstrip("V"))
        rest = rest[v:]
        t = len(rest) - len(rest.lstrip("T"))
        if rest[t:]:
            return None
        return cls(r, v, t)


def milnor_block(block: BlockCode) -> int:
    """Closed-form Milnor number of a single ``R^s V^k T^u`` block."""
    s, k, u = block.r_count, block.v_count, block.t_count
    half = (
        _choose2(_fib(k + 2)) * (2 + 2 * u)
        - _choose2(_fib(k + 1)) * u
        + _choose2(_fib(k + 2) + _fib(k) * u) * (s - 2)
        + _fib(k) * _fib(k + 2) * (u * (u + 1) // 2)
        + sum(_choose2(_fib(j + 2)) for j in range(1, k))
    )
    return 2 * half


@dataclass(frozen=True)
class ChainCode:
    """Concatenation of segments ``R^s V T^u`` with s, u >= 1."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(s), int(u)) for s, u in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise MalformedChainError("chain must have at least one segment")
        if any(s < 1 or u < 1 for s, u in pairs):
            raise MalformedChainError("segment counts must be positive")

    def letters(self) -> tuple[str, ...]:
        out: list[str] = []
        for s, u in self.pairs:
            out.extend(["R"] * s + ["V"] + ["T"] * u)
        return tuple(out)

    @classmethod
    def from_letters(cls, letters) -> "ChainCode | None":
        word = "".join(letters)
        pairs: list[tuple[int, int]] = []
        i = 0
        while i < len(word):
            s = 0
            while i < len(word) and word[i] == "R":
                s += 1
                i += 1
            if s == 0 or i >= len(word) or word[i] != "V":
                return None
            i += 1
            u = 0
            while i < len(word) and word[i] == "T":
                u += 1
                i += 1
            if u == 0:
                return None
            pairs.append((s, u))
        if not pairs:
            return None
        return cls(tuple(pairs))


def milnor_chain(chain: ChainCode) -> int:
    """Closed-form Milnor number of a single-V chain."""
    pairs = chain.pairs
    n = len(pairs)
    suffix = [1] * (n + 1)
    for j in range(n - 1, -1, -1):
        suffix[j] = suffix[j + 1] * (pairs[j][1] + 2)
    half = _choose2(suffix[0]) * pairs[0][0]
    for j in range(1, n):
        half += _choose2(suffix[j]) * (pairs[j][0] + pairs[j - 1][1] + 1)
    return 2 * half


# -- witness search ----------------------------------------------------------


@dataclass(frozen=True)
class SearchBounds:
    """Exponent limits for witness curves ``(t^a, t^b)`` / ``(t^a, t^b + t^c)``."""

    max_lead: int = 40
    max_exp: int = 400


# How often a candidate trace may retry with doubled precision before the
# truncation failure is propagated.
_MAX_PRECISION_RETRIES = 2


def _code_of_candidate(exponents: tuple[int, ...], letters: tuple[str, ...]) -> bool:
    """Prolong the candidate and compare letters, aborting at a mismatch."""
    a, ys = exponents[0], exponents[1:]
    # Start below the default working precision; the retry ladder doubles it
    # when an order comes out indeterminate, so a small start is sound.
    precision = 2 * max(exponents) + 16
    for _ in range(_MAX_PRECISION_RETRIES + 1):
        try:
            germ = PlaneCurveGerm.from_exponents(a, ys)
            state = init(germ, precision=precision)
            if state.letters[0] != letters[0]:
                return False
            for i in range(1, len(letters)):
                state = step(state)
                if state.letters[-1] != letters[i]:
                    return False
            return True
        except (IndeterminateOrderError, TruncationTooSmallError):
            precision *= 2
    raise TruncationTooSmallError(
        f"candidate {exponents} undecidable", suggested_trunc=precision
    )


def _leading_r_run(letters: tuple[str, ...]) -> int:
    run = 0
    for w in letters:
        if w != "R":
            break
        run += 1
    return run


def _first_v_prefilter(a: int, b: int, target_run: int) -> bool:
    """Cheap necessary condition on the position of the first V letter.

    During the initial R-run the fiber derivative order decreases by the
    lead exponent at each level, so the first V sits at level
    ``other // lead + 1`` whenever ``lead`` does not divide ``other`` --
    independently of any further y term.  Returns False when the candidate
    provably cannot start with ``R^target_run V``; True means undecided.
    """
    lead, other = min(a, b), max(a, b)
    if lead == 1:
        return False  # smooth lead: the trace never produces a V
    if other % lead == 0:
        return True  # a constant coordinate appears; later terms decide
    return other // lead + 1 == target_run + 1


def _scan_lead(a: int, letters: tuple[str, ...], bounds: SearchBounds):
    """First matching candidate with leading exponent ``a``.

    One-term candidates ``(a, b)`` are swept before any two-term candidate
    ``(a, b, c)``; within each family the sweep is lexicographic.
    """
    target_run = _leading_r_run(letters)
    for b in range(1, bounds.max_exp + 1):
        if b == a or gcd(a, b) != 1:
            continue
        if not _first_v_prefilter(a, b, target_run):
            continue
        if _code_of_candidate((a, b), letters):
            return (a, b)
    for b in range(1, bounds.max_exp + 1):
        if not _first_v_prefilter(a, b, target_run):
            continue
        for c in range(b + 1, bounds.max_exp + 1):
            if gcd(gcd(a, b), c) == 1 and _code_of_candidate((a, b, c), letters):
                return (a, b, c)
    return None


def find_curve_for_code(
    code: RVTCode,
    bounds: SearchBounds = SearchBounds(),
    workers: int = 1,
) -> PlaneCurveGerm:
    """Least one- or two-term curve realizing the code.

    Leading exponents are swept in increasing order; for each, one-term
    candidates ``(a, b)`` precede every two-term candidate ``(a, b, c)``,
    lexicographically within each family.  The scan over leading exponents
    may be partitioned across worker processes, with results reduced in
    order so the outcome is independent of the partitioning.
    """
    if code.tower != "planar":
        raise InvalidCodeError("witness search is defined for planar codes")
    check = validate_planar(code.letters)
    if not check.ok:
        raise InvalidCodeError(
            f"code violates the planar grammar at index {check.violation_index}"
        )
    if code.letters[-1] not in ("V", "T"):
        raise InvalidCodeError("only codes ending in V or T correspond to singular curves")
    letters = tuple(code.letters)
    # a = 1 never matches: the independent coordinate then has derivative
    # order 0 at every level, so no V can occur.
    leads = range(2, bounds.max_lead + 1)
    hit = None
    if workers <= 1:
        for a in leads:
            hit = _scan_lead(a, letters, bounds)
            if hit:
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {a: pool.submit(_scan_lead, a, letters, bounds) for a in leads}
            for a in leads:
                hit = futures[a].result()
                if hit:
                    for other in futures.values():
                        other.cancel()
                    break
    if hit is None:
        raise SearchExhaustedError(
            f"no witness for {code} with lead <= {bounds.max_lead}, "
            f"exponents <= {bounds.max_exp}"
        )
    return PlaneCurveGerm.from_exponents(hit[0], hit[1:])


# -- cross-validation --------------------------------------------------------


@dataclass(frozen=True)
class CrossValidationReport:
    code: str
    formula_mu: int
    oracle_mu: int | None
    witness: PlaneCurveGerm | None
    agree: bool | None
    search_bounds: SearchBounds
    elapsed_ms: int

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "formula_mu": self.formula_mu,
            "oracle_mu": self.oracle_mu,
            "witness": None
            if self.witness is None
            else {"x": str(self.witness.x), "y": str(self.witness.y)},
            "agree": self.agree,
            "search_bounds": {
                "max_lead": self.search_bounds.max_lead,
                "max_exp": self.search_bounds.max_exp,
            },
            "elapsed_ms": self.elapsed_ms,
        }


def formula_milnor(code: RVTCode) -> int:
    """Closed-form prediction for a block- or chain-shaped code."""
    block = BlockCode.from_letters(code.letters)
    chain = ChainCode.from_letters(code.letters)
    if block is None and chain is None:
        raise UnsupportedCodeError(
            f"{code} is neither a single block nor a single-V chain"
        )
    if block is not None and chain is not None:
        b, c = milnor_block(block), milnor_chain(chain)
        assert b == c, "block and chain formulas disagree on their overlap"
        return b
    return milnor_block(block) if block is not None else milnor_chain(chain)


def cross_validate(
    code: RVTCode,
    bounds: SearchBounds = SearchBounds(),
    workers: int = 1,
) -> CrossValidationReport:
    """Compare the closed form against the semigroup oracle on a witness.

    A missing witness yields an inconclusive report (oracle and agreement
    ``None``); a disagreement is a first-class experimental result and is
    reported, not raised.
    """
    start = time.perf_counter()
    formula = formula_milnor(code)
    witness = None
    oracle = None
    agree = None
    try:
        witness = find_curve_for_code(code, bounds, workers)
    except SearchExhaustedError:
        pass
    if witness is not None:
        oracle = milnor_oracle(puiseux_characteristic(witness))
        agree = oracle == formula
    elapsed_ms = int((time.perf_counter() - start) * 1000)
    return CrossValidationReport(
        code=str(code),
        formula_mu=formula,
        oracle_mu=oracle,
        witness=witness,
        agree=agree,
        search_bounds=bounds,
        elapsed_ms=elapsed_ms,
    )
