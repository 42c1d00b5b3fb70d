"""Level-by-level Cartan prolongation of a plane curve germ.

Each level appends one chart coordinate (a quotient of derivatives) and one
letter.  With ``v`` the current independent coordinate and ``u`` the current
fiber coordinate, let ``alpha = ord(dv/dt)`` and ``beta = ord(du/dt)``:

* ``beta < alpha``          -> V, new coordinate ``dv/du``, roles swap;
* ``beta > alpha`` at a critical point (previous letter V or T) -> T,
  new coordinate ``du/dv``;
* otherwise                 -> R, new coordinate ``du/dv``.

Only derivative orders enter the decision, so re-centering constant terms is
never needed.  An unresolved order aborts loudly: a silently wrong letter
would corrupt every downstream invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf

from . import codes
from .curves import PlaneCurveGerm, default_precision, is_well_parametrized
from .errors import (
    IndeterminateOrderError,
    NotRegularizedError,
    NotWellParametrizedError,
)
from .series import TruncatedSeries


@dataclass(frozen=True)
class ProlongationStep:
    """Order data behind one emitted letter.

    ``alpha``/``beta`` are the derivative orders of the independent and fiber
    coordinates (``beta`` may be ``inf`` when the fiber coordinate is exactly
    constant); ``swapped`` records a role exchange (V steps, or the initial
    orientation choice).
    """

    alpha: int | float
    beta: int | float
    letter: str
    swapped: bool


@dataclass(frozen=True)
class ProlongationState:
    coords: tuple[TruncatedSeries, ...]
    independent: int
    fiber: int
    letters: tuple[str, ...]
    level: int
    precision: int
    history: tuple[ProlongationStep, ...]

    def multiplicity(self) -> int:
        """One plus the least derivative order over all chart coordinates."""
        return _state_multiplicity(self.coords)


def _deriv_order(coord: TruncatedSeries):
    o = coord.derivative().order()
    if o is None:
        raise IndeterminateOrderError(
            "derivative order unresolved; re-run with a larger truncation"
        )
    return o


def _state_multiplicity(coords) -> int:
    best = inf
    for coord in coords:
        o = _deriv_order(coord)
        if o < best:
            best = o
    if best is inf:
        raise IndeterminateOrderError("all chart coordinates are constant")
    return best + 1


def init(c: PlaneCurveGerm, precision: int | None = None) -> ProlongationState:
    """Level-1 state: adjoin the slope coordinate, letter R.

    The slope is ``dy/dx`` when the x-derivative dominates, else ``dx/dy``
    with the roles exchanged; level-1 points are always regular.
    """
    if not is_well_parametrized(c):
        raise NotWellParametrizedError(
            "support exponents share a common factor; prolongation undefined"
        )
    cap = precision if precision is not None else default_precision(c)
    dx, dy = c.x.derivative(), c.y.derivative()
    a, b = dx.order(), dy.order()
    if a is None or b is None:
        raise IndeterminateOrderError("coordinate derivative order unresolved")
    if a <= b:
        slope = dy.div(dx, cap=cap)
        independent, swapped = 0, False
        alpha, beta = a, b
    else:
        slope = dx.div(dy, cap=cap)
        independent, swapped = 1, True
        alpha, beta = b, a
    step0 = ProlongationStep(alpha, beta, "R", swapped)
    return ProlongationState(
        coords=(c.x, c.y, slope),
        independent=independent,
        fiber=2,
        letters=("R",),
        level=1,
        precision=cap,
        history=(step0,),
    )


def step(state: ProlongationState) -> ProlongationState:
    """Prolong one level, appending a coordinate and a letter."""
    v = state.coords[state.independent]
    u = state.coords[state.fiber]
    dv, du = v.derivative(), u.derivative()
    alpha, beta = dv.order(), du.order()
    if alpha is None or beta is None:
        raise IndeterminateOrderError(
            "derivative order unresolved at level "
            f"{state.level}; re-run with a larger truncation"
        )
    critical = state.letters[-1] in ("V", "T")
    if beta < alpha:
        letter, swapped = "V", True
        new_coord = dv.div(du, cap=state.precision)
        independent, fiber = state.fiber, len(state.coords)
    else:
        swapped = False
        letter = "T" if critical and beta > alpha else "R"
        new_coord = du.div(dv, cap=state.precision)
        independent, fiber = state.independent, len(state.coords)
    rec = ProlongationStep(alpha, beta, letter, swapped)
    return ProlongationState(
        coords=state.coords + (new_coord,),
        independent=independent,
        fiber=fiber,
        letters=state.letters + (letter,),
        level=state.level + 1,
        precision=state.precision,
        history=state.history + (rec,),
    )


def states(c: PlaneCurveGerm, depth: int, precision: int | None = None):
    """Yield the states at levels 1..depth."""
    if depth < 1:
        raise ValueError("depth must be positive")
    s = init(c, precision)
    yield s
    for _ in range(depth - 1):
        s = step(s)
        yield s


def rvt_code(c: PlaneCurveGerm, depth: int, precision: int | None = None) -> "codes.RVTCode":
    """The letter word of levels 1..depth."""
    s = None
    for s in states(c, depth, precision):
        pass
    word = codes.RVTCode(s.letters, tower="planar")
    check = codes.validate_planar(word.letters)
    assert check.ok, f"emitted code {word} violates the planar grammar"
    return word


def multiplicity_sequence(
    c: PlaneCurveGerm, depth: int, precision: int | None = None
) -> tuple[int, ...]:
    """Multiplicities of the germ and its prolongations at levels 0..depth."""
    seq = [_state_multiplicity((c.x, c.y))]
    for s in states(c, depth, precision):
        seq.append(s.multiplicity())
    return tuple(seq)


@dataclass(frozen=True)
class RegularizationResult:
    level: int
    letters: tuple[str, ...]


# A regular level must stay regular; we ask for this many R letters beyond it.
STABLE_WINDOW = 3


def regularization_level(
    c: PlaneCurveGerm, max_depth: int = 32, precision: int | None = None
) -> RegularizationResult:
    """Least level where the prolonged curve is immersed and stays regular.

    Detects the first level ``l`` with multiplicity one whose next
    ``STABLE_WINDOW`` letters are all R (the all-R tail exists by the
    regularization theorem, but no a priori bound is available, so a
    lookahead window is used as the stopping heuristic).
    """
    if max_depth < 1 + STABLE_WINDOW:
        raise ValueError("max_depth too small for the lookahead window")
    mults: list[int] = []
    letters: list[str] = []
    candidate = None
    for s in states(c, max_depth, precision):
        mults.append(s.multiplicity())
        letters.append(s.letters[-1])
        level = s.level
        if candidate is None and mults[-1] == 1:
            candidate = level
        if candidate is not None and level >= candidate + STABLE_WINDOW:
            window = letters[candidate : candidate + STABLE_WINDOW]
            if all(w == "R" for w in window):
                return RegularizationResult(candidate, tuple(letters[: candidate + STABLE_WINDOW]))
            # Window failed: restart from the next immersed level.
            candidate = next(
                (
                    lvl
                    for lvl in range(candidate + 1, level + 1)
                    if mults[lvl - 1] == 1
                ),
                None,
            )
    raise NotRegularizedError(
        f"no stable regular level within depth {max_depth}; increase max_depth"
    )
