"""RVT words, spelling grammars, code census, and vector invariants."""

from __future__ import annotations

from dataclasses import dataclass

from .curves import PuiseuxCharacteristic
from .errors import InvalidCodeError, MalformedVectorError, ParseError

PLANAR_ALPHABET = ("R", "V", "T")
SPATIAL_ALPHABET = ("R", "V", "T1", "T2", "L1", "L2", "L3")

# Letters allowed after each letter.  In the spatial rules the undecorated
# T and L mean T1 and L1; the broader reading that also admits L2/L3 after
# V and T1 stays switchable so census numbers can be compared.
PLANAR_SUCCESSORS = {
    "R": {"R", "V"},
    "V": {"R", "V", "T"},
    "T": {"R", "V", "T"},
}

def spatial_successors(broad_l_after_v: bool = False) -> dict[str, set[str]]:
    after_v = {"R", "V", "T1", "L1"}
    if broad_l_after_v:
        after_v = after_v | {"L2", "L3"}
    after_l = set(SPATIAL_ALPHABET)
    return {
        "R": {"R", "V"},
        "V": set(after_v),
        "T1": set(after_v),
        "T2": {"R", "V", "T2", "L3"},
        "L1": set(after_l),
        "L2": set(after_l),
        "L3": set(after_l),
    }


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violation_index: int | None = None

    def __bool__(self):
        return self.ok


def _validate(letters, alphabet, successors) -> ValidationResult:
    letters = tuple(letters)
    if not letters:
        return ValidationResult(False, 0)
    if letters[0] != "R":
        return ValidationResult(False, 0)
    for i, w in enumerate(letters):
        if w not in alphabet:
            return ValidationResult(False, i)
        if i and letters[i] not in successors[letters[i - 1]]:
            return ValidationResult(False, i)
    return ValidationResult(True)


def validate_planar(letters) -> ValidationResult:
    """Planar spelling: starts with R, and T never directly follows R."""
    return _validate(letters, PLANAR_ALPHABET, PLANAR_SUCCESSORS)


def validate_spatial(letters, broad_l_after_v: bool = False) -> ValidationResult:
    """Spatial spelling over {R, V, T1, T2, L1, L2, L3}."""
    return _validate(letters, SPATIAL_ALPHABET, spatial_successors(broad_l_after_v))


@dataclass(frozen=True)
class RVTCode:
    """A word over the planar or spatial alphabet."""

    letters: tuple[str, ...]
    tower: str = "planar"

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if self.tower not in ("planar", "spatial"):
            raise InvalidCodeError(f"unknown tower {self.tower!r}")
        alphabet = PLANAR_ALPHABET if self.tower == "planar" else SPATIAL_ALPHABET
        for i, w in enumerate(letters):
            if w not in alphabet:
                raise InvalidCodeError(f"letter {w!r} not in the {self.tower} alphabet (index {i})")
        if not letters:
            raise InvalidCodeError("empty code")

    @property
    def is_grammatical(self) -> bool:
        return bool(self.validate())

    def validate(self, broad_l_after_v: bool = False) -> ValidationResult:
        if self.tower == "planar":
            return validate_planar(self.letters)
        return validate_spatial(self.letters, broad_l_after_v)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        out = []
        i = 0
        while i < len(self.letters):
            j = i
            while j < len(self.letters) and self.letters[j] == self.letters[i]:
                j += 1
            run = j - i
            out.append(self.letters[i] if run == 1 else f"{self.letters[i]}^{run}")
            i = j
        return "".join(out)


_SPATIAL_ONLY = {"T1", "T2", "L1", "L2", "L3"}


def parse_code(text: str, tower: str | None = None) -> RVTCode:
    """Parse a code string such as ``R^3V^5T^2`` or ``R V L1 T2 L3``.

    Repetition ``^n`` applies to the preceding letter; whitespace is
    ignored.  The tower is inferred from the alphabet unless given; bare
    ``T``/``L`` are rejected in spatial context with a hint.
    """
    raw: list[str] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in ("T", "L") and i + 1 < n and text[i + 1] in "123":
            letter = text[i : i + 2]
            i += 2
        elif ch in ("R", "V", "T", "L"):
            letter = ch
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r} in code", position=i)
        count = 1
        if i < n and text[i] == "^":
            i += 1
            start = i
            while i < n and text[i].isdigit():
                i += 1
            if start == i:
                raise ParseError("expected a repetition count after '^'", position=start)
            count = int(text[start:i])
            if count < 1:
                raise ParseError("repetition count must be positive", position=start)
        raw.extend([letter] * count)
    if not raw:
        raise ParseError("empty code")
    uses_spatial = any(w in _SPATIAL_ONLY for w in raw)
    if tower is None:
        tower = "spatial" if uses_spatial else "planar"
        if uses_spatial and any(w in ("T", "L") for w in raw):
            raise InvalidCodeError(
                "bare T/L is ambiguous alongside spatial letters; write T1/L1"
            )
    if tower == "spatial" and any(w in ("T", "L") for w in raw):
        raise InvalidCodeError("spatial codes must spell T1/L1 explicitly")
    if tower == "planar" and any(w == "L" for w in raw):
        raise InvalidCodeError("letter L belongs to the spatial alphabet")
    return RVTCode(tuple(raw), tower)


def enumerate_codes(level: int, tower: str = "planar", broad_l_after_v: bool = False):
    """Yield every grammatical word of the given length (small levels only)."""
    if level < 1:
        raise ValueError("level must be positive")
    succ = PLANAR_SUCCESSORS if tower == "planar" else spatial_successors(broad_l_after_v)
    order = PLANAR_ALPHABET if tower == "planar" else SPATIAL_ALPHABET

    def extend(word):
        if len(word) == level:
            yield word
            return
        for w in order:
            if w in succ[word[-1]]:
                yield from extend(word + (w,))

    yield from extend(("R",))


def _mat_mul(a, b):
    n = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def _mat_pow(m, e):
    n = len(m)
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    while e:
        if e & 1:
            result = _mat_mul(result, m)
        m = _mat_mul(m, m)
        e >>= 1
    return result


def transfer_matrix(tower: str = "planar", broad_l_after_v: bool = False):
    """Adjacency matrix of the letter-successor grammar (exact integers)."""
    order = PLANAR_ALPHABET if tower == "planar" else SPATIAL_ALPHABET
    succ = PLANAR_SUCCESSORS if tower == "planar" else spatial_successors(broad_l_after_v)
    return [[int(b in succ[a]) for b in order] for a in order]


def count_codes(level: int, tower: str = "planar", broad_l_after_v: bool = False) -> int:
    """Number of grammatical words of the given length, by matrix power.

    Levels up to 8 are cross-checked against exhaustive enumeration on
    every call; the check is cheap and guards the matrix construction.
    """
    if level < 1:
        raise ValueError("level must be positive")
    order = PLANAR_ALPHABET if tower == "planar" else SPATIAL_ALPHABET
    m = transfer_matrix(tower, broad_l_after_v)
    power = _mat_pow(m, level - 1)
    start = order.index("R")
    total = sum(power[start])
    if level <= 8:
        brute = sum(1 for _ in enumerate_codes(level, tower, broad_l_after_v))
        assert total == brute, f"matrix count {total} != enumeration {brute}"
    return total


@dataclass(frozen=True)
class SmallGrowthVector:
    """Dimension sequence of the bracket flag: starts at 2, steps by 0 or 1."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(v) for v in self.dims)
        object.__setattr__(self, "dims", dims)
        if not dims or dims[0] != 2:
            raise MalformedVectorError("small growth vector must start at 2")
        for a, b in zip(dims, dims[1:]):
            if b - a not in (0, 1):
                raise MalformedVectorError("consecutive increments must be 0 or 1")

    @property
    def ambient_dimension(self) -> int:
        return self.dims[-1]

    def __len__(self):
        return len(self.dims)


@dataclass(frozen=True)
class DerivedVector:
    """Multiplicities of the small-growth-vector entries, in block form."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(v) for v in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise MalformedVectorError("derived vector must be nonempty")
        if any(v < 1 for v in entries):
            raise MalformedVectorError("derived vector entries must be positive")
        if entries[0] != 1:
            raise MalformedVectorError("first derived entry must be 1")
        for a, b in zip(entries, entries[1:]):
            if b < a:
                raise MalformedVectorError("derived vector entries must be nondecreasing")

    @property
    def blocks(self) -> tuple[tuple[int, int], ...]:
        """Run-length pairs ``(value, count)`` with strictly increasing values."""
        out = []
        for v in self.entries:
            if out and out[-1][0] == v:
                out[-1][1] += 1
            else:
                out.append([v, 1])
        return tuple((v, c) for v, c in out)


def sgv_from_derived(d: DerivedVector) -> SmallGrowthVector:
    """Expand multiplicities back into the dimension sequence."""
    dims: list[int] = []
    for i, count in enumerate(d.entries, start=1):
        dims.extend([i + 1] * count)
    return SmallGrowthVector(tuple(dims))


def derived_from_sgv(s: SmallGrowthVector) -> DerivedVector:
    """Multiplicity of each dimension value 2..n; inverse of sgv_from_derived."""
    counts: list[int] = []
    for value in range(2, s.ambient_dimension + 1):
        counts.append(sum(1 for v in s.dims if v == value))
    return DerivedVector(tuple(counts))


def pc_from_derived(d: DerivedVector) -> PuiseuxCharacteristic:
    """Puiseux characteristic of the germ with the given derived vector.

    With blocks ``(value_i, count_i)``, the leading exponent is the largest
    block value; one further exponent arises for each block whose value is
    divisible by its predecessor, scanning those blocks from the deepest
    down: ``sum of count*value over blocks from there on, plus the block
    value and its predecessor``.
    """
    blocks = d.blocks
    values = [v for v, _ in blocks]
    counts = [c for _, c in blocks]
    lam = [values[-1]]
    divisible = [i for i in range(1, len(blocks)) if values[i] % values[i - 1] == 0]
    for i in sorted(divisible, reverse=True):
        suffix = sum(counts[j] * values[j] for j in range(i, len(blocks)))
        lam.append(suffix + values[i] + values[i - 1])
    return PuiseuxCharacteristic(tuple(lam))


def classical_mult_sequence(pc: PuiseuxCharacteristic) -> tuple[int, ...]:
    """Resolution multiplicity sequence by subtractive Euclid on the
    characteristic pairs, ending at the first 1."""
    if pc.genus == 0:
        return (1,)
    lam = pc.exponents
    seq: list[int] = []
    a = lam[0]
    for j in range(1, len(lam)):
        b = lam[j] - (lam[j - 1] if j >= 2 else 0)
        while a and b:
            if a <= b:
                seq.append(a)
                b -= a
            else:
                seq.append(b)
                a -= b
            if seq[-1] == 1:
                return tuple(seq)
    return tuple(seq)  # pragma: no cover - gcd chain ends at 1 first
