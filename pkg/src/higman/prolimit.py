"""Elements of the inverse limit of A_1 <- A_2 <- ... at finite depth.

Coordinates are 1-based to match the levels: ``x.coord(n)`` lives in A_n.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Sequence, Union

from .word import IDENTITY, Word, format_word, invert, multiply, occurrences, project


class IncoherentTruncation(ValueError):
    def __init__(self, message: str, coordinate: int):
        self.coordinate = coordinate
        super().__init__(message)


class NotStable(ValueError):
    def __init__(self, coordinate: int):
        self.coordinate = coordinate
        super().__init__(f"coordinate {coordinate} has not stabilised within the list")


@total_ordering
@dataclass(frozen=True)
class Dyadic:
    """numerator / 2**exponent, kept with odd numerator (or 0/2^0)."""

    numerator: int
    exponent: int = 0

    def __post_init__(self):
        p, k = self.numerator, self.exponent
        if k < 0:
            p, k = p * 2 ** (-k), 0
        if p == 0:
            k = 0
        while k > 0 and p % 2 == 0:
            p //= 2
            k -= 1
        object.__setattr__(self, "numerator", p)
        object.__setattr__(self, "exponent", k)

    @classmethod
    def power(cls, n: int) -> "Dyadic":
        """2**-n."""
        return cls(1, n)

    def __add__(self, other: "Dyadic") -> "Dyadic":
        k = max(self.exponent, other.exponent)
        return Dyadic(
            self.numerator * 2 ** (k - self.exponent) + other.numerator * 2 ** (k - other.exponent), k
        )

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + Dyadic(-other.numerator, other.exponent)

    def __lt__(self, other: "Dyadic") -> bool:
        k = max(self.exponent, other.exponent)
        return self.numerator * 2 ** (k - self.exponent) < other.numerator * 2 ** (k - other.exponent)

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 2**self.exponent)

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"


ZERO = Dyadic(0)


def parse_dyadic(text: str) -> Dyadic:
    p, _, k = text.strip().partition("/2^")
    return Dyadic(int(p), int(k or 0))


@dataclass(frozen=True)
class StableElement:
    """The element whose n-th coordinate is ``word`` with generators above n
    killed; the coordinates equal ``word`` from level ``word.rank`` on."""

    word: Word

    def coord(self, n: int) -> Word:
        return project(self.word, n)

    @property
    def rank(self) -> int:
        return self.word.rank

    def __mul__(self, other: "StableElement") -> "StableElement":
        return StableElement(multiply(self.word, other.word))

    def inverse(self) -> "StableElement":
        return StableElement(invert(self.word))

    def __str__(self) -> str:
        return f"stable\n{format_word(self.word)}\n"


@dataclass(frozen=True)
class Truncation:
    """Coherent prefix (g_1, ..., g_N); coords[n-1] is g_n."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(self.coords)
        object.__setattr__(self, "coords", coords)
        if not coords:
            raise ValueError("a truncation needs depth >= 1")
        for n, g in enumerate(coords, 1):
            if g.rank > n:
                raise IncoherentTruncation(f"coordinate {n} uses a{g.rank}", n)
            if n > 1 and project(g, n - 1) != coords[n - 2]:
                raise IncoherentTruncation(
                    f"coordinate {n} projects to {format_word(project(g, n - 1))}, "
                    f"not {format_word(coords[n - 2])}",
                    n,
                )

    @property
    def depth(self) -> int:
        return len(self.coords)

    def coord(self, n: int) -> Word:
        if not 1 <= n <= self.depth:
            raise IndexError(f"coordinate {n} outside depth {self.depth}")
        return self.coords[n - 1]

    def __mul__(self, other: "Truncation") -> "Truncation":
        return group_op(self, other)

    def inverse(self) -> "Truncation":
        return group_inv(self)

    def __str__(self) -> str:
        return f"element {self.depth}\n" + "".join(format_word(g) + "\n" for g in self.coords)


Element = Union[Truncation, StableElement]


def embed(w: Word) -> StableElement:
    return StableElement(w)


def truncate(e: Element, depth: int) -> Truncation:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if isinstance(e, Truncation):
        if depth > e.depth:
            raise ValueError(f"cannot extend a depth-{e.depth} truncation to {depth}")
        return Truncation(e.coords[:depth])
    return Truncation(tuple(e.coord(n) for n in range(1, depth + 1)))


def identity_truncation(depth: int) -> Truncation:
    return Truncation((IDENTITY,) * depth)


def group_op(x: Truncation, y: Truncation) -> Truncation:
    """Coordinatewise product, at the smaller of the two depths."""
    n = min(x.depth, y.depth)
    return Truncation(tuple(multiply(a, b) for a, b in zip(x.coords[:n], y.coords[:n])))


def group_inv(x: Truncation) -> Truncation:
    return Truncation(tuple(invert(a) for a in x.coords))


def metric(x: Element, y: Element, depth: int | None = None) -> tuple:
    """(lower, upper) bounds on the distance, exact dyadics.

    Two stable elements get their exact distance (lower == upper).  Otherwise
    the coordinates 1..depth are compared and the unseen tail contributes at
    most 2^-depth.
    """
    if isinstance(x, StableElement) and isinstance(y, StableElement):
        d = stable_distance(x, y)
        return d, d
    if depth is None:
        depth = min(e.depth for e in (x, y) if isinstance(e, Truncation))
    tx, ty = truncate(x, depth), truncate(y, depth)
    lower = ZERO
    for n, (a, b) in enumerate(zip(tx.coords, ty.coords), 1):
        if a != b:
            lower = lower + Dyadic.power(n)
    return lower, lower + Dyadic.power(depth)


def stable_distance(x: StableElement, y: StableElement) -> Dyadic:
    if x.word == y.word:
        return ZERO
    r = max(x.rank, y.rank, 1)
    d = ZERO
    for n in range(1, r):
        if x.coord(n) != y.coord(n):
            d = d + Dyadic.power(n)
    # every coordinate from r on differs: sum_{n >= r} 2^-n = 2^-(r-1)
    return d + Dyadic.power(r - 1)


def converges(seq: Sequence[Truncation], depth: int) -> tuple:
    """For each coordinate n <= depth, the least 1-based list index from which
    coordinate n is constant to the end of the list, or None when only the
    last element witnesses it (no evidence of stability within the list)."""
    if not seq:
        raise ValueError("empty sequence")
    verdicts = []
    for n in range(1, depth + 1):
        values = [t.coord(n) for t in seq]
        start = len(values)
        while start > 1 and values[start - 2] == values[-1]:
            start -= 1
        verdicts.append(start if start < len(values) else None)
    return tuple(verdicts)


def limit_of_stable_sequence(seq: Sequence[Truncation], depth: int) -> Truncation:
    for n, v in enumerate(converges(seq, depth), 1):
        if v is None:
            raise NotStable(n)
    return truncate(seq[-1], depth)


def approximate_by_stable(x: Truncation) -> StableElement:
    return embed(x.coords[-1])


@dataclass(frozen=True)
class OccurrenceProfile:
    """counts[i-1][n-1] = occurrences of generator i in coordinate n."""

    counts: tuple
    growing: tuple

    def __str__(self) -> str:
        lines = [f"a{i}: " + " ".join(map(str, row)) for i, row in enumerate(self.counts, 1)]
        lines.append("growing: " + (" ".join(f"a{i}" for i in self.growing) or "none"))
        return "\n".join(lines)


def hawaiian_occurrence_profile(x: Truncation) -> OccurrenceProfile:
    """Occurrence counts per generator and coordinate.  A generator is flagged
    as growing when its count still increases between the last two
    coordinates."""
    N = x.depth
    counts = tuple(tuple(occurrences(g, i) for g in x.coords) for i in range(1, N + 1))
    growing = tuple(i for i, row in enumerate(counts, 1) if N >= 2 and row[-1] > row[-2])
    return OccurrenceProfile(counts, growing)
