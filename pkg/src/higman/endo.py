"""Endomorphisms of the limit group given by tables of stable images.

A table fixes phi(a_1), ..., phi(a_J) and a shift bound c promising that
phi(a_j) is trivial at every coordinate below j - c, for all j including those
beyond the table.  That is enough to evaluate phi(g) at coordinate n from the
single coordinate g_{n+c}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .prolimit import (
    StableElement,
    Truncation,
    embed,
    group_inv,
    group_op,
    truncate,
)
from .word import Word, format_word, substitute


class InsufficientDepth(ValueError):
    def __init__(self, required: int, message: str = ""):
        self.required = required
        super().__init__(message or f"need depth {required}")


class NullConvergenceViolation(ValueError):
    def __init__(self, index: int, first: float, shift: int):
        self.index = index
        super().__init__(
            f"image of a{index} is nontrivial at coordinate {first} < {index} - {shift}"
        )


class CounterexampleFailure(AssertionError):
    def __init__(self, check: str, index: int, coordinate: int | None = None):
        self.check, self.index, self.coordinate = check, index, coordinate
        where = f" at coordinate {coordinate}" if coordinate is not None else ""
        super().__init__(f"{check} fails for index {index}{where}")


@dataclass(frozen=True)
class EndoTable:
    images: tuple
    shift_bound: int

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if self.shift_bound < 0:
            raise ValueError("shift bound must be non-negative")

    @property
    def table_depth(self) -> int:
        return len(self.images)

    def image(self, j: int) -> StableElement:
        return self.images[j - 1]

    def __str__(self) -> str:
        head = f"endo {self.table_depth} shift {self.shift_bound}\n"
        return head + "".join(format_word(e.word) + "\n" for e in self.images)


def first_nontrivial(e: StableElement):
    """Least n with P_n(word) != 1, or math.inf for the identity."""
    for n in range(1, e.rank + 1):
        if e.coord(n):
            return n
    return math.inf


def verify_null_convergence(t: EndoTable) -> tuple:
    """Check first_nontrivial(phi(a_j)) >= j - c throughout the table.

    Returns M with M[n-1] = n + c: past index M(n) every image is trivial at
    coordinate n (inside the table by the check, beyond it by the shift
    certificate).
    """
    c = t.shift_bound
    for j, e in enumerate(t.images, 1):
        first = first_nontrivial(e)
        if first < j - c:
            raise NullConvergenceViolation(j, first, c)
    return tuple(n + c for n in range(1, t.table_depth + 1))


def _substitute_at(t: EndoTable, word: Word, n: int) -> Word:
    return substitute(word, [t.image(j).coord(n) for j in range(1, word.rank + 1)])


def eval_coordinate(t: EndoTable, g: Truncation, n: int, check: bool = True) -> Word:
    K = n + t.shift_bound
    available = min(t.table_depth, g.depth)
    if K > available:
        raise InsufficientDepth(K, f"coordinate {n} needs table and element depth {K}, have {available}")
    value = _substitute_at(t, g.coord(K), n)
    if check and available > K:
        deeper = _substitute_at(t, g.coord(available), n)
        if deeper != value:
            raise AssertionError(
                f"coordinate {n} depends on the depth used ({K} vs {available}); "
                "the shift bound does not hold for this table"
            )
    return value


def evaluate(t: EndoTable, g: Truncation, out_depth: int, check: bool = False) -> Truncation:
    return Truncation(tuple(eval_coordinate(t, g, n, check) for n in range(1, out_depth + 1)))


def factoring_depth(t: EndoTable, i: int) -> int:
    """Least n such that coordinate i of phi(g) depends only on g_n."""
    if i + t.shift_bound > t.table_depth:
        raise InsufficientDepth(i + t.shift_bound)
    return max((j for j in range(1, t.table_depth + 1) if t.image(j).coord(i)), default=0)


def identity_table(depth: int) -> EndoTable:
    return EndoTable(tuple(embed(Word.generator(j)) for j in range(1, depth + 1)), 0)


def counterexample_image(j: int) -> Word:
    if j % 2:
        return Word.generator(j)
    if j % 4 == 2:
        return Word([1, j, -1])
    return Word.generator(j - 2)


def counterexample_table(depth: int) -> EndoTable:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    return EndoTable(tuple(embed(counterexample_image(j)) for j in range(1, depth + 1)), 2)


@dataclass
class CounterexampleReport:
    depth: int
    relation_indices: list = field(default_factory=list)
    lines: list = field(default_factory=list)

    def __str__(self) -> str:
        return "\n".join(self.lines) + "\n"


def verify_counterexample(depth: int, table: EndoTable | None = None) -> CounterexampleReport:
    """Check the finite identities behind the counterexample at coordinates
    1..depth.  The table must reach depth + 2 so every coordinate can be
    evaluated; by default the standard one is built.

    Raises CounterexampleFailure naming the check, index and coordinate.
    """
    if depth < 8:
        raise ValueError("depth must be >= 8")
    c = 2
    if table is None:
        table = counterexample_table(depth + c)
    if table.table_depth < depth + c:
        raise InsufficientDepth(depth + c)
    report = CounterexampleReport(depth)

    try:
        verify_null_convergence(EndoTable(table.images, c))
    except NullConvergenceViolation as exc:
        raise CounterexampleFailure("null convergence", exc.index) from exc
    report.lines.append(f"null-convergence: ok (shift {c}, table depth {table.table_depth})")

    for j in range(1, depth + 1):
        first = first_nontrivial(table.image(j))
        if first < j - c:
            raise CounterexampleFailure("first_nontrivial >= j-2", j)
        if (first == j - c) != (j % 4 == 0):
            raise CounterexampleFailure("first_nontrivial == j-2 iff j = 0 mod 4", j)
    report.lines.append(f"first-nontrivial: ok (j <= {depth}; equality exactly at j = 0 mod 4)")

    t = EndoTable(table.images, c)
    width = depth + c
    a1 = truncate(embed(Word.generator(1)), depth)
    evaluated = {}
    for j in range(1, depth + 1):
        g = truncate(embed(Word.generator(j)), width)
        coords = []
        for n in range(1, depth + 1):
            try:
                coords.append(eval_coordinate(t, g, n, check=True))
            except AssertionError as exc:
                raise CounterexampleFailure("depth independence", j, n) from exc
        try:
            evaluated[j] = Truncation(tuple(coords))
        except ValueError as exc:
            raise CounterexampleFailure("coherence", j) from exc
    report.lines.append(f"coherence: ok ({depth} evaluated images)")

    i = 1
    while 4 * i <= depth:
        lhs = evaluated[4 * i - 2]
        rhs = group_op(group_op(a1, evaluated[4 * i]), group_inv(a1))
        for n in range(1, depth + 1):
            if lhs.coord(n) != rhs.coord(n):
                raise CounterexampleFailure(f"relation phi(a{4*i-2}) = a1 phi(a{4*i}) A1", i, n)
        report.relation_indices.append(i)
        report.lines.append(f"relation i={i}: phi(a{4*i-2}) = a1 phi(a{4*i}) A1 at coordinates 1..{depth}: ok")
        i += 1
    report.lines.append("verdict: verified")
    return report
