"""Reduced words in finite-rank free groups.

A letter is stored as a nonzero signed integer: ``k`` is the generator a_k and
``-k`` its formal inverse.  :class:`Letter` is the (index, sign) view of the
same thing and converts freely.
"""
from __future__ import annotations

import re
from typing import Iterable, Iterator, NamedTuple, Sequence, Union


class WordParseError(ValueError):
    """Malformed word text.  ``column`` is 1-based within the parsed string."""

    def __init__(self, message: str, column: int | None = None):
        self.column = column
        if column is not None:
            message = f"column {column}: {message}"
        super().__init__(message)


class Letter(NamedTuple):
    index: int
    sign: int = 1

    @classmethod
    def from_int(cls, k: int) -> "Letter":
        if k == 0:
            raise ValueError("letter 0 does not exist")
        return cls(abs(k), 1 if k > 0 else -1)

    def to_int(self) -> int:
        if self.index < 1 or self.sign not in (1, -1):
            raise ValueError(f"invalid letter {self!r}")
        return self.index * self.sign

    def __str__(self) -> str:
        return ("a" if self.sign > 0 else "A") + str(self.index)


RawLetter = Union[int, Letter, tuple]


def _as_int(x: RawLetter) -> int:
    if isinstance(x, int) and not isinstance(x, bool):
        if x == 0:
            raise ValueError("letter 0 does not exist")
        return x
    return Letter(*x).to_int()


def letter_key(k: int) -> int:
    """Sort key for the order a1 < A1 < a2 < A2 < ..."""
    return 2 * k - 1 if k > 0 else -2 * k


def _free_reduce(letters: Iterable[int]) -> tuple:
    out: list[int] = []
    for k in letters:
        if out and out[-1] == -k:
            out.pop()
        else:
            out.append(k)
    return tuple(out)


class Word:
    """An immutable, freely reduced word.

    ``Word([1, -2])`` is a1 A2.  Construction always reduces, so equality of
    words is equality of group elements.
    """

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[RawLetter] = ()):
        object.__setattr__(self, "letters", _free_reduce(_as_int(x) for x in letters))
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _trusted(cls, letters: tuple) -> "Word":
        w = cls.__new__(cls)
        object.__setattr__(w, "letters", letters)
        object.__setattr__(w, "_hash", None)
        return w

    @classmethod
    def generator(cls, k: int) -> "Word":
        if k < 1:
            raise ValueError(f"generator index must be >= 1, got {k}")
        return cls._trusted((k,))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        if isinstance(other, Word):
            return self.letters == other.letters
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(("Word", self.letters)))
        return self._hash

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else invert(self)
        out = Word()
        for _ in range(abs(n)):
            out = multiply(out, base)
        return out

    def __lt__(self, other: "Word") -> bool:
        return shortlex_key(self) < shortlex_key(other)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)

    def as_letters(self) -> tuple:
        return tuple(Letter.from_int(k) for k in self.letters)

    @property
    def rank(self) -> int:
        """Smallest rank whose free group contains this word."""
        return max((abs(k) for k in self.letters), default=0)


IDENTITY = Word()


def reduce(raw: Iterable[RawLetter]) -> Word:
    return Word(raw)


def multiply(u: Word, v: Word) -> Word:
    a, b = u.letters, v.letters
    i = 0
    n = min(len(a), len(b))
    while i < n and a[len(a) - 1 - i] == -b[i]:
        i += 1
    return Word._trusted(a[: len(a) - i] + b[i:])


def cancellation(u: Word, v: Word) -> int:
    """Number of letters cancelled on each side when forming u*v."""
    a, b = u.letters, v.letters
    i = 0
    n = min(len(a), len(b))
    while i < n and a[len(a) - 1 - i] == -b[i]:
        i += 1
    return i


def product(words: Iterable[Word]) -> Word:
    out = IDENTITY
    for w in words:
        out = multiply(out, w)
    return out


def invert(u: Word) -> Word:
    return Word._trusted(tuple(-k for k in reversed(u.letters)))


def occurrences(u: Word, index: int) -> int:
    return sum(1 for k in u.letters if abs(k) == index)


def project(u: Word, rank: int) -> Word:
    """Kill every generator above ``rank`` and reduce."""
    if u.rank <= rank:
        return u
    return Word._trusted(_free_reduce(k for k in u.letters if abs(k) <= rank))


def substitute(u: Word, images: Sequence[Word]) -> Word:
    """Replace a_k by images[k-1] (and A_k by its inverse), then reduce."""
    out: list[int] = []
    for k in u.letters:
        img = images[abs(k) - 1].letters
        if k < 0:
            img = tuple(-x for x in reversed(img))
        for x in img:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return Word._trusted(tuple(out))


def shortlex_key(u: Word) -> tuple:
    return (len(u.letters), tuple(letter_key(k) for k in u.letters))


_TOKEN = re.compile(r"([aA])(\d+)$")


def parse_word(text: str) -> Word:
    """Parse ``"a1 A2 a3"``; ``"1"`` is the empty word."""
    tokens = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", text)]
    if not tokens:
        raise WordParseError("empty word text (use '1' for the identity)", 1)
    if len(tokens) == 1 and tokens[0][1] == "1":
        return IDENTITY
    letters = []
    for col, tok in tokens:
        m = _TOKEN.match(tok)
        if m is None:
            if tok in ("a", "A"):
                raise WordParseError(f"missing generator index in {tok!r}", col)
            if tok == "1":
                raise WordParseError("'1' must stand alone", col)
            raise WordParseError(f"unknown token {tok!r}", col)
        k = int(m.group(2))
        if k == 0:
            raise WordParseError(f"generator index must be >= 1 in {tok!r}", col)
        letters.append(k if m.group(1) == "a" else -k)
    return Word(letters)


def format_word(u: Word) -> str:
    if not u.letters:
        return "1"
    return " ".join(("a" if k > 0 else "A") + str(abs(k)) for k in u.letters)


def w(text: str) -> Word:
    """Shorthand for :func:`parse_word`."""
    return parse_word(text)
