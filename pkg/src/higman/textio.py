"""Text formats for words, maps, elements, endomorphism tables and systems.

Every format is line based.  Blank lines and ``#`` comments are ignored; the
empty word is written ``1``.  Printers emit the canonical form, so
``parse(format(x)) == x``.
"""
from __future__ import annotations

import re

from .endo import EndoTable
from .fmap import FreeMap, format_map
from .invsystem import SystemDescription
from .prolimit import IncoherentTruncation, StableElement, Truncation
from .word import WordParseError, format_word, parse_word


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line, self.column = line, column
        super().__init__(f"line {line}, column {column}: {message}")


class _Lines:
    def __init__(self, text: str):
        self.items = []
        for no, raw in enumerate(text.splitlines(), 1):
            body = raw.split("#", 1)[0]
            if body.strip():
                self.items.append((no, body))
        self.pos = 0
        self.last_line = len(text.splitlines())

    def next(self, what: str):
        if self.pos >= len(self.items):
            raise ParseError(f"unexpected end of input, expected {what}", self.last_line + 1)
        item = self.items[self.pos]
        self.pos += 1
        return item

    def word(self, max_rank: int | None = None):
        no, body = self.next("a word line")
        try:
            w = parse_word(body)
        except WordParseError as exc:
            raise ParseError(str(exc).split(": ", 1)[-1], no, exc.column or 1) from None
        if max_rank is not None and w.rank > max_rank:
            col = _column_of_generator(body, w.rank)
            raise ParseError(f"a{w.rank} exceeds rank {max_rank}", no, col)
        return w

    def header(self, pattern: str, what: str):
        no, body = self.next(what)
        m = re.fullmatch(pattern, body.strip())
        if m is None:
            raise ParseError(f"expected {what}, got {body.strip()!r}", no, len(body) - len(body.lstrip()) + 1)
        return no, m

    def finish(self):
        if self.pos < len(self.items):
            no, body = self.items[self.pos]
            raise ParseError("trailing content", no, len(body) - len(body.lstrip()) + 1)


def _column_of_generator(body: str, k: int) -> int:
    m = re.search(rf"(?<!\S)[aA]0*{k}(?!\S)", body)
    return m.start() + 1 if m else 1


def _int(s: str) -> int:
    return int(s)


# --- words -----------------------------------------------------------------


def parse_words(text: str) -> list:
    lines = _Lines(text)
    out = []
    while lines.pos < len(lines.items):
        out.append(lines.word())
    return out


def format_words(words) -> str:
    return "".join(format_word(w) + "\n" for w in words)


# --- maps ------------------------------------------------------------------


def _map_body(lines: _Lines) -> FreeMap:
    _, m = lines.header(r"map\s+(\d+)\s+(\d+)", "'map <domain_rank> <codomain_rank>'")
    d, c = _int(m.group(1)), _int(m.group(2))
    return FreeMap(d, c, tuple(lines.word(c) for _ in range(d)))


def parse_map(text: str) -> FreeMap:
    lines = _Lines(text)
    f = _map_body(lines)
    lines.finish()
    return f


# --- elements ----------------------------------------------------------------


def _element_body(lines: _Lines):
    no, body = lines.next("'element <N>' or 'stable'")
    head = body.split()
    if head == ["stable"]:
        return StableElement(lines.word())
    if len(head) == 2 and head[0] == "element" and head[1].isdigit():
        n = _int(head[1])
        if n < 1:
            raise ParseError("depth must be >= 1", no, body.index(head[1]) + 1)
        coords, line_nos = [], []
        for k in range(1, n + 1):
            line_nos.append(lines.items[lines.pos][0] if lines.pos < len(lines.items) else None)
            coords.append(lines.word(k))
        try:
            return Truncation(tuple(coords))
        except IncoherentTruncation as exc:
            raise ParseError(f"incoherent element: {exc}", line_nos[exc.coordinate - 1]) from None
    raise ParseError(f"expected 'element <N>' or 'stable', got {body.strip()!r}", no)


def parse_element(text: str):
    lines = _Lines(text)
    e = _element_body(lines)
    lines.finish()
    return e


def format_element(e) -> str:
    return str(e)


# --- endomorphism tables -----------------------------------------------------


def parse_endo(text: str) -> EndoTable:
    lines = _Lines(text)
    t = _endo_body(lines)
    lines.finish()
    return t


def _endo_body(lines: _Lines) -> EndoTable:
    _, m = lines.header(r"endo\s+(\d+)\s+shift\s+(\d+)", "'endo <J> shift <c>'")
    J, c = _int(m.group(1)), _int(m.group(2))
    return EndoTable(tuple(StableElement(lines.word()) for _ in range(J)), c)


def format_endo(t: EndoTable) -> str:
    return str(t)


# --- systems -----------------------------------------------------------------


def _system_body(lines: _Lines) -> SystemDescription:
    _, m = lines.header(r"system\s+(\d+)", "'system <N>'")
    N = _int(m.group(1))
    if N < 1:
        raise ParseError("a system needs at least one level", lines.items[lines.pos - 1][0])
    no, m = lines.header(r"ranks((?:\s+\d+)*)", "'ranks r1 ... rN'")
    ranks = [_int(x) for x in m.group(1).split()]
    if len(ranks) != N:
        raise ParseError(f"expected {N} ranks, got {len(ranks)}", no)
    maps = []
    for n in range(2, N + 1):
        no, m = lines.header(r"map\s+(\d+)", f"'map {n}'")
        if _int(m.group(1)) != n:
            raise ParseError(f"expected block 'map {n}', got 'map {m.group(1)}'", no)
        images = tuple(lines.word(ranks[n - 2]) for _ in range(ranks[n - 1]))
        maps.append(FreeMap(ranks[n - 1], ranks[n - 2], images))
    return SystemDescription(tuple(ranks), tuple(maps))


def parse_system(text: str) -> SystemDescription:
    lines = _Lines(text)
    s = _system_body(lines)
    lines.finish()
    return s


def format_system(s: SystemDescription) -> str:
    out = [f"system {s.levels}", "ranks " + " ".join(map(str, s.ranks))]
    for n in range(2, s.levels + 1):
        out.append(f"map {n}")
        out += [format_word(img) for img in s.connecting(n).images]
    return "\n".join(out) + "\n"


# --- dispatch ----------------------------------------------------------------


def parse_any(text: str):
    """Parse whichever format the first header names (a bare word list
    otherwise)."""
    lines = _Lines(text)
    if not lines.items:
        return []
    first = lines.items[0][1].split()
    if first[0] == "map":
        obj = _map_body(lines)
    elif first[0] in ("element", "stable"):
        obj = _element_body(lines)
    elif first[0] == "endo":
        obj = _endo_body(lines)
    elif first[0] == "system":
        obj = _system_body(lines)
    else:
        return parse_words(text)
    lines.finish()
    return obj


def format_any(obj) -> str:
    if isinstance(obj, FreeMap):
        return format_map(obj)
    if isinstance(obj, (Truncation, StableElement)):
        return format_element(obj)
    if isinstance(obj, EndoTable):
        return format_endo(obj)
    if isinstance(obj, SystemDescription):
        return format_system(obj)
    return format_words(obj)
