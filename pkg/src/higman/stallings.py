"""Subgroup graphs (Stallings folding) and Nielsen reduction with traces.

Folding keeps, on every edge, a word over the input generators x_1..x_m
(the edge's *tag*).  The tags satisfy: reading a closed path at the base
vertex and multiplying the tags gives an x-word which evaluates to the
path's label.  That is what :func:`express_in_basis` reads off.

Tags survive folding by a gauge change: when two edges leaving ``v`` with
the same letter but different tags must be identified, the far endpoint is
re-gauged (incoming tags multiplied on the right by g, outgoing tags on the
left by g^-1) so both tags agree, and then the endpoints are merged.  Closed
paths at the base vertex are unaffected as long as the base is never
re-gauged.
"""
from __future__ import annotations

import random
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .fmap import FreeMap, RankMismatch, identity, is_surjective
from .word import (
    IDENTITY,
    Word,
    cancellation,
    format_word,
    invert,
    letter_key,
    multiply,
    substitute,
)


class NotMember(ValueError):
    pass


class NotSurjective(ValueError):
    pass


def _signed_labels(rank: int) -> list:
    return sorted([k for k in range(1, rank + 1)] + [-k for k in range(1, rank + 1)], key=letter_key)


@dataclass(frozen=True)
class SubgroupGraph:
    """Folded core graph of a finitely generated subgroup.

    Vertices are 0..n_vertices-1 with 0 the base, numbered canonically by a
    breadth-first search in the letter order a1, A1, a2, ...; ``edges`` are
    (src, generator, dst) triples sorted lexicographically.  ``tags`` are not
    part of equality: they depend on the generating tuple, not the subgroup.
    """

    rank: int
    n_vertices: int
    edges: tuple
    tags: tuple = field(default=(), compare=False, repr=False)
    n_generators: int = field(default=0, compare=False)

    @cached_property
    def _out(self) -> dict:
        out: dict = {}
        for (src, g, dst), tag in zip(self.edges, self.tags or (IDENTITY,) * len(self.edges)):
            out[(src, g)] = (dst, tag)
            out[(dst, -g)] = (src, invert(tag))
        return out

    def step(self, v: int, letter: int):
        """Follow ``letter`` from ``v``; returns (target, tag) or None."""
        return self._out.get((v, letter))

    def is_rose(self) -> bool:
        return self.n_vertices == 1 and sorted(g for _, g, _ in self.edges) == list(
            range(1, self.rank + 1)
        )

    @property
    def subgroup_rank(self) -> int:
        return len(self.edges) - self.n_vertices + 1

    def __str__(self) -> str:
        lines = []
        for v in range(self.n_vertices):
            arrows = []
            for s in _signed_labels(self.rank):
                hit = self._out.get((v, s))
                if hit is not None:
                    arrows.append(f"{format_word(Word._trusted((s,)))}->{hit[0]}")
            lines.append(f"{v}: " + " ".join(arrows))
        return "\n".join(lines)


class _Folder:
    def __init__(self, rng: random.Random | None = None):
        self.rng = rng
        self.edges: dict = {}
        self.incident: dict = defaultdict(set)
        self.n_vertices = 1
        self._next_edge = 0

    def new_vertex(self) -> int:
        v = self.n_vertices
        self.n_vertices += 1
        return v

    def add_edge(self, src: int, letter: int, dst: int, tag: Word):
        if letter < 0:
            src, dst, letter, tag = dst, src, -letter, invert(tag)
        eid = self._next_edge
        self._next_edge += 1
        self.edges[eid] = [src, letter, dst, tag]
        self.incident[src].add(eid)
        self.incident[dst].add(eid)

    def delete_edge(self, eid: int):
        src, _, dst, _ = self.edges.pop(eid)
        self.incident[src].discard(eid)
        self.incident[dst].discard(eid)

    def halfedges(self, v: int) -> dict:
        out = defaultdict(list)
        for eid in sorted(self.incident[v]):
            src, g, dst, tag = self.edges[eid]
            if src == v:
                out[g].append((eid, dst, tag))
            if dst == v:
                out[-g].append((eid, src, invert(tag)))
        return out

    def gauge(self, z: int, g: Word):
        ginv = invert(g)
        for eid in self.incident[z]:
            e = self.edges[eid]
            if e[2] == z:
                e[3] = multiply(e[3], g)
            if e[0] == z:
                e[3] = multiply(ginv, e[3])

    def merge(self, keep: int, gone: int):
        for eid in self.incident.pop(gone):
            e = self.edges[eid]
            if e[0] == gone:
                e[0] = keep
            if e[2] == gone:
                e[2] = keep
            self.incident[keep].add(eid)

    def fold_all(self):
        queue = deque(sorted(self.incident))
        if self.rng is not None:
            queue = deque(self.rng.sample(list(queue), len(queue)))
        while queue:
            v = queue.popleft()
            if v not in self.incident:
                continue
            clashes = [s for s, hs in self.halfedges(v).items() if len(hs) > 1]
            if not clashes:
                continue
            if self.rng is None:
                s = min(clashes, key=letter_key)
                h1, h2 = self.halfedges(v)[s][:2]
            else:
                s = self.rng.choice(clashes)
                h1, h2 = self.rng.sample(self.halfedges(v)[s], 2)
            self._fold_pair(h1, h2)
            queue.append(v if v in self.incident else h1[1])
            for x in (h1[1], h2[1]):
                if x in self.incident:
                    queue.append(x)

    def _fold_pair(self, h1, h2):
        e1, w1, t1 = h1
        e2, w2, t2 = h2
        if w1 == w2:
            self.delete_edge(e2)
            return
        if w2 == 0:
            e1, w1, t1, e2, w2, t2 = e2, w2, t2, e1, w1, t1
        # w2 is not the base; re-gauge it so that edge e2 carries tag t1
        self.gauge(w2, multiply(invert(t2), t1))
        self.delete_edge(e2)
        self.merge(w1, w2)

    def trim(self):
        changed = True
        while changed:
            changed = False
            for v in list(self.incident):
                if v == 0:
                    continue
                eids = self.incident[v]
                degree = sum((self.edges[e][0] == v) + (self.edges[e][2] == v) for e in eids)
                if degree <= 1:
                    for e in list(eids):
                        self.delete_edge(e)
                    del self.incident[v]
                    changed = True

    def freeze(self, rank: int, n_generators: int) -> SubgroupGraph:
        order = {0: 0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            hs = self.halfedges(v)
            for s in sorted(hs, key=letter_key):
                target = hs[s][0][1]
                if target not in order:
                    order[target] = len(order)
                    queue.append(target)
        triples = sorted(
            ((order[src], g, order[dst]), tag) for src, g, dst, tag in self.edges.values()
        )
        return SubgroupGraph(
            rank=rank,
            n_vertices=len(order),
            edges=tuple(t for t, _ in triples),
            tags=tuple(tag for _, tag in triples),
            n_generators=n_generators,
        )


def fold(generators: Sequence[Word], ambient_rank: int, rng: random.Random | None = None) -> SubgroupGraph:
    """Folded core graph of the subgroup generated by ``generators``.

    ``rng`` only shuffles the order in which petals are built and folds are
    performed; the returned graph is the same for every order.
    """
    for k, gen in enumerate(generators, 1):
        if gen.rank > ambient_rank:
            raise ValueError(f"generator {k} uses a{gen.rank} outside rank {ambient_rank}")
    folder = _Folder(rng)
    folder.incident[0]
    petals = list(enumerate(generators, 1))
    if rng is not None:
        rng.shuffle(petals)
    for i, gen in petals:
        letters = gen.letters
        if not letters:
            continue
        v = 0
        for pos, s in enumerate(letters):
            last = pos == len(letters) - 1
            nxt = 0 if last else folder.new_vertex()
            folder.add_edge(v, s, nxt, Word._trusted((i,)) if last else IDENTITY)
            v = nxt
    folder.fold_all()
    folder.trim()
    return folder.freeze(ambient_rank, len(generators))


def _read(g: SubgroupGraph, w: Word):
    v = 0
    tags = []
    for s in w.letters:
        hit = g.step(v, s)
        if hit is None:
            return None
        v, tag = hit
        tags.append(tag)
    if v != 0:
        return None
    return tags


def contains(g: SubgroupGraph, w: Word) -> bool:
    return _read(g, w) is not None


def express_in_basis(basis: Sequence[Word], target: Word, ambient_rank: int) -> Word:
    """A word v in x_1..x_m with v(basis) == target; raises NotMember."""
    tags = _read(fold(basis, ambient_rank), target)
    if tags is None:
        raise NotMember(f"{format_word(target)} is not in the subgroup")
    out = IDENTITY
    for tag in tags:
        out = multiply(out, tag)
    return out


# --- Nielsen reduction -------------------------------------------------------


@dataclass(frozen=True)
class NielsenMove:
    """Elementary move on slots (0-based).

    kind 'swap': exchange slots target and source.
    kind 'invert': slot target := slot target^-1.
    kind 'right': slot target := slot target * slot source^sign.
    kind 'left': slot target := slot source^sign * slot target.
    """

    kind: str
    target: int
    source: int = -1
    sign: int = 1

    def apply(self, slots: list) -> None:
        t, s = self.target, self.source
        if self.kind == "swap":
            slots[t], slots[s] = slots[s], slots[t]
        elif self.kind == "invert":
            slots[t] = invert(slots[t])
        else:
            other = slots[s] if self.sign > 0 else invert(slots[s])
            slots[t] = multiply(slots[t], other) if self.kind == "right" else multiply(other, slots[t])

    def inverse_images(self, m: int) -> list:
        """Generator images of the inverse automorphism of F_m."""
        imgs = [Word.generator(k) for k in range(1, m + 1)]
        if self.kind in ("swap", "invert"):
            self.apply(imgs)
        else:
            type(self)(self.kind, self.target, self.source, -self.sign).apply(imgs)
        return imgs

    def __str__(self) -> str:
        t, s = self.target + 1, self.source + 1
        if self.kind == "swap":
            return f"swap {t} {s}"
        if self.kind == "invert":
            return f"invert {t}"
        e = "" if self.sign > 0 else "^-1"
        return f"{t} := {t}*{s}{e}" if self.kind == "right" else f"{t} := {s}{e}*{t}"


@dataclass(frozen=True)
class AutoTrace:
    """Moves applied to a tuple, with the automorphism they induce.

    ``forward`` sends x_k to the word in the original slots that ended up in
    slot k; ``backward`` is its inverse.
    """

    moves: tuple
    forward: FreeMap
    backward: FreeMap


class _Tracker:
    def __init__(self, words: Sequence[Word]):
        self.slots = list(words)
        m = len(self.slots)
        self.m = m
        self.alpha = [Word.generator(k) for k in range(1, m + 1)]
        self.beta = list(self.alpha)
        self.moves: list = []

    def do(self, move: NielsenMove):
        move.apply(self.slots)
        move.apply(self.alpha)
        inv = move.inverse_images(self.m)
        self.beta = [substitute(b, inv) for b in self.beta]
        self.moves.append(move)

    def sort_trivial_last(self):
        pos = 0
        for i in range(self.m):
            if self.slots[i]:
                if i != pos:
                    self.do(NielsenMove("swap", pos, i))
                pos += 1

    def trace(self) -> AutoTrace:
        return AutoTrace(
            tuple(self.moves),
            FreeMap(self.m, self.m, tuple(self.alpha)),
            FreeMap(self.m, self.m, tuple(self.beta)),
        )


def _length_reducing_move(slots: list):
    m = len(slots)
    for s in range(m):
        us = slots[s]
        if not us:
            continue
        us_inv = invert(us)
        for t in range(m):
            ut = slots[t]
            if t == s or not ut:
                continue
            if 2 * cancellation(ut, us) > len(us):
                return NielsenMove("right", t, s, 1)
            if 2 * cancellation(ut, us_inv) > len(us):
                return NielsenMove("right", t, s, -1)
            if 2 * cancellation(us, ut) > len(us):
                return NielsenMove("left", t, s, 1)
            if 2 * cancellation(us_inv, ut) > len(us):
                return NielsenMove("left", t, s, -1)
    return None


def _middle_cancelling_move(slots: list):
    """A length-preserving move repairing a product u v w in which v cancels
    completely.  Assumes no length-reducing move exists.  The replaced
    element's half-words strictly decrease, which forces termination."""
    m = len(slots)
    signed = [(i, e, slots[i] if e > 0 else invert(slots[i])) for i in range(m) if slots[i] for e in (1, -1)]
    for b, eb, v in signed:
        if len(v) % 2:
            continue
        half = len(v) // 2
        lefts = [(a, ea, u) for a, ea, u in signed if a != b and cancellation(u, v) >= half]
        if not lefts:
            continue
        rights = [(c, ec, x) for c, ec, x in signed if c != b and cancellation(v, x) >= half]
        if not rights:
            continue
        a, ea, _ = lefts[0]
        c, ec, _ = rights[0]
        h = [letter_key(k) for k in v.letters[:half]]
        k_inv = [letter_key(-k) for k in reversed(v.letters[half:])]
        if h < k_inv:
            # w := v w
            return NielsenMove("left", c, b, eb) if ec > 0 else NielsenMove("right", c, b, -eb)
        # u := u v
        return NielsenMove("right", a, b, eb) if ea > 0 else NielsenMove("left", a, b, -eb)
    return None


def _reduce(tracker: _Tracker):
    while True:
        move = _length_reducing_move(tracker.slots) or _middle_cancelling_move(tracker.slots)
        if move is None:
            break
        tracker.do(move)
    tracker.sort_trivial_last()


def nielsen_reduce(words: Sequence[Word], ambient_rank: int | None = None):
    """Nielsen-reduce a tuple; returns (reduced tuple, AutoTrace).

    Moves are chosen deterministically: the first length-reducing move with
    slot pairs (source, target) in lexicographic order and kinds in the order
    right*, right*^-1, left*, left*^-1; only when none exists, a
    length-preserving move fixing a fully cancelled middle factor.  Trivial
    entries end up last.
    """
    if ambient_rank is not None:
        for k, x in enumerate(words, 1):
            if x.rank > ambient_rank:
                raise ValueError(f"entry {k} uses a{x.rank} outside rank {ambient_rank}")
    tracker = _Tracker(words)
    _reduce(tracker)
    return tuple(tracker.slots), tracker.trace()


def is_nielsen_reduced(words: Sequence[Word]) -> bool:
    """Check the three Nielsen conditions directly (trivial entries ignored)."""
    signed = [(i, x if e > 0 else invert(x)) for i, x in enumerate(words) if x for e in (1, -1)]
    for i, u in signed:
        for j, v in signed:
            if i == j:
                continue
            uv = multiply(u, v)
            if len(uv) < len(u) or len(uv) < len(v):
                return False
            for k, x in signed:
                if k == j:
                    continue
                if len(multiply(uv, x)) <= len(u) - len(v) + len(x):
                    return False
    return True


@dataclass(frozen=True)
class BasisSplit:
    """Free basis b_part + k_part of the domain adapted to a surjection f.

    f(b_part[k]) = a_{k+1}, f(k_part[j]) = 1, and ``section`` sends a_k to
    b_part[k-1].  ``trace.forward`` has images b_part + k_part.
    """

    b_part: tuple
    k_part: tuple
    section: FreeMap
    trace: AutoTrace


def split_basis(f: FreeMap) -> BasisSplit:
    if not is_surjective(f):
        raise NotSurjective(f"map F_{f.domain_rank} -> F_{f.codomain_rank} is not surjective")
    m, r = f.domain_rank, f.codomain_rank
    tracker = _Tracker(f.images)
    _reduce(tracker)
    head, tail = tracker.slots[:r], tracker.slots[r:]
    # a Nielsen-reduced generating set of F_r is the standard basis up to order and signs
    if any(len(x) != 1 for x in head) or any(tail) or sorted(abs(x.letters[0]) for x in head) != list(range(1, r + 1)):
        raise AssertionError(f"Nielsen reduction did not reach a basis: {[format_word(x) for x in tracker.slots]}")
    for k in range(r):
        j = next(i for i in range(k, r) if abs(tracker.slots[i].letters[0]) == k + 1)
        if j != k:
            tracker.do(NielsenMove("swap", k, j))
        if tracker.slots[k].letters[0] < 0:
            tracker.do(NielsenMove("invert", k))
    trace = tracker.trace()
    b_part = tuple(tracker.alpha[:r])
    k_part = tuple(tracker.alpha[r:])
    # slots[i] = f(alpha[i]) throughout, and the slots now read a_1 .. a_r, so
    # f(b_part[k]) = a_{k+1} and the section is b_part itself
    section = FreeMap(r, m, b_part)
    return BasisSplit(b_part, k_part, section, trace)


def invert_bijective(f: FreeMap) -> FreeMap:
    """Inverse of an automorphism of F_r (surjective maps of equal rank are
    bijective, so the split has no kernel part and the section is the inverse)."""
    if f.domain_rank != f.codomain_rank:
        raise RankMismatch(f"F_{f.domain_rank} -> F_{f.codomain_rank} cannot be bijective")
    if f.domain_rank == 0:
        return identity(0)
    return split_basis(f).section
