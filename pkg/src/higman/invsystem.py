"""Inverse systems F_1 <- F_2 <- ... <- F_N of finite-rank free groups."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .fmap import FreeMap, compose, identity, is_surjective, standard_projection
from .stallings import BasisSplit, NielsenMove, NotSurjective, split_basis
from .word import Word, substitute


@dataclass(frozen=True)
class SystemDescription:
    """ranks[n-1] is the rank of level n; maps[n-2] is the connecting map
    level n -> level n-1."""

    ranks: tuple
    maps: tuple

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.ranks:
            raise ValueError("a system needs at least one level")
        if len(self.maps) != len(self.ranks) - 1:
            raise ValueError(f"{len(self.ranks)} levels need {len(self.ranks) - 1} maps, got {len(self.maps)}")

    @property
    def levels(self) -> int:
        return len(self.ranks)

    def rank(self, n: int) -> int:
        return self.ranks[n - 1]

    def connecting(self, n: int) -> FreeMap:
        """The map level n -> level n-1 (n >= 2)."""
        if not 2 <= n <= self.levels:
            raise IndexError(f"no connecting map at level {n}")
        return self.maps[n - 2]

    def composite(self, i: int, j: int) -> FreeMap:
        """The map level i -> level j for i >= j."""
        f = identity(self.rank(i))
        for n in range(i, j, -1):
            f = compose(f, self.connecting(n))
        return f


@dataclass(frozen=True)
class Violation:
    level: int
    kind: str
    message: str

    def __str__(self) -> str:
        return f"level {self.level}: {self.kind}: {self.message}"


def validate(s: SystemDescription) -> list:
    """All wiring and surjectivity failures; empty means the system is valid."""
    out = []
    for n in range(2, s.levels + 1):
        f = s.connecting(n)
        if (f.domain_rank, f.codomain_rank) != (s.rank(n), s.rank(n - 1)):
            out.append(
                Violation(
                    n,
                    "rank mismatch",
                    f"map is F_{f.domain_rank} -> F_{f.codomain_rank}, "
                    f"levels have ranks {s.rank(n)} -> {s.rank(n - 1)}",
                )
            )
            continue
        if not is_surjective(f):
            out.append(Violation(n, "not surjective", f"images do not generate F_{f.codomain_rank}"))
    return out


def restrict_cofinal(s: SystemDescription, indices: Sequence[int]) -> SystemDescription:
    indices = list(indices)
    if not indices:
        raise ValueError("index set must be nonempty")
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise ValueError(f"indices must be strictly increasing: {indices}")
    if indices[0] < 1 or indices[-1] > s.levels:
        raise ValueError(f"indices must lie in 1..{s.levels}")
    return SystemDescription(
        tuple(s.rank(i) for i in indices),
        tuple(s.composite(b, a) for a, b in zip(indices, indices[1:])),
    )


@dataclass(frozen=True)
class Normalization:
    """Level isomorphisms theta_n: F_n -> A_{r_n} carrying the system onto
    standard projections, with the per-level splits used to build them.
    splits[0] is None (level 1 has no connecting map)."""

    level_isos: tuple
    splits: tuple
    signature: tuple

    def __str__(self) -> str:
        return "\n".join(f"level {n}: B={b} K={k}" for n, (b, k) in enumerate(self.signature, 1))


class SquareFailure(AssertionError):
    pass


def square_holds(s: SystemDescription, isos: Sequence[FreeMap], n: int) -> bool:
    """theta_{n-1} o pi_n == P o theta_n, compared on generators."""
    lhs = compose(s.connecting(n), isos[n - 2])
    rhs = compose(isos[n - 1], standard_projection(s.rank(n), s.rank(n - 1)))
    return lhs == rhs


def normalize(s: SystemDescription) -> Normalization:
    bad = validate(s)
    if bad:
        if any(v.kind == "not surjective" for v in bad):
            raise NotSurjective("; ".join(map(str, bad)))
        raise ValueError("; ".join(map(str, bad)))
    isos = [identity(s.rank(1))]
    splits: list = [None]
    signature = [(s.rank(1), 0)]
    for n in range(2, s.levels + 1):
        r, rp = s.rank(n), s.rank(n - 1)
        split = split_basis(s.connecting(n))
        # in the adapted basis, the B part goes where theta_{n-1} sends the
        # previous basis and the K part onto the new top generators
        extended = FreeMap(
            r, r, isos[-1].images + tuple(Word.generator(k) for k in range(rp + 1, r + 1))
        )
        isos.append(compose(split.trace.backward, extended))
        splits.append(split)
        signature.append((len(split.b_part), len(split.k_part)))
        if not square_holds(s, isos, n):
            raise SquareFailure(f"commuting square fails at level {n}")
    return Normalization(tuple(isos), tuple(splits), tuple(signature))


def adapted_bases(s: SystemDescription, norm: Normalization) -> list:
    """The ordered bases B_n + K_n: B_1 is the standard basis of F_1, and
    B_n is the previous basis pulled back through the section of pi_n."""
    bases = [[Word.generator(k) for k in range(1, s.rank(1) + 1)]]
    for n in range(2, s.levels + 1):
        split: BasisSplit = norm.splits[n - 1]
        pulled = [substitute(c, split.section.images) for c in bases[-1]]
        bases.append(pulled + list(split.k_part))
    return bases


def signature(s: SystemDescription) -> tuple:
    return normalize(s).signature


@dataclass(frozen=True)
class Classification:
    kind: str
    rank: int | None = None
    evidence: tuple = ()

    def __str__(self) -> str:
        if self.kind == "FreeOfRank":
            return f"FreeOfRank({self.rank}) (prefix verdict)"
        if self.kind == "UniversalG":
            return "UniversalG (prefix verdict)"
        return "Undetermined(ranks " + " ".join(map(str, self.evidence)) + ")"


def classify_ranks(ranks: Sequence[int], window: int = 3) -> Classification:
    """Prefix verdict from the rank sequence alone.

    FreeOfRank(r) when the last ``window`` ranks all equal r; UniversalG when
    some strictly increasing run of ranks of length >= ``window`` ends at the
    last level; Undetermined otherwise.
    """
    ranks = tuple(ranks)
    if window < 1:
        raise ValueError("window must be >= 1")
    if len(ranks) >= window and len(set(ranks[-window:])) == 1:
        return Classification("FreeOfRank", ranks[-1], ranks)
    # longest strictly increasing subsequence ending at each level
    best = []
    for i, r in enumerate(ranks):
        best.append(1 + max((best[j] for j in range(i) if ranks[j] < r), default=0))
    if best and best[-1] >= window:
        return Classification("UniversalG", None, ranks)
    return Classification("Undetermined", None, ranks)


def classify(s: SystemDescription, window: int = 3) -> Classification:
    return classify_ranks(s.ranks, window)


# --- constructors ----------------------------------------------------------


def standard_system(levels: int) -> SystemDescription:
    return SystemDescription(
        tuple(range(1, levels + 1)),
        tuple(standard_projection(n, n - 1) for n in range(2, levels + 1)),
    )


def tower(auto: FreeMap, levels: int) -> SystemDescription:
    """Constant-rank system with the same automorphism at every level."""
    return SystemDescription((auto.domain_rank,) * levels, (auto,) * (levels - 1))


def random_move(rng: random.Random, m: int) -> NielsenMove:
    if m == 1:
        return NielsenMove("invert", 0)
    t, s = rng.sample(range(m), 2)
    kind = rng.choice(["right", "right", "left", "left", "swap", "invert"])
    return NielsenMove(kind, t, s, rng.choice((1, -1)))


def _auto_images(move: NielsenMove, m: int) -> list:
    imgs = [Word.generator(k) for k in range(1, m + 1)]
    move.apply(imgs)
    return imgs


def random_surjection(
    rng: random.Random, domain_rank: int, codomain_rank: int, moves: int = 12, max_len: int = 12
) -> FreeMap:
    """A standard projection with random elementary automorphisms applied on
    both sides; moves that would push an image past ``max_len`` are skipped."""
    images = list(standard_projection(domain_rank, codomain_rank).images)
    for _ in range(moves):
        if codomain_rank and rng.random() < 0.5:
            sub = _auto_images(random_move(rng, codomain_rank), codomain_rank)
            trial = [substitute(x, sub) for x in images]
        elif domain_rank:
            trial = list(images)
            random_move(rng, domain_rank).apply(trial)
        else:
            continue
        if all(len(x) <= max_len for x in trial):
            images = trial
    return FreeMap(domain_rank, codomain_rank, tuple(images))


def random_system(
    rng: random.Random, levels: int, max_rank: int = 8, moves: int = 12, max_len: int = 12
) -> SystemDescription:
    ranks = sorted(rng.randint(1, max_rank) for _ in range(levels))
    maps = tuple(
        random_surjection(rng, ranks[n - 1], ranks[n - 2], moves, max_len) for n in range(2, levels + 1)
    )
    return SystemDescription(tuple(ranks), maps)


def random_automorphism(rng: random.Random, rank: int, moves: int = 8, max_len: int = 12) -> FreeMap:
    return random_surjection(rng, rank, rank, moves, max_len)
