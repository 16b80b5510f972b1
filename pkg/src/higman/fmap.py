"""Homomorphisms between finite-rank free groups, stored as image tables."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .word import IDENTITY, Word, format_word, substitute


class DomainError(ValueError):
    """A word uses a generator outside the map's domain."""


class RankMismatch(ValueError):
    pass


@dataclass(frozen=True)
class FreeMap:
    """f: F_domain_rank -> F_codomain_rank with f(a_k) = images[k-1]."""

    domain_rank: int
    codomain_rank: int
    images: tuple

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if self.domain_rank < 0 or self.codomain_rank < 0:
            raise ValueError("ranks must be non-negative")
        if len(images) != self.domain_rank:
            raise ValueError(
                f"expected {self.domain_rank} images, got {len(images)}"
            )
        for k, img in enumerate(images, 1):
            if not isinstance(img, Word):
                raise TypeError(f"image {k} is not a Word: {img!r}")
            if img.rank > self.codomain_rank:
                raise ValueError(
                    f"image of a{k} uses a{img.rank} outside rank {self.codomain_rank}"
                )

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def __str__(self) -> str:
        return format_map(self)


def apply(f: FreeMap, w: Word) -> Word:
    if w.rank > f.domain_rank:
        raise DomainError(f"a{w.rank} is outside the domain rank {f.domain_rank}")
    return substitute(w, f.images)


def identity(rank: int) -> FreeMap:
    return FreeMap(rank, rank, tuple(Word.generator(k) for k in range(1, rank + 1)))


def standard_projection(i: int, j: int) -> FreeMap:
    """The map A_i -> A_j fixing a_k for k <= j and killing the rest."""
    if i < j or j < 0:
        raise ValueError(f"standard projection needs i >= j >= 0, got ({i}, {j})")
    return FreeMap(
        i, j, tuple(Word.generator(k) if k <= j else IDENTITY for k in range(1, i + 1))
    )


def compose(f: FreeMap, g: FreeMap) -> FreeMap:
    """Apply f first, then g."""
    if f.codomain_rank != g.domain_rank:
        raise RankMismatch(
            f"cannot compose F_{f.domain_rank}->F_{f.codomain_rank} "
            f"with F_{g.domain_rank}->F_{g.codomain_rank}"
        )
    return FreeMap(f.domain_rank, g.codomain_rank, tuple(apply(g, img) for img in f.images))


def from_images(images: Sequence[Word], codomain_rank: int | None = None) -> FreeMap:
    images = tuple(images)
    if codomain_rank is None:
        codomain_rank = max((img.rank for img in images), default=0)
    return FreeMap(len(images), codomain_rank, images)


def is_identity(f: FreeMap) -> bool:
    return f.domain_rank == f.codomain_rank and all(
        img.letters == (k,) for k, img in enumerate(f.images, 1)
    )


def is_surjective(f: FreeMap) -> bool:
    """Decided by folding the image subgroup and comparing with the rose."""
    from .stallings import fold

    return fold(f.images, f.codomain_rank).is_rose()


def format_map(f: FreeMap) -> str:
    lines = [f"map {f.domain_rank} {f.codomain_rank}"]
    lines += [format_word(img) for img in f.images]
    return "\n".join(lines) + "\n"
