"""Compare folding membership with bounded-factor product search on the rank-2
corpus: how many members each factor bound misses."""
import argparse
import itertools
from collections import Counter
from dataclasses import dataclass

from higman.stallings import contains, express_in_basis, fold
from higman.word import IDENTITY, Word, invert, multiply


@dataclass
class Config:
    stride: int = 33
    max_factors: int = 8
    gen_len: int = 3
    target_len: int = 6


def reduced_words(max_len, min_len=0):
    out, frontier = ([IDENTITY] if min_len == 0 else []), [()]
    for n in range(1, max_len + 1):
        frontier = [t + (x,) for t in frontier for x in (1, -1, 2, -2) if not t or t[-1] != -x]
        if n >= min_len:
            out += [Word(t) for t in frontier]
    return out


def main(cfg: Config):
    pairs = list(itertools.combinations(reduced_words(cfg.gen_len, 1), 2))[:: cfg.stride]
    targets = reduced_words(cfg.target_len)
    members, needed = 0, Counter()
    for gens in pairs:
        graph = fold(list(gens), 2)
        signed = list(gens) + [invert(g) for g in gens]
        first_seen, layer = {IDENTITY: 0}, {IDENTITY}
        for k in range(1, cfg.max_factors + 1):
            layer = {multiply(a, s) for a in layer for s in signed}
            for x in layer:
                first_seen.setdefault(x, k)
        for target in targets:
            if contains(graph, target):
                members += 1
                # the fold's own witness bounds the factor count from above
                witness = len(express_in_basis(list(gens), target, 2))
                k = first_seen.get(target)
                needed[(0, k) if k is not None else (1, witness)] += 1
    print(f"pairs {len(pairs)}  targets {len(targets)}  cases {len(pairs) * len(targets)}  members {members}")
    for (missed, k), count in sorted(needed.items()):
        label = f">{cfg.max_factors}, witness uses {k}" if missed else str(k)
        print(f"  fewest factors {label}: {count}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        p.add_argument("--" + name.replace("_", "-"), type=int, default=default)
    main(Config(**vars(p.parse_args())))
