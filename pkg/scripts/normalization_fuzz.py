"""Normalize many random surjective systems; report square checks, signature
agreement with rank differences, and how the level isomorphisms grow."""
import argparse
import random
import statistics
import time
from dataclasses import dataclass

from higman.invsystem import normalize, random_system, square_holds


@dataclass
class Config:
    systems: int = 200
    max_levels: int = 6
    max_rank: int = 8
    max_len: int = 12
    seed: int = 0


def main(cfg: Config):
    rng = random.Random(cfg.seed)
    failures, theta_sizes, times = 0, [], []
    for _ in range(cfg.systems):
        s = random_system(rng, rng.randint(1, cfg.max_levels), cfg.max_rank, max_len=cfg.max_len)
        start = time.perf_counter()
        norm = normalize(s)
        times.append(time.perf_counter() - start)
        for n in range(2, s.levels + 1):
            ok = square_holds(s, norm.level_isos, n)
            ok &= norm.signature[n - 1] == (s.rank(n - 1), s.rank(n) - s.rank(n - 1))
            failures += not ok
        theta_sizes.append(sum(len(x) for x in norm.level_isos[-1].images))
    print(f"systems {cfg.systems}  failures {failures}")
    print(f"normalize time: mean {statistics.mean(times) * 1e3:.1f} ms, max {max(times) * 1e3:.1f} ms")
    print(f"top-level theta total length: median {statistics.median(theta_sizes)}, max {max(theta_sizes)}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        p.add_argument("--" + name.replace("_", "-"), type=int, default=default)
    main(Config(**vars(p.parse_args())))
