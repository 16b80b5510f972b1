"""Check the counterexample table identities at a range of depths and report
factoring depths n(i) with timings."""
import argparse
import time
from dataclasses import dataclass

from higman.endo import counterexample_table, factoring_depth, verify_counterexample


@dataclass
class Config:
    depths: tuple = (8, 12, 16, 24, 32, 48)
    factoring_up_to: int = 20


def main(cfg: Config):
    for J in cfg.depths:
        start = time.perf_counter()
        report = verify_counterexample(J)
        elapsed = time.perf_counter() - start
        print(f"J={J:3d}  relations i={report.relation_indices}  {elapsed:.3f}s")
    t = counterexample_table(cfg.factoring_up_to + 4)
    print("i    n(i)  n(i)-i")
    for i in range(1, cfg.factoring_up_to + 1):
        n = factoring_depth(t, i)
        print(f"{i:<4d} {n:<5d} {n - i}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--depths", type=int, nargs="+", default=list(Config.depths))
    p.add_argument("--factoring-up-to", type=int, default=Config.factoring_up_to)
    a = p.parse_args()
    main(Config(tuple(a.depths), a.factoring_up_to))
