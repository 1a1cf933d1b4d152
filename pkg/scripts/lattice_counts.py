"""Count self-avoiding backbone conformations on the diamond lattice."""

import time
from dataclasses import dataclass

from quantumbio.lattice_folding import enumerate_conformations


@dataclass
class Config:
    max_units: int = 6
    allow_cis: bool = False
    threads: int = 1


def main(cfg: Config = Config()) -> None:
    prev = None
    for n in range(1, cfg.max_units + 1):
        start = time.perf_counter()
        count = enumerate_conformations(n, cfg.allow_cis, threads=cfg.threads).count
        growth = "" if prev is None else f"{count / prev:.3f}"
        print(f"n={n:<3} count={count:<10} growth={growth:<7} {time.perf_counter() - start:.2f}s")
        prev = count


if __name__ == "__main__":
    main()
