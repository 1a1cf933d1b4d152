"""Success probability of one damped search round across the timescale ratio."""

from dataclasses import dataclass

import numpy as np

from quantumbio.replication_model import hierarchy_sweep


@dataclass
class Config:
    sizes: tuple[int, ...] = (2, 3, 4, 10, 20)
    ratios: tuple[float, ...] = tuple(np.geomspace(1e-3, 1.0, 10))


def main(cfg: Config = Config()) -> None:
    print("ratio     " + "".join(f"N={n:<8}" for n in cfg.sizes))
    table = {n: dict(hierarchy_sweep(n, 0, cfg.ratios)) for n in cfg.sizes}
    for r in sorted(cfg.ratios):
        print(f"{r:<10.4g}" + "".join(f"{table[n][r]:<10.6f}" for n in cfg.sizes))


if __name__ == "__main__":
    main()
