"""Print the amplitude trace of a single search round on a small database."""

from dataclasses import dataclass

from quantumbio.search_core import SearchProblem, grover_trace


@dataclass
class Config:
    size: int = 4
    target: int = 0
    queries: int = 1


def main(cfg: Config = Config()) -> None:
    for rnd, stage, state in grover_trace(SearchProblem(cfg.size, cfg.target), cfg.queries):
        amps = " ".join(f"{a:+.4f}" for a in state.amplitudes)
        print(f"{rnd:>2} {stage:<9} {amps}  p={state.probability(cfg.target):.6f}")


if __name__ == "__main__":
    main()
