"""Convergence of a 3-species population as a signed perturbation is mixed in."""

from dataclasses import dataclass, field

import numpy as np

from quantumbio.evolution_dynamics import (
    EvolutionMatrix,
    Mode,
    Policy,
    PopulationVector,
    second_eigenvalue_modulus,
    speedup_experiment,
)


@dataclass
class Config:
    base: list = field(default_factory=lambda: [[0.8, 0.1, 0.1], [0.1, 0.8, 0.1], [0.1, 0.1, 0.8]])
    perturbation: list = field(default_factory=lambda: [[0.1, -0.05, -0.05], [-0.05, 0.1, -0.05], [-0.05, -0.05, 0.1]])
    population: tuple = (0.5, 0.3, 0.2)
    lambdas: tuple = tuple(np.round(np.linspace(-10.0, 2.0, 13), 3))
    policy: Policy = Policy.STRICT


def main(cfg: Config = Config()) -> None:
    base = EvolutionMatrix(np.array(cfg.base), Mode.STOCHASTIC)
    rows = speedup_experiment(base, cfg.perturbation, cfg.lambdas, PopulationVector.of(cfg.population), cfg.policy)
    print("lambda   feasible |lambda2|  stationarity  note")
    for r in rows:
        m = np.array(cfg.base) + r.lam * np.array(cfg.perturbation)
        print(f"{r.lam:<8g} {str(r.feasible):<8} {second_eigenvalue_modulus(EvolutionMatrix.infer(m)):<9.4f} "
              f"{str(r.stationarity_steps):<13} {r.note}")


if __name__ == "__main__":
    main()
