"""Population evolution under a linear, resource-conserving update.

Populations evolve as ``phi(t+1) = M @ phi(t)`` where every column of ``M``
sums to one, so the total population is conserved. ``M`` is either
column-stochastic (entries in [0, 1]) or signed (negative couplings
allowed). A signed ``M`` can drive a population below zero. Two policies
handle that: ``STRICT`` raises, ``PROJECTED`` clamps negative entries to
zero, rescales back to the total and counts the event.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

COLUMN_SUM_TOL = 1e-12
TOTAL_REL_TOL = 1e-9
DEFAULT_WINNER_THRESHOLD = 0.99
DEFAULT_STATIONARITY_TOL = 1e-8
DEFAULT_MAX_STEPS = 1_000_000


class Mode(str, enum.Enum):
    STOCHASTIC = "stochastic"
    SIGNED = "signed"


class Policy(str, enum.Enum):
    STRICT = "strict"
    PROJECTED = "projected"


class ColumnSumError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(message)
        self.column = column


class InfeasibleError(ArithmeticError):
    """A strict-policy step produced a negative population."""

    def __init__(self, species: int, value: float, step: int | None = None):
        where = f" at step {step}" if step is not None else ""
        super().__init__(f"species {species} went negative ({value!r}){where}")
        self.species = species
        self.value = value
        self.step = step


@dataclass(frozen=True)
class PopulationVector:
    phi: np.ndarray
    total: float

    def __post_init__(self) -> None:
        phi = np.array(self.phi, dtype=float)
        if phi.ndim != 1 or phi.size == 0:
            raise ValueError("phi must be a non-empty 1-D vector")
        if not self.total > 0:
            raise ValueError(f"total must be positive, got {self.total!r}")
        neg = np.flatnonzero(phi < 0)
        if neg.size:
            raise ValueError(f"species {int(neg[0])} has negative population {float(phi[neg[0]])!r}")
        if abs(phi.sum() - self.total) > TOTAL_REL_TOL * self.total:
            raise ValueError(f"populations sum to {float(phi.sum())!r}, expected total {self.total!r}")
        phi.flags.writeable = False
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "total", float(self.total))

    @classmethod
    def of(cls, values: Sequence[float]) -> "PopulationVector":
        phi = np.asarray(values, dtype=float)
        return cls(phi, float(phi.sum()))

    @property
    def size(self) -> int:
        return int(self.phi.size)


@dataclass(frozen=True)
class EvolutionMatrix:
    entries: np.ndarray
    mode: Mode = Mode.STOCHASTIC

    def __post_init__(self) -> None:
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValueError(f"evolution matrix must be square and non-empty, got shape {m.shape}")
        mode = Mode(self.mode)
        sums = m.sum(axis=0)
        bad = np.flatnonzero(np.abs(sums - 1.0) > COLUMN_SUM_TOL)
        if bad.size:
            j = int(bad[0])
            raise ColumnSumError(f"column {j} sums to {float(sums[j])!r}, expected 1", column=j)
        if mode is Mode.STOCHASTIC and ((m < 0).any() or (m > 1).any()):
            raise ValueError("stochastic mode requires every entry in [0, 1]")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "mode", mode)

    @classmethod
    def infer(cls, entries) -> "EvolutionMatrix":
        """Stochastic if every entry lies in [0, 1], signed otherwise."""
        m = np.asarray(entries, dtype=float)
        mode = Mode.STOCHASTIC if ((m >= 0) & (m <= 1)).all() else Mode.SIGNED
        return cls(m, mode)

    @property
    def size(self) -> int:
        return int(self.entries.shape[0])


@dataclass(frozen=True)
class ConvergenceReport:
    """``None`` in a step field means the event was not reached."""

    steps_to_winner: int | None
    winner: int | None
    stationarity_steps: int | None
    negativity_events: int
    steps_run: int

    @property
    def winner_reached(self) -> bool:
        return self.steps_to_winner is not None


def _advance(phi: np.ndarray, total: float, m: np.ndarray, policy: Policy) -> tuple[np.ndarray, bool]:
    new = m @ phi
    if not (new < 0).any():
        return new, False
    if policy is Policy.STRICT:
        i = int(np.flatnonzero(new < 0)[0])
        raise InfeasibleError(i, float(new[i]))
    clamped = np.clip(new, 0.0, None)
    mass = clamped.sum()
    if mass <= 0:
        raise InfeasibleError(int(np.argmin(new)), float(new.min()))
    return clamped * (total / mass), True


def _check_dims(pop: PopulationVector, m: EvolutionMatrix) -> None:
    if pop.size != m.size:
        raise ValueError(f"shape mismatch: {pop.size} species but a {m.size}x{m.size} matrix")


def step(pop: PopulationVector, m: EvolutionMatrix, policy: Policy = Policy.STRICT) -> PopulationVector:
    _check_dims(pop, m)
    new, _ = _advance(pop.phi, pop.total, m.entries, Policy(policy))
    return PopulationVector(new, pop.total)


def evolve(
    pop: PopulationVector,
    m: EvolutionMatrix,
    steps: int,
    policy: Policy = Policy.STRICT,
) -> list[PopulationVector]:
    """Trajectory of length ``steps + 1`` starting at ``pop``."""
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    _check_dims(pop, m)
    policy = Policy(policy)
    traj = [pop]
    phi = pop.phi
    for t in range(1, steps + 1):
        try:
            phi, _ = _advance(phi, pop.total, m.entries, policy)
        except InfeasibleError as exc:
            raise InfeasibleError(exc.species, exc.value, step=t) from None
        traj.append(PopulationVector(phi, pop.total))
    return traj


def convergence_time(
    pop: PopulationVector,
    m: EvolutionMatrix,
    policy: Policy = Policy.STRICT,
    winner_threshold: float = DEFAULT_WINNER_THRESHOLD,
    stationarity_tol: float = DEFAULT_STATIONARITY_TOL,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> ConvergenceReport:
    """Steps until one species dominates and until the populations settle.

    ``steps_to_winner`` is the first ``t >= 0`` with ``max(phi)/total`` at or
    above ``winner_threshold``. ``stationarity_steps`` is the first ``t >= 1``
    whose L1 change from ``t - 1``, relative to the total, is at most
    ``stationarity_tol``.
    """
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    if not 0.5 < winner_threshold <= 1.0:
        raise ValueError(f"winner_threshold must lie in (0.5, 1], got {winner_threshold!r}")
    _check_dims(pop, m)
    policy = Policy(policy)
    total = pop.total
    phi = pop.phi
    entries = m.entries

    steps_to_winner = winner = stationarity = None
    events = 0
    if phi.max() / total >= winner_threshold:
        steps_to_winner, winner = 0, int(np.argmax(phi))

    t = 0
    while t < max_steps and (steps_to_winner is None or stationarity is None):
        t += 1
        try:
            new, clamped = _advance(phi, total, entries, policy)
        except InfeasibleError as exc:
            raise InfeasibleError(exc.species, exc.value, step=t) from None
        events += clamped
        if stationarity is None and np.abs(new - phi).sum() / total <= stationarity_tol:
            stationarity = t
        if steps_to_winner is None and new.max() / total >= winner_threshold:
            steps_to_winner, winner = t, int(np.argmax(new))
        if np.array_equal(new, phi):
            # exact fixed point: nothing further can change
            phi = new
            break
        phi = new

    return ConvergenceReport(
        steps_to_winner=steps_to_winner,
        winner=winner,
        stationarity_steps=stationarity,
        negativity_events=int(events),
        steps_run=t,
    )


def convergence_rate(
    m: EvolutionMatrix,
    steps: int = 400,
    tail_fraction: float = 0.5,
    seed: int = 0,
) -> float:
    """Measured geometric decay rate of population differences under ``M``.

    Differences between two populations with the same total evolve under the
    same linear map and always sum to zero. The difference is renormalised
    each step so the tail never underflows, and the rate is the log-slope of
    its norm over the last ``tail_fraction`` of the run. Returns 0 when the
    difference vanishes exactly.
    """
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    n = m.size
    if n == 1:
        return 0.0
    rng = np.random.default_rng(seed)
    diff = rng.standard_normal(n)
    entries = m.entries
    start = int(steps * (1.0 - tail_fraction))
    log_growth = 0.0
    for t in range(steps):
        diff = diff - diff.mean()
        norm = np.linalg.norm(diff)
        if norm == 0.0:
            return 0.0
        diff = entries @ (diff / norm)
        if t >= start:
            log_growth += math.log(max(np.linalg.norm(diff - diff.mean()), 1e-300))
    return math.exp(log_growth / (steps - start))


def trajectory_rate(trajectory: Sequence[PopulationVector], floor: float = 1e-13) -> float | None:
    """Log-slope fit of successive L1 changes along a recorded trajectory.

    Only changes above ``floor`` (relative to the total) take part, and the
    fit uses the later half of those. ``None`` if fewer than 3 points remain.
    """
    total = trajectory[0].total
    changes = [
        np.abs(b.phi - a.phi).sum() / total for a, b in zip(trajectory, trajectory[1:])
    ]
    usable = [(t, c) for t, c in enumerate(changes) if c > floor]
    usable = usable[len(usable) // 2:]
    if len(usable) < 3:
        return None
    ts = np.array([t for t, _ in usable], dtype=float)
    logs = np.log([c for _, c in usable])
    slope = np.polyfit(ts, logs, 1)[0]
    return float(math.exp(slope))


@dataclass(frozen=True)
class SpeedupRow:
    lam: float
    feasible: bool
    steps_to_winner: int | None
    winner: int | None
    stationarity_steps: int | None
    negativity_events: int
    mode: Mode | None
    note: str = ""


def perturbed_matrix(base: EvolutionMatrix, perturbation: np.ndarray, lam: float) -> EvolutionMatrix:
    return EvolutionMatrix.infer(base.entries + lam * np.asarray(perturbation, dtype=float))


def speedup_experiment(
    base: EvolutionMatrix,
    perturbation,
    lambdas: Sequence[float],
    pop: PopulationVector,
    policy: Policy = Policy.STRICT,
    winner_threshold: float = DEFAULT_WINNER_THRESHOLD,
    stationarity_tol: float = DEFAULT_STATIONARITY_TOL,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> list[SpeedupRow]:
    """Convergence of ``M(lam) = base + lam * A`` over a list of ``lam``.

    ``A`` must have zero column sums so every ``M(lam)`` conserves the total.
    A ``lam`` whose matrix makes a population negative under ``STRICT`` is
    reported as infeasible rather than aborting the sweep.
    """
    if base.mode is not Mode.STOCHASTIC:
        raise ValueError("the base matrix must be stochastic")
    a = np.asarray(perturbation, dtype=float)
    if a.shape != base.entries.shape:
        raise ValueError(f"perturbation shape {a.shape} does not match base {base.entries.shape}")
    sums = a.sum(axis=0)
    bad = np.flatnonzero(np.abs(sums) > COLUMN_SUM_TOL)
    if bad.size:
        j = int(bad[0])
        raise ColumnSumError(f"perturbation column {j} sums to {float(sums[j])!r}, expected 0", column=j)

    rows = []
    for lam in sorted(float(x) for x in lambdas):
        m = base if lam == 0.0 else perturbed_matrix(base, a, lam)
        try:
            rep = convergence_time(pop, m, policy, winner_threshold, stationarity_tol, max_steps)
        except InfeasibleError as exc:
            rows.append(SpeedupRow(lam, False, None, None, None, 0, m.mode, note=str(exc)))
            continue
        rows.append(
            SpeedupRow(
                lam,
                True,
                rep.steps_to_winner,
                rep.winner,
                rep.stationarity_steps,
                rep.negativity_events,
                m.mode,
            )
        )
    return rows


def second_eigenvalue_modulus(m: EvolutionMatrix) -> float:
    """``|lambda_2|``: largest eigenvalue modulus once the unit eigenvalue is removed."""
    vals = np.linalg.eigvals(m.entries)
    if vals.size == 1:
        return 0.0
    unit = int(np.argmin(np.abs(vals - 1.0)))
    rest = np.delete(vals, unit)
    return float(np.abs(rest).max())
