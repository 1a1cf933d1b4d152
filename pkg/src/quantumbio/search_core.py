"""Exact small-N simulation of quantum database search.

Amplitudes are kept as signed reals. Both reflections used by the
algorithm (the oracle ``1 - 2|b><b|`` and the diffusion ``2|s><s| - 1``)
are real matrices, so a state that starts uniform never acquires a
complex phase.

Target indices are zero-based throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12
TIE_TOL = 1e-12


@dataclass(frozen=True)
class SearchState:
    """Unit vector of real amplitudes over ``size`` database items."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=float)
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError("amplitudes must be a non-empty 1-D vector")
        norm2 = float(amps @ amps)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalised: sum of squares = {norm2!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def size(self) -> int:
        return int(self.amplitudes.size)

    def probability(self, index: int) -> float:
        return float(self.amplitudes[index] ** 2)


@dataclass(frozen=True)
class SearchProblem:
    size: int
    target: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"database size must be >= 1, got {self.size}")
        if not 0 <= self.target < self.size:
            raise IndexError(f"target {self.target} outside [0, {self.size})")


@dataclass(frozen=True)
class QuerySolution:
    """Real-valued query count, its integer rounding and the leftover error."""

    q_real: float
    q_int: int
    residual_error: float


def uniform_state(n: int) -> SearchState:
    if n < 1:
        raise ValueError(f"database size must be >= 1, got {n}")
    return SearchState(np.full(n, 1.0 / math.sqrt(n)))


def apply_oracle(state: SearchState, target: int) -> SearchState:
    """Flip the sign of the target amplitude."""
    if not 0 <= target < state.size:
        raise IndexError(f"target {target} outside [0, {state.size})")
    amps = state.amplitudes.copy()
    amps[target] = -amps[target]
    return SearchState(amps)


def apply_diffusion(state: SearchState) -> SearchState:
    """Reflect every amplitude about the mean amplitude."""
    amps = state.amplitudes
    return SearchState(2.0 * amps.mean() - amps)


def grover_iterate(problem: SearchProblem, q: int) -> SearchState:
    """Apply ``q`` rounds of oracle-then-diffusion to the uniform state."""
    if q < 0:
        raise ValueError(f"query count must be >= 0, got {q}")
    state = uniform_state(problem.size)
    for _ in range(q):
        state = apply_diffusion(apply_oracle(state, problem.target))
    return state


def grover_trace(problem: SearchProblem, q: int) -> list[tuple[int, str, SearchState]]:
    """Every intermediate state of ``grover_iterate`` as ``(round, stage, state)``.

    The first entry is ``(0, "uniform", ...)``; each round then contributes an
    ``"oracle"`` and a ``"diffusion"`` entry.
    """
    if q < 0:
        raise ValueError(f"query count must be >= 0, got {q}")
    state = uniform_state(problem.size)
    trace = [(0, "uniform", state)]
    for k in range(1, q + 1):
        state = apply_oracle(state, problem.target)
        trace.append((k, "oracle", state))
        state = apply_diffusion(state)
        trace.append((k, "diffusion", state))
    return trace


def _half_angle(n: int) -> float:
    return math.asin(1.0 / math.sqrt(n))


def success_probability(problem: SearchProblem, q: int) -> float:
    """Closed-form probability of measuring the target after ``q`` rounds."""
    if q < 0:
        raise ValueError(f"query count must be >= 0, got {q}")
    theta = _half_angle(problem.size)
    return math.sin((2 * q + 1) * theta) ** 2


def optimal_queries(n: int) -> QuerySolution:
    """Solve ``(2Q+1) asin(1/sqrt(n)) = pi/2`` and round Q to the better integer.

    Floor and ceiling of the real solution are both evaluated; the one with
    the higher success probability wins, ties going to fewer queries.
    """
    if n < 1:
        raise ValueError(f"database size must be >= 1, got {n}")
    theta = _half_angle(n)
    q_real = (math.pi / (2.0 * theta) - 1.0) / 2.0
    # q_real can land a few ulps below an exact integer (n=4 gives 0.9999...).
    nearest = round(q_real)
    if abs(q_real - nearest) <= 1e-9:
        q_real = float(nearest)
        return QuerySolution(q_real=q_real, q_int=int(nearest), residual_error=0.0)

    best_q, best_p = 0, -1.0
    for cand in sorted({max(0, math.floor(q_real)), max(0, math.ceil(q_real))}):
        p = math.sin((2 * cand + 1) * theta) ** 2
        # slack so float noise cannot break a genuine tie (n=2)
        if p > best_p + TIE_TOL:
            best_q, best_p = cand, p
    residual = min(1.0, max(0.0, 1.0 - best_p))
    return QuerySolution(q_real=q_real, q_int=best_q, residual_error=residual)


def database_size_for_queries(q: float) -> float:
    """Database size whose optimal search takes exactly ``q`` queries.

    Integer ``q`` is the usual case; non-integer ``q`` is accepted so that a
    real-valued query count can be mapped back to its size.
    """
    if q < 0:
        raise ValueError(f"query count must be >= 0, got {q}")
    return 1.0 / math.sin(math.pi / (2.0 * (2.0 * q + 1.0))) ** 2


def classical_query_counts(n: int) -> tuple[float, float]:
    """Binary questions needed classically: ``(sorted, unsorted expected)``."""
    if n < 1:
        raise ValueError(f"database size must be >= 1, got {n}")
    return math.log2(n), n / 2.0
