"""Damped-oscillation model of a single search step under a timescale hierarchy.

The scenario has four stages: the environment relaxes the system to the
uniform state, a sudden kick applies the oracle, the state oscillates about
its projection onto the uniform state while relaxing, and it is measured at
the far end of the first half-oscillation.

With ``a0 = U_b|s>`` and ``sbar = <s|a0>|s>`` the trajectory is::

    a(t) = sbar + cos(2 pi t / t_osc) * exp(-t / t_r) * (a0 - sbar)

and measurement happens at ``t* = t_osc / 2``, where the cosine is -1 and the
envelope is ``gamma = exp(-t_osc / (2 t_r))``. Without damping this is the
reflection ``2|s><s| - 1`` applied to ``a0``, i.e. one full search round.
Amplitude lost to damping counts as leaked, so the state is renormalised
before the target overlap is taken.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .search_core import SearchProblem, SearchState, apply_oracle, uniform_state


class HierarchyError(ValueError):
    """Timescales violate ``t_b < t_osc <= t_r``."""


@dataclass(frozen=True)
class ReplicationParams:
    t_b: float
    t_osc: float
    t_r: float
    size: int
    target: int = 0

    def __post_init__(self) -> None:
        for name in ("t_b", "t_osc", "t_r"):
            value = getattr(self, name)
            if not value > 0 or not math.isfinite(value):
                raise HierarchyError(f"{name} must be a positive finite time, got {value!r}")
        if self.t_osc > self.t_r:
            raise HierarchyError(
                f"t_osc <= t_r violated: oscillation period {self.t_osc!r} exceeds "
                f"relaxation time {self.t_r!r}; decoherence would win before the "
                "oscillation reaches its far end"
            )
        if self.t_b >= self.t_osc:
            raise HierarchyError(
                f"t_b < t_osc violated: kick duration {self.t_b!r} is not short "
                f"compared with the oscillation period {self.t_osc!r}"
            )
        # reuse the range checks on size and target
        SearchProblem(self.size, self.target)

    @property
    def ratio(self) -> float:
        return self.t_osc / self.t_r


@dataclass(frozen=True)
class ReplicationOutcome:
    final_state: SearchState
    success_probability: float
    damping_factor: float


def kicked_state(size: int, target: int) -> np.ndarray:
    """State right after the sudden oracle kick, ``U_b|s>``."""
    return apply_oracle(uniform_state(size), target).amplitudes.copy()


def trajectory(params: ReplicationParams, t: float | np.ndarray) -> np.ndarray:
    """Unnormalised amplitudes ``a(t)``; one row per time if ``t`` is an array."""
    a0 = kicked_state(params.size, params.target)
    s = uniform_state(params.size).amplitudes
    sbar = float(s @ a0) * s
    t_arr = np.asarray(t, dtype=float)
    envelope = np.cos(2.0 * np.pi * t_arr / params.t_osc) * np.exp(-t_arr / params.t_r)
    return sbar + np.multiply.outer(envelope, a0 - sbar)


def run_replication(params: ReplicationParams) -> ReplicationOutcome:
    t_star = params.t_osc / 2.0
    gamma = math.exp(-t_star / params.t_r)
    amps = trajectory(params, t_star)
    amps = amps / np.linalg.norm(amps)
    state = SearchState(amps)
    return ReplicationOutcome(
        final_state=state,
        success_probability=state.probability(params.target),
        damping_factor=gamma,
    )


def closed_form_probability(size: int, target: int, gamma: float) -> float:
    """Success probability at damping factor ``gamma`` without building states.

    In the plane spanned by the target and the uniform rest, the kicked state
    sits at target amplitude ``-1/sqrt(N)`` and the projection ``sbar`` has
    ``(N-2)/N`` of the uniform amplitude.
    """
    del target  # symmetric in the target index
    n = size
    c = (n - 2.0) / n  # <s|a0>
    u = 1.0 / math.sqrt(n)
    target_amp = c * u - gamma * (-u - c * u)
    other_amp = c * u - gamma * (u - c * u)
    return target_amp**2 / (target_amp**2 + (n - 1) * other_amp**2)


def hierarchy_sweep(
    n: int,
    target: int,
    ratios: Sequence[float],
    kick_fraction: float = 1e-3,
) -> list[tuple[float, float]]:
    """Success probability over a set of ``t_osc / t_r`` ratios.

    ``t_osc`` is fixed at 1 and ``t_b`` at ``kick_fraction * t_osc``; only the
    ratio enters the result. Rows come back in ascending ratio order.

    Probability falls as the ratio grows for every N except 3, where the
    undamped round overshoots (p = 25/27) and damping helps. N = 2 is flat
    at 1/2.
    """
    if not 0 < kick_fraction < 1:
        raise HierarchyError(f"kick_fraction must lie in (0, 1), got {kick_fraction!r}")
    for r in ratios:
        if not 0 < r <= 1:
            raise HierarchyError(
                f"ratio t_osc/t_r = {r!r} outside (0, 1]; the bound t_osc <= t_r must hold"
            )
    rows = []
    for r in sorted(ratios):
        params = ReplicationParams(t_b=kick_fraction, t_osc=1.0, t_r=1.0 / r, size=n, target=target)
        rows.append((float(r), run_replication(params).success_probability))
    return rows
