import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quantumbio.evolution_dynamics import (
    ColumnSumError,
    EvolutionMatrix,
    InfeasibleError,
    Mode,
    Policy,
    PopulationVector,
    convergence_rate,
    convergence_time,
    evolve,
    speedup_experiment,
    step,
    trajectory_rate,
)


def stochastic(entries):
    return EvolutionMatrix(np.array(entries, dtype=float), Mode.STOCHASTIC)


def signed(entries):
    return EvolutionMatrix(np.array(entries, dtype=float), Mode.SIGNED)


def second_modulus(m):
    """Oracle: eigen-decomposition, unit eigenvalue removed."""
    vals = np.linalg.eigvals(np.asarray(m, dtype=float))
    vals = sorted(vals, key=lambda v: abs(v - 1))[1:]
    return max(abs(v) for v in vals)


def test_matrix_validation():
    with pytest.raises(ColumnSumError) as err:
        stochastic([[0.5, 0.6], [0.5, 0.5]])
    assert err.value.column == 1
    with pytest.raises(ValueError):
        stochastic([[1.2, 0.2], [-0.2, 0.8]])
    assert EvolutionMatrix.infer([[1.2, 0.2], [-0.2, 0.8]]).mode is Mode.SIGNED


def test_step_examples():
    pop = PopulationVector.of([0.3, 0.2, 0.5])
    np.testing.assert_array_equal(step(pop, stochastic(np.eye(3))).phi, pop.phi)
    out = step(PopulationVector.of([1.0, 0.0]), stochastic([[0.5, 0.5], [0.5, 0.5]]))
    np.testing.assert_allclose(out.phi, [0.5, 0.5], atol=1e-15)
    m = signed([[1.2, 0.2], [-0.2, 0.8]])
    for policy in Policy:
        np.testing.assert_allclose(step(PopulationVector.of([0.5, 0.5]), m, policy).phi, [0.7, 0.3], atol=1e-15)


def test_strict_infeasible_and_projected_clamp():
    m = signed([[1.5, 1.0], [-0.5, 0.0]])
    pop = PopulationVector.of([0.8, 0.2])
    # M @ phi = [1.4, -0.4]
    with pytest.raises(InfeasibleError) as err:
        step(pop, m, Policy.STRICT)
    assert err.value.species == 1
    out = step(pop, m, Policy.PROJECTED)
    np.testing.assert_allclose(out.phi, [1.0, 0.0], atol=1e-15)
    rep = convergence_time(pop, m, Policy.PROJECTED, max_steps=10)
    assert rep.negativity_events >= 1
    with pytest.raises(InfeasibleError) as err:
        evolve(pop, m, 3, Policy.STRICT)
    assert err.value.step == 1


def test_shape_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        step(PopulationVector.of([1, 0, 0]), stochastic(np.eye(2)))


def test_evolve_examples():
    pop = PopulationVector.of([0.2, 0.8])
    assert evolve(pop, stochastic(np.eye(2)), 0) == [pop]
    perm = stochastic([[0, 1], [1, 0]])
    traj = evolve(pop, perm, 6)
    for t, p in enumerate(traj):
        np.testing.assert_array_equal(p.phi, [0.2, 0.8] if t % 2 == 0 else [0.8, 0.2])


def test_evolve_approaches_perron_vector():
    m = np.array([[0.7, 0.4], [0.3, 0.6]])
    vals, vecs = np.linalg.eig(m)
    perron = np.real(vecs[:, np.argmax(np.real(vals))])
    perron = perron / perron.sum()
    traj = evolve(PopulationVector.of([1.0, 0.0]), stochastic(m), 200)
    np.testing.assert_allclose(traj[-1].phi, perron, atol=1e-12)


def test_convergence_examples():
    m = stochastic([[0.5, 0.5], [0.5, 0.5]])
    assert convergence_time(PopulationVector.of([0.995, 0.005]), m).steps_to_winner == 0
    take_all = stochastic([[1, 1], [0, 0]])
    rep = convergence_time(PopulationVector.of([0.5, 0.5]), take_all, winner_threshold=0.99)
    assert (rep.steps_to_winner, rep.winner) == (1, 0)


def test_identity_never_picks_winner():
    rep = convergence_time(PopulationVector.of([0.5, 0.5]), stochastic(np.eye(2)))
    assert rep.steps_to_winner is None and rep.winner is None
    assert not rep.winner_reached


def test_stationarity_follows_second_eigenvalue():
    # 0.5 I + 0.5 J/3: eigenvalues 1, 0.5, 0.5
    m = 0.5 * np.eye(3) + 0.5 / 3 * np.ones((3, 3))
    assert second_modulus(m) == pytest.approx(0.5, abs=1e-12)
    tol = 1e-8
    predicted = math.log(tol) / math.log(second_modulus(m))
    rep = convergence_time(PopulationVector.of([1.0, 0.0, 0.0]), stochastic(m), stationarity_tol=tol)
    assert abs(rep.stationarity_steps - predicted) <= 2


def test_speedup_identity_example():
    base = stochastic([[0.9, 0.1], [0.1, 0.9]])
    a = [[0.1, -0.1], [-0.1, 0.1]]
    pop = PopulationVector.of([0.6, 0.4])
    (row,) = speedup_experiment(base, a, [1.0], pop)
    assert row.feasible and row.steps_to_winner is None


def test_speedup_second_eigenvalue_tracks_convergence():
    base = np.array([[0.6, 0.4], [0.4, 0.6]])
    a = np.array([[0.4, -0.4], [-0.4, 0.4]])
    pop = PopulationVector.of([0.9, 0.1])
    rows = {r.lam: r for r in speedup_experiment(stochastic(base), a, [0.5, 0.0, -0.2], pop)}
    lam2 = {lam: second_modulus(base + lam * a) for lam in rows}
    # oracle: lambda=0.5 -> 0.6, lambda=0 -> 0.2, lambda=-0.2 -> 0.04
    assert lam2[0.5] == pytest.approx(0.6) and lam2[0.0] == pytest.approx(0.2)
    assert lam2[-0.2] == pytest.approx(0.04)
    order = sorted(rows, key=lambda lam: lam2[lam])
    times = [rows[lam].stationarity_steps for lam in order]
    assert times == sorted(times) and len(set(times)) == 3


def test_speedup_rows_sorted_and_infeasible_marked():
    base = stochastic([[0.6, 0.4], [0.4, 0.6]])
    a = [[0.4, -0.4], [-0.4, 0.4]]
    rows = speedup_experiment(base, a, [0.5, -2.0, 0.0], PopulationVector.of([0.7, 0.3]))
    assert [r.lam for r in rows] == [-2.0, 0.0, 0.5]
    assert not rows[0].feasible and "negative" in rows[0].note
    assert rows[1].feasible


def test_speedup_rejects_bad_perturbation():
    with pytest.raises(ColumnSumError):
        speedup_experiment(stochastic(np.eye(2)), [[0.1, 0.0], [0.0, 0.0]], [0.0], PopulationVector.of([1, 0]))


def test_speedup_baseline_equivalence():
    base = stochastic([[0.7, 0.2, 0.1], [0.2, 0.5, 0.3], [0.1, 0.3, 0.6]])
    a = np.array([[0.1, 0, -0.1], [-0.1, 0, 0.1], [0, 0, 0]])
    pop = PopulationVector.of([0.2, 0.3, 0.5])
    (row,) = [r for r in speedup_experiment(base, a, [-0.5, 0.0, 0.5], pop) if r.lam == 0.0]
    rep = convergence_time(pop, base)
    assert (row.steps_to_winner, row.winner, row.stationarity_steps, row.negativity_events) == (
        rep.steps_to_winner, rep.winner, rep.stationarity_steps, rep.negativity_events)


def random_column_stochastic(rng, n):
    return rng.dirichlet(np.ones(n), size=n).T


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_resource_conservation(n, seed):
    rng = np.random.default_rng(seed)
    m = stochastic(random_column_stochastic(rng, n))
    pop = PopulationVector.of(rng.random(n) * 5 + 1e-3)
    for p in evolve(pop, m, 30):
        assert abs(p.phi.sum() - pop.total) <= 1e-9 * pop.total
        assert (p.phi >= -1e-12).all()


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1), st.floats(0.1, 3), st.floats(0.1, 3))
def test_linearity(n, seed, alpha, beta):
    rng = np.random.default_rng(seed)
    m = stochastic(random_column_stochastic(rng, n))
    x, y = rng.random(n) + 0.01, rng.random(n) + 0.01
    combo = step(PopulationVector.of(alpha * x + beta * y), m).phi
    parts = alpha * step(PopulationVector.of(x), m).phi + beta * step(PopulationVector.of(y), m).phi
    np.testing.assert_allclose(combo, parts, rtol=0, atol=1e-10)


@pytest.mark.parametrize("seed", range(20))
def test_rate_law(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    m = random_column_stochastic(rng, n)
    expected = second_modulus(m)
    assert convergence_rate(stochastic(m)) == pytest.approx(expected, rel=0.05)


def test_trajectory_rate_on_slow_chain():
    m = np.array([[0.9, 0.05, 0.05], [0.05, 0.9, 0.05], [0.05, 0.05, 0.9]])
    m = 0.5 * np.eye(3) + 0.5 * m  # lambda_2 = 0.925
    traj = evolve(PopulationVector.of([1.0, 0.0, 0.0]), stochastic(m), 300)
    assert trajectory_rate(traj) == pytest.approx(second_modulus(m), rel=0.05)
