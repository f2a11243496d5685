import math

import numpy as np
import pytest

from ameforge.errors import DomainError
from ameforge.sampling import haar_unitary, haar_vector, sample_haar_state
from ameforge.search import (
    AnnealConfig,
    anneal_single,
    average_page_entropy,
    entropy_samples,
    exact_page_entropy,
    minimize_potential,
    page_prediction,
    restart_seeds,
)
from ameforge.state import partial_trace, purity
from ameforge.uniformity import entanglement_potential, potential_floor

SMALL = AnnealConfig(seed=3, sweeps=20, moves=20, restarts=3)


def test_config_validation():
    with pytest.raises(DomainError):
        AnnealConfig(cooling=1.0)
    with pytest.raises(DomainError):
        AnnealConfig(restarts=0)
    with pytest.raises(DomainError):
        AnnealConfig(temperature=-1)


def test_seeds_are_distinct_and_stable():
    s = restart_seeds(7, 5)
    assert len(set(s)) == 5
    assert s == restart_seeds(7, 5)
    assert s[:3] == restart_seeds(7, 3)


def test_deterministic_given_seed():
    a = minimize_potential(3, 2, SMALL)
    b = minimize_potential(3, 2, SMALL)
    assert a.best_value == b.best_value
    assert np.array_equal(a.best_state.to_vector(), b.best_state.to_vector())


def test_restarts_are_independent_runs():
    res = minimize_potential(3, 2, SMALL)
    singles = [anneal_single(3, 2, SMALL, s).best_value for s in restart_seeds(SMALL.seed, 3)]
    assert res.restart_values == singles
    assert res.best_value == min(singles)
    assert res.best_restart == singles.index(min(singles))


def test_history_monotone_and_value_consistent():
    res = anneal_single(3, 2, SMALL, 11)
    vals = [v for _, v in res.history]
    assert len(vals) == SMALL.sweeps
    assert all(b <= a for a, b in zip(vals, vals[1:]))
    assert res.best_value == pytest.approx(entanglement_potential(res.best_state), abs=1e-15)
    assert res.best_value >= potential_floor(3, 2) - 1e-12


def test_anneal_reaches_ghz_class_for_three_qubits():
    res = minimize_potential(3, 2, AnnealConfig(seed=0, sweeps=400, moves=50, restarts=2))
    assert res.best_value < 0.5 + 1e-3


def test_anneal_rejects_huge_dimension():
    with pytest.raises(DomainError):
        anneal_single(20, 2, SMALL, 0)


def test_haar_unitary_is_unitary():
    u = haar_unitary(6, np.random.default_rng(0))
    assert np.allclose(u.conj().T @ u, np.eye(6))
    batch = haar_unitary(3, np.random.default_rng(0), size=4)
    assert batch.shape == (4, 3, 3)


def test_haar_vector_norm_and_reproducibility():
    a = haar_vector(32, np.random.default_rng(5))
    b = haar_vector(32, np.random.default_rng(5))
    assert abs(np.linalg.norm(a) - 1) < 1e-12
    assert np.array_equal(a, b)
    st_ = sample_haar_state(4, 3, np.random.default_rng(5))
    assert st_.num_parties == 4 and st_.dim == 81


def test_two_qubit_single_site_purity_mean():
    # Haar mean of Tr rho_A^2 is (dA + dB) / (dA dB + 1) = 4/5
    rng = np.random.default_rng(2)
    vals = [purity(partial_trace(sample_haar_state(2, 2, rng), [0])) for _ in range(4000)]
    assert abs(np.mean(vals) - 0.8) < 4 * np.std(vals) / math.sqrt(len(vals))


def test_entropy_samples_bounded():
    vals = entropy_samples(4, 200, np.random.default_rng(0))
    assert np.all(vals <= 2 * math.log(2) + 1e-12)
    assert np.all(vals >= -1e-12)
    two = entropy_samples(2, 200, np.random.default_rng(0))
    assert two.mean() < math.log(2)


def test_exact_page_formula_small_cases():
    # m = n = 2: 1/3 + 1/4 - 1/4 = 1/3
    assert exact_page_entropy(2, 2) == pytest.approx(1 / 3)
    assert exact_page_entropy(1, 8) == pytest.approx(0.0)
    assert exact_page_entropy(4, 2) == exact_page_entropy(2, 4)
    assert page_prediction(10) == pytest.approx(5 * math.log(2) - 0.5)


def test_page_mean_matches_exact_for_four_qubits():
    mean, err = average_page_entropy(4, 400, np.random.default_rng(9))
    assert abs(mean - exact_page_entropy(4, 4)) < 4 * err


def test_page_argument_checks():
    rng = np.random.default_rng(0)
    with pytest.raises(DomainError):
        average_page_entropy(5, 200, rng)
    with pytest.raises(DomainError):
        average_page_entropy(4, 10, rng)
