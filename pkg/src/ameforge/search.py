"""Simulated annealing on the entanglement potential and Haar entropy statistics."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, NumericalValidityError
from .sampling import haar_vector, sample_haar_state
from .state import PureState, partial_trace, von_neumann_entropy
from .uniformity import PotentialEvaluator, entanglement_potential, potential_floor

MAX_ANNEAL_DIM = 10**5


@dataclass(frozen=True)
class AnnealConfig:
    seed: int = 0
    temperature: float = 1.0
    cooling: float = 0.97
    sweeps: int = 400
    moves: int = 200
    restarts: int = 8
    move_scale: float = 300.0

    def __post_init__(self):
        if not 0 < self.cooling < 1:
            raise DomainError(f"cooling factor must lie in (0, 1), got {self.cooling}")
        if min(self.sweeps, self.moves, self.restarts) < 1:
            raise DomainError("sweeps, moves and restarts must all be >= 1")
        if self.temperature <= 0 or self.move_scale <= 0:
            raise DomainError("temperature and move scale must be positive")


@dataclass(frozen=True, eq=False)
class SearchResult:
    best_state: PureState
    best_value: float
    history: list[tuple[int, float]]
    seed: int
    restart_values: list[float] = field(default_factory=list)
    best_restart: int = 0


def restart_seeds(seed: int, restarts: int) -> list[int]:
    """Independent per-restart seeds spawned from the master seed."""
    children = np.random.SeedSequence(seed).spawn(restarts)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def anneal_single(num_parties: int, local_dim: int, config: AnnealConfig, seed: int) -> SearchResult:
    """One annealing run from a Haar-random start.

    Moves add complex Gaussian noise of size move_scale * T / sqrt(2 D) per
    component and renormalize; acceptance follows the Metropolis rule.
    """
    dim = local_dim**num_parties
    if dim > MAX_ANNEAL_DIM:
        raise DomainError(f"d^N = {dim} exceeds the annealing limit {MAX_ANNEAL_DIM}")
    rng = np.random.default_rng(seed)
    potential = PotentialEvaluator(num_parties, local_dim)
    psi = haar_vector(dim, rng)
    current = potential(psi)
    best, best_psi = current, psi
    temp = config.temperature
    history = []
    noise_norm = 1.0 / math.sqrt(2.0 * dim)
    for sweep in range(config.sweeps):
        step = config.move_scale * temp * noise_norm
        for _ in range(config.moves):
            trial = psi + step * (rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
            trial /= np.linalg.norm(trial)
            value = potential(trial)
            if value <= current or rng.random() < math.exp(-(value - current) / temp):
                psi, current = trial, value
                if value < best:
                    best, best_psi = value, trial
        history.append((sweep, best))
        temp *= config.cooling
    state = PureState.from_vector(best_psi, num_parties, local_dim, normalize=True)
    # the reported value is a full, independent re-evaluation
    value = entanglement_potential(state)
    floor = potential_floor(num_parties, local_dim)
    if value < floor - 1e-9:
        raise NumericalValidityError(f"potential {value} fell below the floor {floor}")
    return SearchResult(state, value, history, seed, [value], 0)


def _run(args):
    n, d, config, seed = args
    return anneal_single(n, d, config, seed)


def minimize_potential(
    num_parties: int, local_dim: int, config: AnnealConfig | None = None, jobs: int = 1
) -> SearchResult:
    """Best of ``config.restarts`` independent runs, merged by (value, restart index)."""
    config = config or AnnealConfig()
    seeds = restart_seeds(config.seed, config.restarts)
    tasks = [(num_parties, local_dim, config, s) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            runs = list(pool.map(_run, tasks))
    else:
        runs = [_run(t) for t in tasks]
    values = [r.best_value for r in runs]
    winner = min(range(len(runs)), key=lambda i: (values[i], i))
    best = runs[winner]
    return replace(best, seed=config.seed, restart_values=values, best_restart=winner)


def half_chain_entropy(state: PureState) -> float:
    return von_neumann_entropy(partial_trace(state, range(state.num_parties // 2)))


def page_prediction(num_qubits: int) -> float:
    """Leading-order mean half-chain entropy (N/2) ln 2 - 1/2."""
    return num_qubits / 2 * math.log(2) - 0.5


def exact_page_entropy(dim_a: int, dim_b: int) -> float:
    """Exact Haar mean of the entropy of the smaller factor (dim_a <= dim_b)."""
    m, n = sorted((dim_a, dim_b))
    return sum(1.0 / k for k in range(n + 1, m * n + 1)) - (m - 1) / (2 * n)


def average_page_entropy(
    num_qubits: int, samples: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Sample mean and standard error of the half-chain entropy over Haar states."""
    if num_qubits % 2:
        raise DomainError(f"need an even number of qubits, got {num_qubits}")
    if samples < 100:
        raise DomainError(f"need at least 100 samples, got {samples}")
    values = entropy_samples(num_qubits, samples, rng)
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(samples))


def entropy_samples(num_qubits: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    return np.array(
        [half_chain_entropy(sample_haar_state(num_qubits, 2, rng)) for _ in range(samples)]
    )
