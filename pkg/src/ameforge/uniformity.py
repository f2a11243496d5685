"""k-uniformity checks, the entanglement potential and the qubit phase residual."""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedError
from .state import DEFAULT_TOL, PureState, amplitude_matrix, partial_trace, purity


@dataclass(frozen=True)
class UniformityReport:
    k: int
    is_uniform: bool
    worst_partition: tuple[int, ...]
    max_deviation: float

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "is_uniform": self.is_uniform,
            "worst_partition": list(self.worst_partition),
            "max_deviation": self.max_deviation,
        }


def reduction_deviation(state: PureState, keep: tuple[int, ...]) -> float:
    """max |rho_A - I/d^|A|| entry."""
    rho = partial_trace(state, keep)
    target = np.eye(rho.shape[0]) / rho.shape[0]
    return float(np.abs(rho - target).max())


def is_k_uniform(
    state: PureState, k: int, tol: float = DEFAULT_TOL, jobs: int = 1
) -> UniformityReport:
    """Check every k-party reduction against the maximally mixed state."""
    n = state.num_parties
    if not 1 <= k <= n // 2:
        raise DomainError(f"k = {k} outside 1..{n // 2} for {n} parties")
    subsets = list(itertools.combinations(range(n), k))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            devs = list(pool.map(lambda s: reduction_deviation(state, s), subsets))
    else:
        devs = [reduction_deviation(state, s) for s in subsets]
    # subsets are generated in lexicographic order, so the first maximum wins ties
    worst = int(np.argmax(devs))
    dev = devs[worst]
    return UniformityReport(k, dev <= tol, subsets[worst], dev)


def is_ame(state: PureState, tol: float = DEFAULT_TOL, jobs: int = 1) -> UniformityReport:
    """Uniformity at k = floor(N/2).  A single party is AME only in the trivial sense."""
    k = state.num_parties // 2
    if k == 0:
        raise DomainError("a single party has no nontrivial bipartition")
    return is_k_uniform(state, k, tol=tol, jobs=jobs)


def balanced_partitions(num_parties: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(num_parties), num_parties // 2))


def purity_profile(state: PureState) -> dict[tuple[int, ...], float]:
    """Purity of every balanced reduction, keyed by the kept parties."""
    return {a: purity(partial_trace(state, a)) for a in balanced_partitions(state.num_parties)}


def entanglement_potential(state: PureState) -> float:
    """Mean purity over the C(N, floor(N/2)) balanced bipartitions."""
    if state.num_parties < 2:
        raise DomainError("the potential needs at least two parties")
    return float(np.mean(list(purity_profile(state).values())))


class PotentialEvaluator:
    """Fast potential for dense amplitude vectors of a fixed register.

    Precomputes, for each balanced bipartition, the index permutation that
    brings the kept parties to the front, so a batch of purities is one gather
    and one batched matrix product.
    """

    def __init__(self, num_parties: int, local_dim: int):
        if num_parties < 2:
            raise DomainError("the potential needs at least two parties")
        n, d = num_parties, local_dim
        self.num_parties, self.local_dim = n, d
        self.partitions = balanced_partitions(n)
        grid = np.arange(d**n).reshape((d,) * n)
        self.perms = np.stack(
            [
                grid.transpose(list(a) + [b for b in range(n) if b not in a]).ravel()
                for a in self.partitions
            ]
        )
        self.row_dim = d ** (n // 2)

    def __call__(self, psi: np.ndarray) -> float:
        m = psi[self.perms].reshape(len(self.partitions), self.row_dim, -1)
        rho = m @ m.conj().transpose(0, 2, 1)
        return float(np.sum(np.abs(rho) ** 2) / len(self.partitions))


def facchi_phase_residual(state: PureState, bipartition) -> float:
    """Largest off-diagonal of the reduced state on ``bipartition`` (qubits).

    Evaluates max over l != l' of |sum_m z_{l m} conj(z_{l' m})|, with l
    running over the bipartition block and m over its complement.
    """
    if state.local_dim != 2:
        raise UnsupportedError("the phase condition is stated for qubits only")
    n = state.num_parties
    block = tuple(sorted(int(a) for a in bipartition))
    if len(block) != n // 2 or len(set(block)) != len(block) or not set(block) <= set(range(n)):
        raise DomainError(f"bipartition must be {n // 2} distinct parties of 0..{n - 1}")
    z = amplitude_matrix(state, block)
    z = z.toarray() if hasattr(z, "toarray") else z
    # explicit sum over the complement index m
    gram = np.einsum("lm,km->lk", z, z.conj())
    np.fill_diagonal(gram, 0)
    return float(np.abs(gram).max()) if gram.size > 1 else 0.0


def potential_floor(num_parties: int, local_dim: int) -> float:
    return local_dim ** -(num_parties // 2)


def is_ame_by_phases(state: PureState, tol: float = DEFAULT_TOL) -> bool:
    """AME verdict from vanishing off-diagonals plus flat diagonals, qubits only."""
    n = state.num_parties
    for a in balanced_partitions(n):
        if facchi_phase_residual(state, a) > tol:
            return False
        diag = np.diag(partial_trace(state, a)).real
        if np.abs(diag - 1.0 / 2 ** len(a)).max() > tol:
            return False
    return True

