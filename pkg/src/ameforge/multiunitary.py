"""Tensor-index reorderings and multi-unitarity of square matrices.

A matrix of order d^k is read as a tensor with 2k indices: the row's
big-endian digits are indices 0..k-1 and the column's are k..2k-1.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError
from .state import DEFAULT_TOL, PureState, unitary_deviation


@dataclass(frozen=True, eq=False)
class IndexedMatrix:
    local_dim: int
    half_order: int
    entries: np.ndarray

    def __post_init__(self):
        d, k = self.local_dim, self.half_order
        if d < 2 or k < 1:
            raise DomainError(f"need d >= 2 and k >= 1, got d={d}, k={k}")
        e = np.asarray(self.entries, dtype=np.complex128)
        if e.shape != (d**k, d**k):
            raise DomainError(f"expected order {d**k} for d={d}, k={k}, got shape {e.shape}")
        e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def order(self) -> int:
        return self.local_dim**self.half_order

    @classmethod
    def from_perm(cls, perm: Sequence[int], local_dim: int, half_order: int) -> "IndexedMatrix":
        """Perm(sigma): the entry in row r, column sigma(r) is 1."""
        perm = [int(p) for p in perm]
        size = len(perm)
        if sorted(perm) != list(range(size)):
            raise DomainError(f"{perm} is not a permutation")
        e = np.zeros((size, size))
        e[np.arange(size), perm] = 1.0
        return cls(local_dim, half_order, e)

    def as_perm(self, tol: float = DEFAULT_TOL) -> tuple[int, ...] | None:
        """One-line notation if this is a permutation matrix, else None."""
        e = self.entries
        ones = np.abs(e - 1.0) <= tol
        zeros = np.abs(e) <= tol
        if not np.all(ones | zeros):
            return None
        if not (np.all(ones.sum(axis=1) == 1) and np.all(ones.sum(axis=0) == 1)):
            return None
        return tuple(int(c) for c in np.argmax(ones, axis=1))

    def tensor(self) -> np.ndarray:
        return self.entries.reshape((self.local_dim,) * (2 * self.half_order))

    def scaled(self, factor: complex) -> "IndexedMatrix":
        return IndexedMatrix(self.local_dim, self.half_order, self.entries * factor)


@dataclass(frozen=True)
class MultiunitarityReport:
    k: int
    checked_reorderings: int
    failures: list[tuple[tuple[int, ...], float]] = field(default_factory=list)
    max_deviation: float = 0.0

    @property
    def is_k_unitary(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "is_k_unitary": self.is_k_unitary,
            "checked_reorderings": self.checked_reorderings,
            "max_deviation": self.max_deviation,
            "failures": [{"row_set": list(s), "deviation": v} for s, v in self.failures],
        }


def reorder_axes(m: IndexedMatrix, axes: Sequence[int]) -> IndexedMatrix:
    """Matrix whose row digits are tensor indices axes[:k] and column digits axes[k:]."""
    k = m.half_order
    axes = [int(a) for a in axes]
    if sorted(axes) != list(range(2 * k)):
        raise DomainError(f"{axes} is not an ordering of 0..{2 * k - 1}")
    t = m.tensor().transpose(axes)
    return IndexedMatrix(m.local_dim, k, t.reshape(m.order, m.order))


def inverse_axes(axes: Sequence[int]) -> list[int]:
    return [int(a) for a in np.argsort(axes)]


def reorder_layout(k: int, row_set: Sequence[int]) -> list[int]:
    row_set = sorted(int(a) for a in row_set)
    if len(row_set) != k or len(set(row_set)) != k or row_set[0] < 0 or row_set[-1] >= 2 * k:
        raise DomainError(f"row set must be {k} distinct indices of 0..{2 * k - 1}, got {row_set}")
    return row_set + [a for a in range(2 * k) if a not in row_set]


def reorder(m: IndexedMatrix, row_set: Sequence[int]) -> IndexedMatrix:
    """Rows indexed by the tensor indices in ``row_set``, columns by the rest.

    Both groups are read in ascending index order.
    """
    return reorder_axes(m, reorder_layout(m.half_order, row_set))


def undo_reorder(m: IndexedMatrix, row_set: Sequence[int]) -> IndexedMatrix:
    """Inverse of :func:`reorder` for the same ``row_set``."""
    return reorder_axes(m, inverse_axes(reorder_layout(m.half_order, row_set)))


def partial_transpose(m: IndexedMatrix) -> IndexedMatrix:
    """Swap the last row index with the last column index (blockwise transpose)."""
    k = m.half_order
    axes = list(range(k - 1)) + [2 * k - 1] + list(range(k, 2 * k - 1)) + [k - 1]
    return reorder_axes(m, axes)


def reshuffle(m: IndexedMatrix) -> IndexedMatrix:
    """Each d x d block read row by row into one row of the result (k = 2)."""
    if m.half_order != 2:
        raise DomainError("reshuffling is defined here for k = 2")
    return reorder(m, (0, 2))


def bidirectional_deviation(u: np.ndarray) -> float:
    """Larger of max |U^dagger U - I| and max |U U^dagger - I|."""
    return max(unitary_deviation(u), unitary_deviation(u.conj().T))


def is_k_unitary(m: IndexedMatrix, tol: float = DEFAULT_TOL, jobs: int = 1) -> MultiunitarityReport:
    """Unitarity of all C(2k, k) reorderings.

    A reordering and the one built on its complement are transposes of each
    other, so only row sets containing index 0 are computed; a failing pair is
    reported under both row sets.
    """
    k = m.half_order
    subsets = [s for s in itertools.combinations(range(2 * k), k) if 0 in s]

    def dev(s):
        return bidirectional_deviation(reorder(m, s).entries)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            devs = list(pool.map(dev, subsets))
    else:
        devs = [dev(s) for s in subsets]
    failures = []
    for s, v in zip(subsets, devs):
        if v > tol:
            comp = tuple(a for a in range(2 * k) if a not in s)
            failures.append((s, v))
            failures.append((comp, v))
    failures.sort()
    return MultiunitarityReport(
        k=k,
        checked_reorderings=math.comb(2 * k, k),
        failures=failures,
        max_deviation=float(max(devs)),
    )


def multiunitarity_level(m: IndexedMatrix, tol: float = DEFAULT_TOL) -> int:
    """Largest j such that the matrix, read with j row and j column indices, is j-unitary.

    Only the natural grouping of order d^k is tested, so the answer is either
    0 (not unitary), 1 (unitary but not k-unitary) or k.
    """
    if bidirectional_deviation(m.entries) > tol:
        return 0
    return m.half_order if is_k_unitary(m, tol).is_k_unitary else 1


def state_from_matrix(m: IndexedMatrix, tol: float = DEFAULT_TOL) -> PureState:
    """2k-party state whose amplitudes are the entries divided by d^(k/2)."""
    norm = float(np.linalg.norm(m.entries))
    expected = math.sqrt(m.order)
    if abs(norm - expected) > tol * expected:
        raise DomainError(f"Frobenius norm {norm!r} differs from d^(k/2) = {expected!r}")
    return PureState.from_vector(
        m.entries.ravel() / expected, 2 * m.half_order, m.local_dim
    )


def matrix_from_state(state: PureState) -> IndexedMatrix:
    """Inverse of :func:`state_from_matrix` for an even number of parties."""
    n, d = state.num_parties, state.local_dim
    if n % 2:
        raise DomainError(f"need an even number of parties, got {n}")
    k = n // 2
    return IndexedMatrix(d, k, state.to_vector().reshape(d**k, d**k) * math.sqrt(d**k))


def is_complex_hadamard(m, tol: float = DEFAULT_TOL) -> bool:
    """Unitary with every entry of modulus 1/sqrt(D)."""
    e = m.entries if isinstance(m, IndexedMatrix) else np.asarray(m)
    if e.ndim != 2 or e.shape[0] != e.shape[1]:
        raise DomainError(f"matrix must be square, got shape {e.shape}")
    if unitary_deviation(e) > tol:
        return False
    return bool(np.abs(np.abs(e) - 1.0 / math.sqrt(e.shape[0])).max() <= tol)
