"""Sparse pure states of N qudits and their reduced density matrices.

Basis words are tuples ``(s_0, ..., s_{N-1})`` with party 0 the leftmost
letter; the linear index of a word is its big-endian base-``d`` value.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, NumericalValidityError, UnsupportedError

DEFAULT_TOL = 1e-10

# Above this many matrix entries the reshaped amplitude matrix is built sparse.
_DENSE_LIMIT = 1 << 20

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


@dataclass(frozen=True)
class RootAmplitude:
    """Exact amplitude ``sqrt(scale_sq) * exp(2*pi*i*exponent/order)``."""

    exponent: int
    order: int = 1
    scale_sq: Fraction = Fraction(1)

    def __post_init__(self):
        if self.order < 1:
            raise DomainError(f"root order must be positive, got {self.order}")
        if Fraction(self.scale_sq) <= 0:
            raise DomainError("scale must be positive")
        object.__setattr__(self, "scale_sq", Fraction(self.scale_sq))

    @property
    def modulus(self) -> float:
        return math.sqrt(self.scale_sq)

    def phase(self) -> complex:
        e = self.exponent % self.order
        # quarter turns are exact in floating point
        if (4 * e) % self.order == 0:
            return (1, 1j, -1, -1j)[(4 * e) // self.order]
        return cmath.exp(2j * math.pi * e / self.order)

    def to_complex(self) -> complex:
        return self.modulus * self.phase()

    def scaled(self, factor_sq: Fraction) -> "RootAmplitude":
        return RootAmplitude(self.exponent, self.order, self.scale_sq * factor_sq)

    def times_root(self, exponent: int, order: int) -> "RootAmplitude":
        """Multiply by ``exp(2*pi*i*exponent/order)``."""
        q = math.lcm(self.order, order)
        e = self.exponent * (q // self.order) + exponent * (q // order)
        return RootAmplitude(e % q, q, self.scale_sq)


def word_to_index(word: Sequence[int], d: int) -> int:
    index = 0
    for s in word:
        index = index * d + int(s)
    return index


def index_to_word(index: int, n: int, d: int) -> tuple[int, ...]:
    digits = []
    for _ in range(n):
        index, r = divmod(int(index), d)
        digits.append(r)
    return tuple(reversed(digits))


def _digits(indices: np.ndarray, n: int, d: int) -> np.ndarray:
    powers = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (indices[:, None] // powers[None, :]) % d


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized pure state stored as sorted (index, amplitude) pairs.

    Only explicitly present terms are stored, so states with small support on
    large registers stay cheap.  Use :meth:`from_terms`, :meth:`from_vector` or
    :meth:`from_exact` rather than the raw constructor.
    """

    num_parties: int
    local_dim: int
    indices: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        n, d = self.num_parties, self.local_dim
        if n < 1:
            raise DomainError(f"need at least one party, got {n}")
        if d < 2:
            raise DomainError(f"local dimension must be >= 2, got {d}")
        idx = np.asarray(self.indices, dtype=np.int64).ravel()
        amp = np.asarray(self.amplitudes, dtype=np.complex128).ravel()
        if idx.shape != amp.shape:
            raise DomainError("indices and amplitudes differ in length")
        if idx.size and (idx.min() < 0 or idx.max() >= d**n):
            raise DomainError("basis index out of range")
        order = np.argsort(idx, kind="stable")
        idx, amp = idx[order], amp[order]
        if idx.size > 1 and np.any(idx[1:] == idx[:-1]):
            raise DomainError("duplicate basis word")
        norm_sq = float(np.vdot(amp, amp).real)
        if abs(norm_sq - 1.0) > DEFAULT_TOL:
            raise NumericalValidityError(
                f"state is not normalized: |psi|^2 = {norm_sq!r}"
            )
        idx.setflags(write=False)
        amp.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def from_terms(
        cls,
        num_parties: int,
        local_dim: int,
        terms: Mapping[Sequence[int], complex] | Iterable[tuple[Sequence[int], complex]],
        normalize: bool = False,
    ) -> "PureState":
        items = terms.items() if isinstance(terms, Mapping) else terms
        idx, amp = [], []
        for word, a in items:
            word = tuple(int(s) for s in word)
            if len(word) != num_parties:
                raise DomainError(f"word {word} does not have length {num_parties}")
            if any(s < 0 or s >= local_dim for s in word):
                raise DomainError(f"word {word} has letters outside 0..{local_dim - 1}")
            idx.append(word_to_index(word, local_dim))
            amp.append(complex(a))
        amp = np.array(amp, dtype=np.complex128)
        if normalize:
            amp = amp / np.linalg.norm(amp)
        return cls(num_parties, local_dim, np.array(idx, dtype=np.int64), amp)

    @classmethod
    def from_exact(
        cls,
        num_parties: int,
        local_dim: int,
        terms: Mapping[Sequence[int], RootAmplitude],
    ) -> "PureState":
        return cls.from_terms(
            num_parties, local_dim, {w: a.to_complex() for w, a in terms.items()}
        )

    @classmethod
    def from_vector(
        cls, vector: np.ndarray, num_parties: int, local_dim: int, normalize: bool = False
    ) -> "PureState":
        vec = np.asarray(vector, dtype=np.complex128).ravel()
        if vec.size != local_dim**num_parties:
            raise DomainError(
                f"vector of length {vec.size} does not match {local_dim}^{num_parties}"
            )
        if normalize:
            vec = vec / np.linalg.norm(vec)
        nz = np.flatnonzero(vec)
        return cls(num_parties, local_dim, nz, vec[nz])

    @property
    def dim(self) -> int:
        return self.local_dim**self.num_parties

    @cached_property
    def kets(self) -> np.ndarray:
        """Digits of the stored basis words, one row per term."""
        return _digits(self.indices, self.num_parties, self.local_dim)

    def terms(self) -> Iterator[tuple[tuple[int, ...], complex]]:
        for row, a in zip(self.kets, self.amplitudes):
            yield tuple(int(s) for s in row), complex(a)

    def to_vector(self) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.complex128)
        vec[self.indices] = self.amplitudes
        return vec

    def amplitude(self, word: Sequence[int]) -> complex:
        i = word_to_index(word, self.local_dim)
        pos = np.searchsorted(self.indices, i)
        if pos < self.indices.size and self.indices[pos] == i:
            return complex(self.amplitudes[pos])
        return 0j

    def words(self, tol: float = DEFAULT_TOL) -> list[tuple[int, ...]]:
        """Basis words with amplitude modulus above ``tol``, in index order."""
        keep = np.abs(self.amplitudes) > tol
        return [tuple(int(s) for s in row) for row in self.kets[keep]]

    def overlap(self, other: "PureState") -> complex:
        """Inner product <self|other>."""
        if (self.num_parties, self.local_dim) != (other.num_parties, other.local_dim):
            raise DomainError("states live on different registers")
        common, ia, ib = np.intersect1d(
            self.indices, other.indices, assume_unique=True, return_indices=True
        )
        return complex(np.vdot(self.amplitudes[ia], other.amplitudes[ib]))

    def fidelity(self, other: "PureState") -> float:
        return abs(self.overlap(other)) ** 2

    def permute_parties(self, order: Sequence[int]) -> "PureState":
        """State whose party ``p`` is party ``order[p]`` of this state."""
        order = list(order)
        if sorted(order) != list(range(self.num_parties)):
            raise DomainError(f"{order} is not a permutation of the parties")
        new = self.kets[:, order]
        powers = self.local_dim ** np.arange(self.num_parties - 1, -1, -1, dtype=np.int64)
        return PureState(self.num_parties, self.local_dim, new @ powers, self.amplitudes)

    def relabel(self, site: int, mapping: Sequence[int]) -> "PureState":
        """Apply the basis permutation ``|s> -> |mapping[s]>`` on one site."""
        mapping = np.asarray(mapping, dtype=np.int64)
        if sorted(mapping.tolist()) != list(range(self.local_dim)):
            raise DomainError("relabelling must be a permutation of the alphabet")
        kets = self.kets.copy()
        kets[:, site] = mapping[kets[:, site]]
        powers = self.local_dim ** np.arange(self.num_parties - 1, -1, -1, dtype=np.int64)
        return PureState(self.num_parties, self.local_dim, kets @ powers, self.amplitudes)


def _check_keep(keep: Iterable[int], n: int) -> tuple[int, ...]:
    keep = tuple(sorted(int(a) for a in keep))
    if not keep:
        raise DomainError("the kept set of parties is empty")
    if len(set(keep)) != len(keep) or keep[0] < 0 or keep[-1] >= n:
        raise DomainError(f"kept parties {keep} are not a subset of 0..{n - 1}")
    return keep


def amplitude_matrix(state: PureState, rows: Sequence[int]):
    """Amplitudes reshaped with parties ``rows`` as row index (dense or sparse)."""
    n, d = state.num_parties, state.local_dim
    rows = list(rows)
    cols = [a for a in range(n) if a not in rows]
    kets = state.kets
    r = kets[:, rows] @ (d ** np.arange(len(rows) - 1, -1, -1, dtype=np.int64))
    c = kets[:, cols] @ (d ** np.arange(len(cols) - 1, -1, -1, dtype=np.int64))
    shape = (d ** len(rows), d ** len(cols))
    if shape[0] * shape[1] <= _DENSE_LIMIT:
        m = np.zeros(shape, dtype=np.complex128)
        m[r, c] = state.amplitudes
        return m
    return sp.csr_matrix((state.amplitudes, (r, c)), shape=shape)


def partial_trace(state: PureState, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix on the parties in ``keep`` (ascending order)."""
    keep = _check_keep(keep, state.num_parties)
    m = amplitude_matrix(state, keep)
    rho = m @ m.conj().T
    if sp.issparse(rho):
        rho = rho.toarray()
    return np.asarray(rho)


def check_density_matrix(rho: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DomainError(f"density matrix must be square, got shape {rho.shape}")
    herm = float(np.abs(rho - rho.conj().T).max()) if rho.size else 0.0
    if herm > tol:
        raise NumericalValidityError(f"matrix is not Hermitian (deviation {herm:.3e})")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > tol:
        raise NumericalValidityError(f"trace is {tr!r}, expected 1")
    return rho


def purity(rho: np.ndarray) -> float:
    """Tr(rho^2)."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DomainError(f"density matrix must be square, got shape {rho.shape}")
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(rho) ** 2))


def von_neumann_entropy(rho: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """-Tr(rho log rho) with natural logarithm."""
    rho = check_density_matrix(rho, tol=max(tol, 1e-8))
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -math.sqrt(tol):
        raise NumericalValidityError(
            f"negative eigenvalue {evals.min():.3e} below -sqrt(tol)"
        )
    evals = evals[evals > tol]
    return float(-np.sum(evals * np.log(evals)))


def unitary_deviation(u: np.ndarray) -> float:
    """max |U^dagger U - I| entry."""
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DomainError(f"matrix must be square, got shape {u.shape}")
    return float(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max())


def apply_local_unitary(
    state: PureState, site: int, u: np.ndarray, tol: float = DEFAULT_TOL
) -> PureState:
    """Act with the d x d unitary ``u`` on party ``site``."""
    n, d = state.num_parties, state.local_dim
    if not 0 <= site < n:
        raise DomainError(f"site {site} outside 0..{n - 1}")
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (d, d):
        raise DomainError(f"local operator must be {d}x{d}, got {u.shape}")
    dev = unitary_deviation(u)
    if dev > tol:
        raise DomainError(f"operator is not unitary (max deviation {dev:.3e})")
    stride = d ** (n - 1 - site)
    letters = state.kets[:, site]
    base = state.indices - letters * stride
    # each term |..s..> spreads to sum_t u[t, s] |..t..>
    new_idx = (base[None, :] + np.arange(d)[:, None] * stride).ravel()
    new_amp = (u[:, letters] * state.amplitudes[None, :]).ravel()
    uniq, inv = np.unique(new_idx, return_inverse=True)
    acc = np.zeros(uniq.size, dtype=np.complex128)
    np.add.at(acc, inv, new_amp)
    nz = acc != 0
    return PureState(n, d, uniq[nz], acc[nz])


def apply_local_unitaries(
    state: PureState, unitaries: Mapping[int, np.ndarray], tol: float = DEFAULT_TOL
) -> PureState:
    for site in sorted(unitaries):
        state = apply_local_unitary(state, site, unitaries[site], tol=tol)
    return state


def support(state: PureState, tol: float = DEFAULT_TOL) -> int:
    """Number of computational-basis amplitudes with modulus above ``tol``."""
    return int(np.count_nonzero(np.abs(state.amplitudes) > tol))


def minimize_support_by_hadamards(
    state: PureState, tol: float = DEFAULT_TOL
) -> tuple[PureState, tuple[int, ...]]:
    """Exhaustive search over Hadamard gates on every subset of qubits.

    Returns the representative of smallest support together with the site
    subset that produces it; ties go to the lexicographically smallest subset.
    """
    if state.local_dim != 2:
        raise UnsupportedError(
            f"Hadamard search needs qubits, got local dimension {state.local_dim}"
        )
    n = state.num_parties
    best = None
    for r in range(n + 1):
        for subset in itertools.combinations(range(n), r):
            candidate = state
            for site in subset:
                candidate = apply_local_unitary(candidate, site, HADAMARD, tol=tol)
            key = (support(candidate, tol), subset)
            if best is None or key < best[0]:
                best = (key, candidate)
    (_, subset), rep = best
    return rep, subset


def product_state(word: Sequence[int], local_dim: int) -> PureState:
    return PureState.from_terms(len(word), local_dim, {tuple(word): 1.0})


def ghz_state(num_parties: int, local_dim: int = 2) -> PureState:
    amp = 1.0 / math.sqrt(local_dim)
    return PureState.from_terms(
        num_parties, local_dim, {(s,) * num_parties: amp for s in range(local_dim)}
    )


def bell_state(local_dim: int = 2) -> PureState:
    return ghz_state(2, local_dim)
