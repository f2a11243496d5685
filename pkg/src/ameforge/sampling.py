"""Haar-distributed unitaries and pure states."""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .state import PureState

MAX_SAMPLE_DIM = 10**6


def haar_unitary(dim: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-random unitary (or a stack of ``size`` of them) via phase-fixed QR."""
    shape = (dim, dim) if size is None else (size, dim, dim)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (diag / np.abs(diag))[..., None, :]


def haar_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    if dim > MAX_SAMPLE_DIM:
        raise DomainError(f"dimension {dim} exceeds the sampling limit {MAX_SAMPLE_DIM}")
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def sample_haar_state(num_parties: int, local_dim: int, rng: np.random.Generator) -> PureState:
    """Normalized complex Gaussian vector, i.e. a Haar-random pure state."""
    dim = local_dim**num_parties
    if dim > MAX_SAMPLE_DIM:
        raise DomainError(f"d^N = {dim} exceeds the sampling limit {MAX_SAMPLE_DIM}")
    return PureState.from_vector(haar_vector(dim, rng), num_parties, local_dim)
