"""Explicit states and matrices, the displacement family and related checks."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .codes import Code
from .errors import DomainError, NumericalValidityError, UnsupportedError
from .galois import field_of_order, is_prime
from .multiunitary import (
    IndexedMatrix,
    is_complex_hadamard,
    is_k_unitary,
    state_from_matrix,
)
from .state import DEFAULT_TOL, PureState, RootAmplitude, support, unitary_deviation
from .uniformity import is_k_uniform

OMEGA3 = np.exp(2j * np.pi / 3)

# Sign patterns of the five- and six-qubit AME states, in ascending ket order.
UPS52_SIGNS = (
    1, 1, 1, 1, 1, -1, -1, 1, 1, -1, -1, 1, 1, 1, 1, 1,
    1, 1, -1, -1, 1, -1, 1, -1, -1, 1, -1, 1, -1, -1, 1, 1,
)
XI62_SIGNS = (
    -1, -1, -1, 1, -1, 1, 1, 1, -1, -1, -1, 1, 1, -1, -1, -1,
    -1, -1, 1, -1, -1, 1, -1, -1, 1, 1, -1, 1, -1, 1, -1, -1,
    -1, 1, -1, -1, -1, -1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1,
    1, -1, -1, -1, 1, 1, 1, -1, 1, -1, -1, -1, -1, -1, -1, 1,
)

AME64_WORDS = (
    "000000 001111 002222 003333 010123 011032 012301 013210 "
    "020231 021320 022013 023102 030312 031203 032130 033021 "
    "100132 101023 102310 103201 110011 111100 112233 113322 "
    "120303 121212 122121 123030 130220 131331 132002 133113 "
    "200213 201302 202031 203120 210330 211221 212112 213003 "
    "220022 221133 222200 223311 230101 231010 232323 233232 "
    "300321 301230 302103 303012 310202 311313 312020 313131 "
    "320110 321001 322332 323223 330033 331122 332211 333300"
).split()

AME54_WORDS = (
    "00000 10312 20231 30123 01111 11203 21320 31032 "
    "02222 12130 22013 32301 03333 13021 23102 33210"
).split()

PHI5_WORDS = (
    "000000 104321 203142 302413 401234 011111 110432 214203 313024 412340 "
    "022222 121043 220314 324130 423401 033333 132104 231420 330241 434012 "
    "044444 143210 242031 341302 440123"
).split()

# Four MOLS of order five as printed: entry (row, col) lists the four symbols.
MOLS5_TABLE = (
    ("0000", "4321", "3142", "2413", "1234"),
    ("1111", "0432", "4203", "3024", "2340"),
    ("2222", "1043", "0314", "4130", "3401"),
    ("3333", "2104", "1420", "0241", "4012"),
    ("4444", "3210", "2031", "1302", "0123"),
)

LOGICAL_ZERO = {"00000": 1, "00011": 1, "01100": 1, "01111": -1}
LOGICAL_ONE = {"11010": 1, "11001": 1, "10110": 1, "10101": -1}

O8_SIGNS = (
    (-1, -1, -1, 1, -1, 1, 1, 1),
    (-1, -1, -1, 1, 1, -1, -1, -1),
    (-1, -1, 1, -1, -1, 1, -1, -1),
    (1, 1, -1, 1, -1, 1, -1, -1),
    (-1, 1, -1, -1, -1, -1, 1, -1),
    (1, -1, 1, 1, -1, -1, 1, -1),
    (1, -1, -1, -1, 1, 1, 1, -1),
    (1, -1, -1, -1, -1, -1, -1, 1),
)

OA16_PERM = (4, 3, 13, 10, 14, 9, 7, 0, 11, 12, 2, 5, 1, 6, 8, 15)

# Exponents of omega = exp(2 pi i / 3) in the 2-unitary complex Hadamard matrix of order 9.
UP_EXPONENTS = (
    (0, 0, 0, 0, 1, 2, 0, 2, 1),
    (0, 0, 0, 2, 0, 1, 1, 0, 2),
    (0, 0, 0, 1, 2, 0, 2, 1, 0),
    (0, 1, 2, 0, 2, 1, 0, 0, 0),
    (1, 2, 0, 0, 2, 1, 2, 2, 2),
    (2, 0, 1, 0, 2, 1, 1, 1, 1),
    (0, 2, 1, 0, 0, 0, 0, 1, 2),
    (2, 1, 0, 1, 1, 1, 0, 1, 2),
    (1, 0, 2, 2, 2, 2, 0, 1, 2),
)
UP_PHASE_EXPONENTS = (0, 0, 0, 0, 1, 2, 0, 2, 1)
UP_COLUMN_ORDER = (0, 3, 6, 1, 4, 7, 2, 5, 8)

# Printed order-9 block matrix of displacement operators, entries in units of 1/sqrt(3):
# None marks a zero, an integer e marks omega^e.
UPRIME_EXPONENTS = (
    (0, None, None, 0, None, None, 0, None, None),
    (None, 0, None, None, 1, None, None, 2, None),
    (None, None, 0, None, None, 2, None, None, 1),
    (None, None, 0, None, None, 1, None, None, 2),
    (0, None, None, 2, None, None, 1, None, None),
    (None, 0, None, None, 0, None, None, 0, None),
    (None, 0, None, None, 2, None, None, 1, None),
    (None, None, 0, None, None, 0, None, None, 0),
    (0, None, None, 1, None, None, 2, None, None),
)


def _words(strings) -> list[tuple[int, ...]]:
    return [tuple(int(ch) for ch in s) for s in strings]


def uniform_state(words, d: int) -> PureState:
    words = list(words)
    exact = RootAmplitude(0, 1, Fraction(1, len(words)))
    return PureState.from_exact(len(words[0]), d, {w: exact for w in words})


def sign_state(signs, num_parties: int) -> PureState:
    """Qubit state with amplitude s_i / sqrt(2^N) on ket i."""
    scale = Fraction(1, 2**num_parties)
    terms = {}
    for i, s in enumerate(signs):
        word = tuple((i >> (num_parties - 1 - b)) & 1 for b in range(num_parties))
        terms[word] = RootAmplitude(0 if s > 0 else 1, 2, scale)
    return PureState.from_exact(num_parties, 2, terms)


def omega_43() -> PureState:
    """|i, j, i+j, i+2j> / 3 over Z_3."""
    return uniform_state(
        [(i, j, (i + j) % 3, (i + 2 * j) % 3) for i in range(3) for j in range(3)], 3
    )


def mols_words(d: int) -> list[tuple[int, ...]]:
    """Words (i, j, L_1[i,j], ..., L_{d-1}[i,j]) of the field MOLS family."""
    f = field_of_order(d)
    return [
        (i, j) + tuple(f.add(i, f.mul(m, j)) for m in range(1, d))
        for i in range(d)
        for j in range(d)
    ]


def phi_state(d: int) -> PureState:
    """d+1 party, d^2 term state built from the d-1 field MOLS of order d."""
    return uniform_state(mols_words(d), d)


def laflamme_state() -> PureState:
    """(|0_L> + |1_L>)/sqrt 2 for the five-qubit code."""
    terms = {}
    for table in (LOGICAL_ZERO, LOGICAL_ONE):
        for ket, s in table.items():
            terms[tuple(int(c) for c in ket)] = RootAmplitude(0 if s > 0 else 1, 2, Fraction(1, 8))
    return PureState.from_exact(5, 2, terms)


def _exact_state(n: int, terms: dict[str, RootAmplitude]) -> PureState:
    return PureState.from_exact(n, 2, {tuple(int(c) for c in k): a for k, a in terms.items()})


def hs_state() -> PureState:
    sixth = Fraction(1, 6)
    return _exact_state(4, {
        "0011": RootAmplitude(0, 3, sixth), "1100": RootAmplitude(0, 3, sixth),
        "0101": RootAmplitude(1, 3, sixth), "1010": RootAmplitude(1, 3, sixth),
        "0110": RootAmplitude(2, 3, sixth), "1001": RootAmplitude(2, 3, sixth),
    })


def hd_state() -> PureState:
    sixth = Fraction(1, 6)
    terms = {k: RootAmplitude(0, 1, sixth) for k in ("0001", "0010", "0100", "1000")}
    terms["1111"] = RootAmplitude(0, 1, Fraction(1, 3))
    return _exact_state(4, terms)


def l_state() -> PureState:
    # 1 + omega = exp(i pi/3) and 1 - omega = sqrt 3 exp(-i pi/6)
    twelfth = Fraction(1, 12)
    plus = RootAmplitude(1, 6, twelfth)
    minus = RootAmplitude(-1 % 12, 12, Fraction(1, 4))
    sq = RootAmplitude(2, 3, twelfth)
    return _exact_state(4, {
        "0000": plus, "1111": plus, "0011": minus, "1100": minus,
        "0101": sq, "0110": sq, "1001": sq, "1010": sq,
    })


def m_state() -> PureState:
    # i/2 + 1/sqrt12 = exp(i pi/3)/sqrt3 and i/2 - 1/sqrt12 = exp(2 i pi/3)/sqrt3
    sixth = Fraction(1, 6)
    a = RootAmplitude(1, 6, sixth)
    b = RootAmplitude(1, 3, sixth)
    c = RootAmplitude(0, 1, sixth)
    return _exact_state(4, {
        "0000": a, "1111": a, "0011": b, "1100": b, "0101": c, "1010": c,
    })


def o8_matrix() -> IndexedMatrix:
    return IndexedMatrix(2, 3, np.array(O8_SIGNS, dtype=float) / math.sqrt(8))


def hadamard_cube() -> IndexedMatrix:
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)
    return IndexedMatrix(2, 3, np.kron(np.kron(h, h), h))


def fourier_matrix(d: int) -> np.ndarray:
    j = np.arange(d)
    return np.exp(2j * np.pi * np.outer(j, j) / d) / math.sqrt(d)


def fourier_pair() -> IndexedMatrix:
    """F_3 tensor its adjoint, unitary but not 2-unitary."""
    f = fourier_matrix(3)
    return IndexedMatrix(3, 2, np.kron(f, f.conj().T))


def oa16_matrix() -> IndexedMatrix:
    return IndexedMatrix.from_perm(OA16_PERM, 4, 2)


def u_p_matrix() -> IndexedMatrix:
    return IndexedMatrix(3, 2, OMEGA3 ** np.array(UP_EXPONENTS) / 3)


def uprime_printed() -> IndexedMatrix:
    e = np.zeros((9, 9), dtype=complex)
    for r, row in enumerate(UPRIME_EXPONENTS):
        for c, x in enumerate(row):
            if x is not None:
                e[r, c] = OMEGA3**x
    return IndexedMatrix(3, 2, e / math.sqrt(3))


def shift_matrix(d: int) -> np.ndarray:
    """X|s> = |s+1 mod d>."""
    return np.roll(np.eye(d), 1, axis=0)


def clock_matrix(d: int) -> np.ndarray:
    """Z|s> = omega^s |s>."""
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def _check_odd_prime(d: int):
    if not is_prime(d) or d == 2:
        raise UnsupportedError(f"displacement construction needs an odd prime, got {d}")


def displacement_operator(d: int, p1: int, p2: int) -> np.ndarray:
    """tau^(p1 p2) X^p1 Z^p2 with tau = -exp(i pi/d)."""
    _check_odd_prime(d)
    tau = -np.exp(1j * np.pi / d)
    x = np.linalg.matrix_power(shift_matrix(d), p1 % d)
    z = np.linalg.matrix_power(clock_matrix(d), p2 % d)
    return tau ** (p1 * p2) * (x @ z)


def displacement_block_matrix(d: int) -> IndexedMatrix:
    """Order-d^2 matrix whose (j, k) block is D_{j,k}/sqrt(d)."""
    _check_odd_prime(d)
    blocks = [[displacement_operator(d, j, k) for k in range(d)] for j in range(d)]
    return IndexedMatrix(d, 2, np.block(blocks) / math.sqrt(d))


def tensor_displacement_basis(n: int, d: int) -> list[np.ndarray]:
    """All N-fold tensor products of displacement operators, ordered lexicographically."""
    _check_odd_prime(d)
    if d ** (2 * n) > 10**4:
        raise DomainError(f"d^(2N) = {d ** (2 * n)} exceeds 10^4 operators")
    singles = [displacement_operator(d, p1, p2) for p1 in range(d) for p2 in range(d)]
    ops = [np.eye(1)]
    for _ in range(n):
        ops = [np.kron(a, b) for a in ops for b in singles]
    return ops


def hilbert_schmidt_gram(ops: list[np.ndarray]) -> np.ndarray:
    """Matrix of Tr(A^dagger B) over an operator list."""
    flat = np.stack([op.ravel() for op in ops])
    return flat.conj() @ flat.T


def up_power_classification(tol: float = DEFAULT_TOL) -> dict[int, dict]:
    """Hadamard property and distance to the identity for U_P^m, m = 1..8."""
    u = u_p_matrix().entries
    out = {}
    p = np.eye(9, dtype=complex)
    for m in range(1, 9):
        p = p @ u
        out[m] = {
            "hadamard": is_complex_hadamard(p, tol),
            "identity_deviation": float(np.abs(p - np.eye(9)).max()),
        }
    return out


def up_factorization() -> tuple[np.ndarray, float]:
    """D (F_3 x F_3^dagger) P D and its max deviation from U_P."""
    dmat = np.diag(OMEGA3 ** np.array(UP_PHASE_EXPONENTS))
    f = fourier_matrix(3)
    perm = np.eye(9)[:, list(UP_COLUMN_ORDER)]
    prod = dmat @ np.kron(f, f.conj().T) @ perm @ dmat
    return prod, float(np.abs(prod - u_p_matrix().entries).max())


def magic_square(state: PureState, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Grid with 3 a + b at address (i, j) for each word |i, j, a, b>."""
    if state.num_parties != 4 or state.local_dim != 3:
        raise DomainError("the magic square needs a four-qutrit state")
    words = state.words(tol)
    if len(words) != 9 or len({w[:2] for w in words}) != 9:
        raise DomainError("the first two letters must address each of the nine cells once")
    grid = np.zeros((3, 3), dtype=np.int64)
    for i, j, a, b in words:
        grid[i, j] = 3 * a + b
    return grid


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    obj: PureState | IndexedMatrix
    description: str
    uniformity: int | None = None
    unitarity: int | None = None
    support: int | None = None
    hadamard: bool | None = None

    @property
    def kind(self) -> str:
        return "state" if isinstance(self.obj, PureState) else "matrix"


def verify_entry(entry: CatalogEntry, tol: float = DEFAULT_TOL) -> None:
    """Raise if a stored expectation does not hold."""
    obj = entry.obj
    problems = []
    if isinstance(obj, PureState):
        if entry.uniformity is not None:
            k = entry.uniformity
            rep = is_k_uniform(obj, k, tol)
            if not rep.is_uniform:
                problems.append(f"not {k}-uniform (deviation {rep.max_deviation:.3e})")
            if k < obj.num_parties // 2 and is_k_uniform(obj, k + 1, tol).is_uniform:
                problems.append(f"unexpectedly {k + 1}-uniform")
        if entry.support is not None and support(obj, tol) != entry.support:
            problems.append(f"support {support(obj, tol)} != {entry.support}")
    else:
        if entry.unitarity is not None:
            rep = is_k_unitary(obj, tol)
            unitary = unitary_deviation(obj.entries) <= tol
            level = obj.half_order if rep.is_k_unitary else (1 if unitary else 0)
            if level != entry.unitarity:
                problems.append(f"multi-unitarity level {level} != {entry.unitarity}")
        if entry.hadamard is not None and is_complex_hadamard(obj, tol) != entry.hadamard:
            problems.append(f"Hadamard flag differs from {entry.hadamard}")
    if problems:
        raise NumericalValidityError(f"catalog entry {entry.name}: " + "; ".join(problems))


_BUILDERS: dict[str, Callable[[], CatalogEntry]] = {
    "omega43": lambda: CatalogEntry(
        "omega43", omega_43(), "four qutrits |i,j,i+j,i+2j>", uniformity=2, support=9
    ),
    "ups52": lambda: CatalogEntry(
        "ups52", sign_state(UPS52_SIGNS, 5), "five-qubit AME state with +-1 amplitudes",
        uniformity=2, support=32,
    ),
    "xi62": lambda: CatalogEntry(
        "xi62", sign_state(XI62_SIGNS, 6), "six-qubit AME state with +-1 amplitudes",
        uniformity=3, support=64,
    ),
    "ame64": lambda: CatalogEntry(
        "ame64", uniform_state(_words(AME64_WORDS), 4), "six ququarts of minimal support",
        uniformity=3, support=64,
    ),
    "ame54": lambda: CatalogEntry(
        "ame54", uniform_state(_words(AME54_WORDS), 4), "five ququarts from three MOLS of order 4",
        uniformity=2, support=16,
    ),
    "omega52_logical": lambda: CatalogEntry(
        "omega52_logical", laflamme_state(), "equal superposition of the five-qubit code words",
        uniformity=2, support=8,
    ),
    "phi5": lambda: CatalogEntry(
        "phi5", uniform_state(_words(PHI5_WORDS), 5), "six parties of five levels from four MOLS",
        uniformity=2, support=25,
    ),
    "HS": lambda: CatalogEntry("HS", hs_state(), "four qubits with purity 1/3 in every balanced cut",
                               uniformity=1, support=6),
    "HD": lambda: CatalogEntry("HD", hd_state(), "four qubits with maximal hyperdeterminant",
                               uniformity=1, support=5),
    "L": lambda: CatalogEntry("L", l_state(), "four-qubit Tsallis maximizer, alpha > 2",
                              uniformity=1, support=8),
    "M": lambda: CatalogEntry("M", m_state(), "four-qubit Tsallis maximizer, 0 < alpha < 2",
                              uniformity=1, support=6),
    "O8": lambda: CatalogEntry("O8", o8_matrix(), "symmetric real Hadamard matrix of order 8",
                               unitarity=3, hadamard=True),
    "oa16_perm": lambda: CatalogEntry(
        "oa16_perm", oa16_matrix(), "permutation of order 16 from an OA(16,4,4,2)", unitarity=2,
        hadamard=False,
    ),
    "U_P": lambda: CatalogEntry("U_P", u_p_matrix(), "2-unitary complex Hadamard matrix of order 9",
                                unitarity=2, hadamard=True),
    "uprime_p": lambda: CatalogEntry(
        "uprime_p", displacement_block_matrix(3), "blocks of displacement operators for d = 3",
        unitarity=2, hadamard=False,
    ),
}

CATALOG_NAMES = tuple(_BUILDERS)


@lru_cache(maxsize=None)
def catalog_state(name: str) -> CatalogEntry:
    """Build a catalog object and check its declared properties."""
    if name not in _BUILDERS:
        raise DomainError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG_NAMES)}")
    entry = _BUILDERS[name]()
    verify_entry(entry)
    return entry


def as_state(entry: CatalogEntry) -> PureState:
    return entry.obj if isinstance(entry.obj, PureState) else state_from_matrix(entry.obj)


def ame64_code() -> Code:
    return Code.from_words(AME64_WORDS, 4)


def omega_code() -> Code:
    return Code.from_words(["".join(map(str, w)) for w in omega_43().words()], 3)

