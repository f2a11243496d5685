"""Latin squares and hypercubes, orthogonal arrays and symmetric sudokus."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, UnsupportedError
from .galois import field_of_order, prime_power
from .multiunitary import IndexedMatrix

MAX_MOLS_ORDER = 16


def is_latin_hypercube(cube: np.ndarray) -> bool:
    """Every axis-aligned line holds each of the symbols 0..d-1 exactly once."""
    cube = np.asarray(cube)
    d = cube.shape[0]
    if any(s != d for s in cube.shape):
        return False
    target = np.arange(d)
    for axis in range(cube.ndim):
        lines = np.moveaxis(cube, axis, -1).reshape(-1, d)
        if not np.array_equal(np.sort(lines, axis=1), np.broadcast_to(target, lines.shape)):
            return False
    return True


def is_latin_square(square: np.ndarray) -> bool:
    square = np.asarray(square)
    return square.ndim == 2 and is_latin_hypercube(square)


def mols(d: int) -> list[np.ndarray]:
    """The d-1 field squares L_m[i, j] = i + m*j over GF(d), m = 1..d-1."""
    if prime_power(d) is None:
        raise UnsupportedError(f"{d} is not a prime power; the construction needs GF({d})")
    if d > MAX_MOLS_ORDER:
        raise UnsupportedError(f"order {d} exceeds {MAX_MOLS_ORDER}")
    f = field_of_order(d)
    i = np.arange(d)[:, None]
    j = np.arange(d)[None, :]
    return [f.add_table[i, f.mul_table[m, j]] for m in range(1, d)]


def are_orthogonal(a: np.ndarray, b: np.ndarray) -> bool:
    """Superimposing the two squares yields each ordered symbol pair once."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise DomainError("squares have different orders")
    d = a.shape[0]
    return len(set(zip(a.ravel().tolist(), b.ravel().tolist()))) == d * d


def are_mutually_orthogonal(squares: Sequence[np.ndarray]) -> bool:
    squares = [np.asarray(s) for s in squares]
    if len({s.shape for s in squares}) > 1:
        raise DomainError("squares have different orders")
    return all(are_orthogonal(a, b) for a, b in itertools.combinations(squares, 2))


def are_mutually_orthogonal_hypercubes(cubes: Sequence[np.ndarray]) -> bool:
    """k cubes of dimension k superimpose to every k-tuple of symbols exactly once."""
    cubes = [np.asarray(c) for c in cubes]
    if not cubes or len({c.shape for c in cubes}) > 1:
        raise DomainError("need cubes of a common shape")
    d = cubes[0].shape[0]
    tuples = set(zip(*(c.ravel().tolist() for c in cubes)))
    return len(tuples) == d ** len(cubes) == cubes[0].size


def hypercubes_from_code(words: Sequence[Sequence[int]], d: int) -> list[np.ndarray]:
    """Split words of length 2k into k hypercubes addressed by the first k letters."""
    arr = np.asarray(words, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] % 2:
        raise DomainError("words must share an even length")
    k = arr.shape[1] // 2
    address = arr[:, :k]
    if len(arr) != d**k or len({tuple(a) for a in address.tolist()}) != d**k:
        raise DomainError("the leading letters do not enumerate every address exactly once")
    cubes = []
    for c in range(k):
        cube = np.full((d,) * k, -1, dtype=np.int64)
        cube[tuple(address.T)] = arr[:, k + c]
        cubes.append(cube)
    return cubes


def hypercube_planes(cubes: Sequence[np.ndarray]) -> list[tuple[int, int, list[np.ndarray]]]:
    """Every axis-aligned 2-d slice of 3-d cubes as (axis, position, squares)."""
    out = []
    for axis in range(3):
        for pos in range(cubes[0].shape[axis]):
            out.append((axis, pos, [np.take(c, pos, axis=axis) for c in cubes]))
    return out


def planes_are_mols(cubes: Sequence[np.ndarray]) -> bool:
    return all(
        all(is_latin_square(s) for s in squares) and are_mutually_orthogonal(squares)
        for _, _, squares in hypercube_planes(cubes)
    )


def _as_rows(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise DomainError("rows must be a nonempty list of equal-length words")
    return arr


def is_orthogonal_array(rows, n: int, d: int, t: int) -> bool:
    """Each t-tuple occurs equally often in every choice of t columns."""
    arr = _as_rows(rows)
    if arr.shape[1] != n or arr.min() < 0 or arr.max() >= d:
        return False
    if len(arr) % d**t:
        return False
    expected = len(arr) // d**t
    for cols in itertools.combinations(range(n), t):
        counts = Counter(map(tuple, arr[:, cols].tolist()))
        if len(counts) != d**t or any(v != expected for v in counts.values()):
            return False
    return True


def is_irredundant_oa(rows, n: int, d: int, t: int) -> bool:
    """Orthogonal array whose rows stay distinct after deleting any n - t columns."""
    if not is_orthogonal_array(rows, n, d, t):
        return False
    arr = _as_rows(rows)
    for cols in itertools.combinations(range(n), t):
        if len(set(map(tuple, arr[:, cols].tolist()))) != len(arr):
            return False
    return True


def _cell(band: int, row: int, stack: int, col: int) -> tuple[int, int]:
    return 3 * band + row, 3 * stack + col


def sudoku_families() -> dict[str, list[list[tuple[int, int]]]]:
    """The six groups of nine cells that a symmetric sudoku must fill with 1..9.

    Cells are written as (band, row in band, stack, column in stack).
    """
    r3 = range(3)
    return {
        "rows": [[(r, c) for c in range(9)] for r in range(9)],
        "columns": [[(r, c) for r in range(9)] for c in range(9)],
        "blocks": [[_cell(B, r, b, c) for r in r3 for c in r3] for B in r3 for b in r3],
        "locations": [[_cell(B, r, b, c) for B in r3 for b in r3] for r in r3 for c in r3],
        "broken_rows": [[_cell(B, r, b, c) for B in r3 for c in r3] for r in r3 for b in r3],
        "broken_columns": [[_cell(B, r, b, c) for b in r3 for r in r3] for c in r3 for B in r3],
    }


@dataclass(frozen=True)
class FamilyResult:
    name: str
    passed: bool
    first_violation: tuple[int, int] | None


def _check_grid(grid) -> np.ndarray:
    g = np.asarray(grid)
    if g.shape != (9, 9):
        raise DomainError(f"sudoku grid must be 9x9, got {g.shape}")
    if not np.issubdtype(g.dtype, np.integer):
        raise DomainError("sudoku symbols must be integers")
    if g.min() < 1 or g.max() > 9:
        raise DomainError("sudoku symbols must lie in 1..9")
    return g


def verify_symmetric_sudoku(grid) -> list[FamilyResult]:
    """Per-family verdict; a failing family reports the first repeated cell."""
    g = _check_grid(grid)
    results = []
    for name, groups in sudoku_families().items():
        violation = None
        for cells in groups:
            seen = set()
            for cell in cells:
                v = int(g[cell])
                if v in seen:
                    violation = cell
                    break
                seen.add(v)
            if violation:
                break
        results.append(FamilyResult(name, violation is None, violation))
    return results


def is_symmetric_sudoku(grid) -> bool:
    return all(r.passed for r in verify_symmetric_sudoku(grid))


def sudoku_digit_to_permutation(grid, digit: int) -> IndexedMatrix:
    """Permutation matrix with ones at the cells holding ``digit``."""
    g = _check_grid(grid)
    mask = g == digit
    if mask.sum() != 9:
        raise DomainError(f"digit {digit} occurs {int(mask.sum())} times, expected 9")
    if not (np.all(mask.sum(axis=0) == 1) and np.all(mask.sum(axis=1) == 1)):
        raise DomainError(f"the cells holding {digit} do not form a permutation")
    return IndexedMatrix(3, 2, mask.astype(float))
