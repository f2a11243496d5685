"""Classical codes over Z_d: distances, MDS checks, Reed-Solomon and greedy search."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, UnsupportedError
from .galois import is_prime
from .state import DEFAULT_TOL, PureState

MAX_GREEDY_SPACE = 10**7


def hamming_distance(x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) != len(y):
        raise DomainError(f"words of lengths {len(x)} and {len(y)} cannot be compared")
    return sum(a != b for a, b in zip(x, y))


def parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if "," in text:
        return tuple(int(t) for t in text.split(","))
    return tuple(int(ch) for ch in text)


def format_word(word: Sequence[int], d: int) -> str:
    if d > 10:
        return ",".join(str(int(s)) for s in word)
    return "".join(str(int(s)) for s in word)


@dataclass(frozen=True, eq=False)
class Code:
    words: tuple[tuple[int, ...], ...]
    length: int
    alphabet: int

    def __post_init__(self):
        words = tuple(tuple(int(s) for s in w) for w in self.words)
        if any(len(w) != self.length for w in words):
            raise DomainError(f"all words must have length {self.length}")
        if any(s < 0 or s >= self.alphabet for w in words for s in w):
            raise DomainError(f"letters must lie in 0..{self.alphabet - 1}")
        if len(set(words)) != len(words):
            raise DomainError("duplicate code word")
        object.__setattr__(self, "words", words)

    @classmethod
    def from_words(cls, words: Iterable[Sequence[int] | str], alphabet: int) -> "Code":
        ws = [parse_word(w) if isinstance(w, str) else tuple(w) for w in words]
        if not ws:
            raise DomainError("a code needs at least one word")
        return cls(tuple(ws), len(ws[0]), alphabet)

    def __len__(self) -> int:
        return len(self.words)

    def array(self) -> np.ndarray:
        return np.asarray(self.words, dtype=np.int64).reshape(len(self.words), self.length)

    def sorted(self) -> "Code":
        return Code(tuple(sorted(self.words)), self.length, self.alphabet)

    def strings(self) -> list[str]:
        return [format_word(w, self.alphabet) for w in self.words]

    @cached_property
    def min_distance(self) -> int:
        if len(self.words) < 2:
            raise DomainError("minimum distance is undefined for fewer than two words")
        arr = self.array()
        best = self.length
        chunk = max(1, 2_000_000 // max(1, len(arr) * self.length))
        for start in range(0, len(arr), chunk):
            block = arr[start : start + chunk]
            dist = (block[:, None, :] != arr[None, :, :]).sum(axis=2)
            rows = np.arange(len(block))
            dist[rows, start + rows] = self.length + 1
            best = min(best, int(dist.min()))
        return best


def singleton_bound(n: int, d: int, distance: int) -> int:
    """Largest possible number of words, d^(n - distance + 1)."""
    return d ** (n - distance + 1)


def is_mds(code: Code) -> bool:
    return len(code) == singleton_bound(code.length, code.alphabet, code.min_distance)


def existence_bound(n: int, d: int) -> bool:
    """Necessary condition d >= floor(n/2) + 1 for a minimal-support AME state."""
    return d >= n // 2 + 1


def rs_generator(d: int) -> np.ndarray:
    """Generator with rows (j^r for j = 0..d-1) followed by a unit tail entry.

    Row r (r = 0..k-1, k = (d+1)/2) is [0^r, 1^r, ..., (d-1)^r, delta_{r,k-1}],
    with 0^0 = 1, all taken mod d.
    """
    if not is_prime(d):
        raise UnsupportedError(f"{d} is not prime")
    if d % 2 == 0:
        raise UnsupportedError("the length d+1 must be even, so d must be odd")
    k = (d + 1) // 2
    g = np.zeros((k, d + 1), dtype=np.int64)
    for r in range(k):
        g[r, :d] = [pow(j, r, d) for j in range(d)]
        g[r, d] = 1 if r == k - 1 else 0
    return g


def encode(messages: np.ndarray, generator: np.ndarray, d: int) -> np.ndarray:
    return (np.asarray(messages) @ generator) % d


def rs_code(d: int) -> Code:
    """All u*G for u running over GF(d)^k in ascending order."""
    g = rs_generator(d)
    k = g.shape[0]
    msgs = np.array(list(itertools.product(range(d), repeat=k)), dtype=np.int64)
    return Code(tuple(map(tuple, encode(msgs, g, d).tolist())), d + 1, d)


@dataclass(frozen=True)
class GreedyResult:
    code: Code
    success: bool
    target_size: int
    threshold: int

    @property
    def verdict(self) -> str:
        return "MDS code found" if self.success else "greedy failed"


def greedy_threshold(n: int) -> int:
    """Distance required of the minimal-support AME code on n letters."""
    return math.ceil(n / 2) + 1


def greedy_mds_search(n: int, d: int, block: int = 4096) -> GreedyResult:
    """Scan words in ascending base-d order, keeping those far from all kept words."""
    if d**n > MAX_GREEDY_SPACE:
        raise DomainError(f"d^N = {d**n} exceeds the search limit {MAX_GREEDY_SPACE}")
    delta = greedy_threshold(n)
    target = d ** (n // 2)
    kept = np.zeros((0, n), dtype=np.int64)
    powers = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, d**n, block):
        idx = np.arange(start, min(start + block, d**n), dtype=np.int64)
        cand = (idx[:, None] // powers) % d
        if len(kept):
            far = ((cand[:, None, :] != kept[None, :, :]).sum(axis=2) >= delta).all(axis=1)
            cand = cand[far]
        # candidates surviving the earlier kept words still interact with each other
        for w in cand:
            if len(kept) == 0 or ((kept != w).sum(axis=1) >= delta).all():
                kept = np.vstack([kept, w])
        # the Singleton bound caps the code at d^(n - delta + 1) = target words
        if len(kept) >= target:
            break
    words = tuple(map(tuple, kept.tolist()))
    code = Code(words, n, d)
    return GreedyResult(code, len(words) == target, target, delta)


def shorten_code(code: Code) -> Code:
    """Keep the words starting with 0 and drop that letter (N -> N-1)."""
    if len(code) < 2 or not is_mds(code):
        raise DomainError("shortening needs an MDS code")
    n = code.length
    if n % 2:
        raise DomainError("shortening is defined for even length")
    words = sorted(code.words)[: code.alphabet ** (n // 2 - 1)]
    if any(w[0] != 0 for w in words):
        raise DomainError("the leading subset does not consist of words starting with 0")
    return Code(tuple(w[1:] for w in words), n - 1, code.alphabet)


def drop_letter(code: Code, position: int) -> Code:
    """Delete one coordinate from every word (N-1 -> N-2)."""
    if len(code) < 2 or not is_mds(code):
        raise DomainError("dropping a letter needs an MDS code")
    if not 0 <= position < code.length:
        raise DomainError(f"position {position} outside 0..{code.length - 1}")
    words = tuple(w[:position] + w[position + 1 :] for w in code.words)
    return Code(words, code.length - 1, code.alphabet)


def code_to_state(code: Code, phases: Sequence[float] | None = None) -> PureState:
    """Equal-weight superposition of the code words, with optional phases theta_k."""
    m = len(code)
    theta = np.zeros(m) if phases is None else np.asarray(phases, dtype=float)
    if theta.shape != (m,):
        raise DomainError(f"expected {m} phases, got {theta.shape}")
    amps = np.exp(1j * theta) / math.sqrt(m)
    return PureState.from_terms(code.length, code.alphabet, zip(code.words, amps))


def state_to_code(state: PureState, tol: float = DEFAULT_TOL) -> Code:
    """Words of a state whose nonzero amplitudes share one modulus."""
    mods = np.abs(state.amplitudes)
    nz = mods > tol
    if not nz.any():
        raise DomainError("the state has no nonzero amplitudes")
    if np.ptp(mods[nz]) > tol:
        raise DomainError(f"amplitude moduli differ by {np.ptp(mods[nz]):.3e}")
    return Code(tuple(map(tuple, state.kets[nz].tolist())), state.num_parties, state.local_dim)


def permute_coordinates(code: Code, order: Sequence[int]) -> Code:
    """Code whose coordinate i is coordinate order[i] of the input."""
    return Code(
        tuple(tuple(w[o] for o in order) for w in code.words), code.length, code.alphabet
    )
