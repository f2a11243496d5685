"""Arithmetic in GF(p^m) through precomputed addition and multiplication tables.

Elements are encoded as integers sum_i c_i p^i, where c_i is the coefficient
of x^i in the polynomial representative.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, UnsupportedError

MAX_ORDER = 64

# Reduction polynomials as coefficient lists, constant term first.
FIXED_MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % q for q in range(2, int(n**0.5) + 1))


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, m) with q = p^m, or None if q is not a prime power."""
    if q < 2:
        return None
    p = next(f for f in range(2, q + 1) if q % f == 0)
    m = 0
    while q % p == 0:
        q //= p
        m += 1
    return (p, m) if q == 1 else None


def is_prime_power(q: int) -> bool:
    return prime_power(q) is not None


def _poly_mod(a: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    a = a[:]
    m = len(mod) - 1
    for deg in range(len(a) - 1, m - 1, -1):
        c = a[deg] % p
        if c:
            for i, mc in enumerate(mod):
                a[deg - m + i] = (a[deg - m + i] - c * mc) % p
    return [c % p for c in a[:m]] + [0] * max(0, m - len(a))


def _is_irreducible(mod: tuple[int, ...], p: int) -> bool:
    """True when ``mod`` is irreducible, by trial division with all lower-degree monics."""
    m = len(mod) - 1
    for deg in range(1, m // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            divisor = tuple(tail) + (1,)
            if not any(_poly_mod(list(mod), divisor, p)):
                return False
    return True


def find_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Smallest monic irreducible polynomial of degree m in the integer encoding."""
    for code in range(p**m):
        tail = [(code // p**i) % p for i in range(m)]
        mod = tuple(tail) + (1,)
        if _is_irreducible(mod, p):
            return mod
    raise AssertionError("no irreducible polynomial found")  # unreachable for prime p


@dataclass(frozen=True, eq=False)
class GaloisField:
    p: int
    m: int
    modulus: tuple[int, ...]
    add_table: np.ndarray
    mul_table: np.ndarray

    @property
    def order(self) -> int:
        return self.p**self.m

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(np.flatnonzero(self.add_table[a] == 0)[0])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def inv(self, a: int) -> int:
        if a % self.order == 0:
            raise DomainError("zero has no multiplicative inverse")
        return int(np.flatnonzero(self.mul_table[a] == 1)[0])

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    def coefficients(self, a: int) -> tuple[int, ...]:
        return tuple((a // self.p**i) % self.p for i in range(self.m))

    def from_coefficients(self, coeffs) -> int:
        return sum(int(c) % self.p * self.p**i for i, c in enumerate(coeffs))

    def frobenius(self, a: int) -> int:
        """a -> a^p."""
        r = 1
        for _ in range(self.p):
            r = self.mul(r, a)
        return r if a else 0


@lru_cache(maxsize=None)
def galois_field(p: int, m: int = 1) -> GaloisField:
    if not is_prime(p):
        raise DomainError(f"characteristic {p} is not prime")
    if m < 1:
        raise DomainError(f"extension degree must be >= 1, got {m}")
    q = p**m
    if q > MAX_ORDER:
        raise UnsupportedError(f"field order {q} exceeds {MAX_ORDER}")
    mod = FIXED_MODULI.get((p, m)) or find_irreducible(p, m)
    coeffs = [[(a // p**i) % p for i in range(m)] for a in range(q)]
    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    powers = [p**i for i in range(m)]
    for a, b in itertools.product(range(q), repeat=2):
        ca, cb = coeffs[a], coeffs[b]
        add[a, b] = sum(((x + y) % p) * w for x, y, w in zip(ca, cb, powers))
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(ca):
            for j, y in enumerate(cb):
                prod[i + j] += x * y
        red = _poly_mod(prod, mod, p) if m > 1 else [prod[0] % p]
        mul[a, b] = sum(c * w for c, w in zip(red, powers))
    add.setflags(write=False)
    mul.setflags(write=False)
    return GaloisField(p, m, mod, add, mul)


def field_of_order(q: int) -> GaloisField:
    pm = prime_power(q)
    if pm is None:
        raise UnsupportedError(f"{q} is not a prime power")
    return galois_field(*pm)


@dataclass(frozen=True)
class FieldElement:
    field: GaloisField
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.order:
            raise DomainError(f"{self.value} is not an element of GF({self.field.order})")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise DomainError("elements belong to different fields")
            return other.value
        return int(other) % self.field.p if self.field.m == 1 else int(other)

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._coerce(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        return self * FieldElement(self.field, self._coerce(other)).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        r = FieldElement(self.field, 1)
        for _ in range(n):
            r = r * self
        return r

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"GF({self.field.order})[{self.value}]"
