"""Arithmetic in GF(2^m) with bit-packed polynomial elements.

Elements are ints in [0, 2^m): bit i holds the coefficient of x^i.
Addition is xor; multiplication is a carry-less product reduced by a fixed
irreducible modulus.  The modulus for each m is the numerically smallest
irreducible degree-m polynomial over GF(2), found once by deterministic
search, so element encodings are stable across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .errors import ContractViolation, DomainError

MAX_EXTENSION_DEGREE = 64


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def polymod(a: int, mod: int) -> int:
    """Remainder of a modulo mod over GF(2)."""
    dm = mod.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= mod << (a.bit_length() - 1 - dm)
    return a


def _polygcd(a: int, b: int) -> int:
    while b:
        a, b = b, polymod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(poly: int) -> bool:
    """Rabin's test for irreducibility of a GF(2) polynomial."""
    m = poly.bit_length() - 1
    if m < 1:
        return False
    if m == 1:
        return True

    def frob(times: int) -> int:
        # x^(2^times) mod poly, by repeated squaring of x
        s = 0b10
        for _ in range(times):
            s = polymod(clmul(s, s), poly)
        return s

    if frob(m) != 0b10:
        return False
    for q in _prime_factors(m):
        if _polygcd(frob(m // q) ^ 0b10, poly) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def default_modulus(m: int) -> int:
    """Numerically smallest irreducible degree-m polynomial over GF(2)."""
    if not 1 <= m <= MAX_EXTENSION_DEGREE:
        raise DomainError(f"extension degree must be in 1..{MAX_EXTENSION_DEGREE}")
    # constant term must be 1 for m >= 2 (else divisible by x)
    for candidate in range((1 << m) + 1, 1 << (m + 1), 2):
        if is_irreducible(candidate):
            return candidate
    raise RuntimeError(f"no irreducible polynomial of degree {m} found")  # unreachable


@dataclass(frozen=True)
class GF2mField:
    """The field GF(2^m) under a fixed irreducible modulus."""

    m: int
    modulus: int = 0

    def __post_init__(self):
        if not 1 <= self.m <= MAX_EXTENSION_DEGREE:
            raise DomainError(
                f"extension degree must be in 1..{MAX_EXTENSION_DEGREE}"
            )
        if self.modulus == 0:
            object.__setattr__(self, "modulus", default_modulus(self.m))
        if self.modulus.bit_length() - 1 != self.m:
            raise DomainError("modulus degree does not match m")
        if not is_irreducible(self.modulus):
            raise DomainError(f"modulus {self.modulus:#x} is reducible")

    @property
    def size(self) -> int:
        return 1 << self.m

    def check(self, a: int) -> int:
        if not 0 <= a < self.size:
            raise DomainError(f"{a} is not an element of GF(2^{self.m})")
        return a

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        return polymod(clmul(a, b), self.modulus)

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out, base = 1, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(2^m)")
        return self.pow(a, self.size - 2)

    def dot(self, xs, ys) -> int:
        total = 0
        for x, y in zip(xs, ys):
            total ^= self.mul(x, y)
        return total


class GFBlackBox:
    """Evaluation-only access to a homogeneous polynomial over GF(2^m).

    Mirrors the rational black box: pure ``fn``, counted calls.
    """

    __slots__ = ("field", "nvars", "degree", "_fn", "calls")

    def __init__(self, field: GF2mField, nvars: int, degree: int, fn: Callable):
        if nvars < 1 or degree < 1:
            raise ContractViolation("black box needs nvars >= 1 and degree >= 1")
        self.field = field
        self.nvars = nvars
        self.degree = degree
        self._fn = fn
        self.calls = 0

    def eval(self, point) -> int:
        point = tuple(point)
        if len(point) != self.nvars:
            raise ContractViolation(
                f"point has {len(point)} coordinates, expected {self.nvars}"
            )
        self.calls += 1
        return self._fn(point)

    def reset_counters(self) -> None:
        self.calls = 0


def gf_sparse_blackbox(
    field: GF2mField, nvars: int, degree: int, coeffs: dict
) -> GFBlackBox:
    """Black box for an explicit homogeneous polynomial over GF(2^m)."""
    table = {}
    for alpha, c in coeffs.items():
        alpha = tuple(int(e) for e in alpha)
        if len(alpha) != nvars or sum(alpha) != degree or min(alpha, default=0) < 0:
            raise ContractViolation(f"bad exponent vector {alpha}")
        c = field.check(int(c))
        if c:
            table[alpha] = c

    def fn(point):
        total = 0
        for alpha, c in sorted(table.items()):
            prod = c
            for v, e in zip(point, alpha):
                if e:
                    prod = field.mul(prod, field.pow(v, e))
            total ^= prod
        return total

    return GFBlackBox(field, nvars, degree, fn)


def cauchy_matrix(field: GF2mField, d: int, n: int) -> list[list[int]]:
    """A d x n matrix over GF(2^m) all of whose minors are nonzero.

    Entry (i, j) is 1/(u_i + v_j) with the u's and v's distinct field
    elements; every square submatrix is again Cauchy, hence invertible.
    Needs d + n distinct elements, i.e. 2^m >= d + n.
    """
    if d < 1 or n < 1:
        raise DomainError("matrix dimensions must be positive")
    if d + n > field.size:
        raise DomainError(
            f"GF(2^{field.m}) is too small for a {d}x{n} Cauchy matrix "
            f"(needs {d + n} distinct elements)"
        )
    us = list(range(d))
    vs = list(range(d, d + n))
    return [[field.inv(u ^ v) for v in vs] for u in us]
