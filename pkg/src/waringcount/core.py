"""Exact linear forms, power-sum decompositions, and the differential pairing.

Scalars are arbitrary-precision rationals throughout: ``fractions.Fraction``,
with plain ``int`` accepted anywhere a rational is expected.  Nothing in this
module rounds; downstream pipelines depend on exact cancellation of the
decomposition scales.

A ``WaringDecomposition`` stores the represented polynomial itself.  The d!
factor that appears when a degree-d form acts as a constant-coefficient
differential operator is applied inside :func:`apply_operator`, never baked
into stored weights, so :func:`expand` needs no hidden convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence, Union

from .errors import ContractViolation, SizeBudgetError

Scalar = Union[int, Fraction]

# Cap on the dense monomial count C(nvars+degree-1, degree) that expand()
# will attempt; exceeding it raises SizeBudgetError instead of thrashing.
DEFAULT_EXPANSION_BUDGET = 100_000


def exponent_vectors(nvars: int, degree: int) -> Iterator[tuple[int, ...]]:
    """All length-``nvars`` exponent vectors of total degree ``degree``.

    Emitted in a fixed (first-coordinate-descending) order so that sums
    over monomials are reproducible.
    """
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in exponent_vectors(nvars - 1, degree - first):
            yield (first,) + rest


def exponent_factorial(alpha: Sequence[int]) -> int:
    """alpha! = prod_i alpha_i!"""
    out = 1
    for e in alpha:
        out *= math.factorial(e)
    return out


@dataclass(frozen=True)
class LinearForm:
    """A linear form sum_j c_j x_j, stored as its coefficient vector."""

    coefficients: tuple[Scalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    @property
    def nvars(self) -> int:
        return len(self.coefficients)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def point(self) -> tuple[Scalar, ...]:
        """The evaluation point associated with the form (its coefficients)."""
        return self.coefficients


@dataclass(frozen=True)
class WaringTerm:
    """One weighted power ``weight * form**power``."""

    weight: Scalar
    form: LinearForm
    power: int


def term(weight: Scalar, coefficients: Iterable[Scalar], power: int) -> WaringTerm:
    return WaringTerm(weight, LinearForm(tuple(coefficients)), power)


@dataclass(frozen=True)
class WaringDecomposition:
    """``scale * sum_i weight_i * form_i**degree`` with all shapes equal.

    Zero-weight terms and identically-zero forms are dropped at
    construction, so ``len(terms)`` is also the number of black-box queries
    :func:`apply_operator` will spend.
    """

    nvars: int
    degree: int
    terms: tuple[WaringTerm, ...]
    scale: Scalar = 1

    def __post_init__(self):
        if self.nvars < 1:
            raise ContractViolation("decomposition needs at least one variable")
        if self.degree < 1:
            raise ContractViolation("decomposition degree must be positive")
        kept = []
        for t in self.terms:
            if t.form.nvars != self.nvars:
                raise ContractViolation(
                    f"term has {t.form.nvars} coefficients, expected {self.nvars}"
                )
            if t.power != self.degree:
                raise ContractViolation(
                    f"term power {t.power} differs from degree {self.degree}"
                )
            if t.weight != 0 and not t.form.is_zero():
                kept.append(t)
        object.__setattr__(self, "terms", tuple(kept))

    def __len__(self) -> int:
        return len(self.terms)


class SparsePolynomial:
    """Homogeneous polynomial as an exponent-vector -> coefficient table.

    Keys are canonical fixed-length int tuples; zero coefficients are never
    stored; iteration for sums is over sorted keys, which keeps every
    reduction reproducible.
    """

    __slots__ = ("nvars", "degree", "_coeffs")

    def __init__(self, nvars: int, degree: int, coeffs):
        if nvars < 0 or degree < 0:
            raise ContractViolation("nvars and degree must be nonnegative")
        items = coeffs.items() if hasattr(coeffs, "items") else coeffs
        table: dict[tuple[int, ...], Scalar] = {}
        for alpha, c in items:
            alpha = tuple(int(e) for e in alpha)
            if len(alpha) != nvars:
                raise ContractViolation(
                    f"exponent vector {alpha} has length {len(alpha)}, expected {nvars}"
                )
            if any(e < 0 for e in alpha):
                raise ContractViolation(f"negative exponent in {alpha}")
            if sum(alpha) != degree:
                raise ContractViolation(
                    f"exponent vector {alpha} has degree {sum(alpha)}, expected {degree}"
                )
            if c != 0:
                table[alpha] = table.get(alpha, 0) + c
        self.nvars = nvars
        self.degree = degree
        self._coeffs = {a: c for a, c in table.items() if c != 0}

    def coefficient(self, alpha: Sequence[int]) -> Scalar:
        return self._coeffs.get(tuple(alpha), 0)

    def terms(self) -> list[tuple[tuple[int, ...], Scalar]]:
        return sorted(self._coeffs.items())

    def support(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.degree == other.degree
            and self._coeffs == other._coeffs
        )

    __hash__ = None  # mutable-adjacent container semantics

    def __repr__(self) -> str:
        return (
            f"SparsePolynomial(nvars={self.nvars}, degree={self.degree}, "
            f"terms={len(self._coeffs)})"
        )

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        if len(point) != self.nvars:
            raise ContractViolation(
                f"point has {len(point)} coordinates, expected {self.nvars}"
            )
        total: Scalar = 0
        for alpha, c in self.terms():
            prod: Scalar = c
            for value, e in zip(point, alpha):
                if e:
                    prod *= value**e
            total += prod
        return total

    def plus(self, other: "SparsePolynomial") -> "SparsePolynomial":
        if self.nvars != other.nvars or self.degree != other.degree:
            raise ContractViolation("shape mismatch in polynomial sum")
        table = dict(self._coeffs)
        for alpha, c in other._coeffs.items():
            table[alpha] = table.get(alpha, 0) + c
        return SparsePolynomial(self.nvars, self.degree, table)

    def scaled(self, factor: Scalar) -> "SparsePolynomial":
        return SparsePolynomial(
            self.nvars, self.degree, {a: factor * c for a, c in self._coeffs.items()}
        )


def monomial(nvars: int, alpha: Sequence[int], coefficient: Scalar = 1) -> SparsePolynomial:
    return SparsePolynomial(nvars, sum(alpha), {tuple(alpha): coefficient})


def elementary_symmetric(n: int, d: int) -> SparsePolynomial:
    """e_{n,d}: every degree-d multilinear monomial with coefficient 1."""
    if not 1 <= d <= n:
        raise ContractViolation(f"elementary symmetric needs 1 <= d <= n, got ({n}, {d})")
    table = {}
    for subset in combinations(range(n), d):
        alpha = [0] * n
        for i in subset:
            alpha[i] = 1
        table[tuple(alpha)] = 1
    return SparsePolynomial(n, d, table)


class BlackBoxPolynomial:
    """Evaluation-only access to a homogeneous polynomial.

    The wrapped function must be pure.  Every call is counted in ``calls``
    (query counts are contractual downstream) and the bit length of the
    largest result numerator is tracked in ``max_result_bits`` as telemetry.
    """

    __slots__ = ("nvars", "degree", "_fn", "calls", "max_result_bits")

    def __init__(self, nvars: int, degree: int, fn: Callable[[tuple], Scalar]):
        if nvars < 1 or degree < 1:
            raise ContractViolation("black box needs nvars >= 1 and degree >= 1")
        self.nvars = nvars
        self.degree = degree
        self._fn = fn
        self.calls = 0
        self.max_result_bits = 0

    def eval(self, point: Sequence[Scalar]) -> Scalar:
        point = tuple(point)
        if len(point) != self.nvars:
            raise ContractViolation(
                f"point has {len(point)} coordinates, expected {self.nvars}"
            )
        value = self._fn(point)
        self.calls += 1
        bits = abs(value.numerator).bit_length()
        if bits > self.max_result_bits:
            self.max_result_bits = bits
        return value

    def reset_counters(self) -> None:
        self.calls = 0
        self.max_result_bits = 0


def apply_operator(g: WaringDecomposition, f: BlackBoxPolynomial) -> Fraction:
    """Apply g as a constant-coefficient differential operator to f.

    Costs exactly ``len(g.terms)`` evaluations: for equal degrees the pairing
    equals ``scale * d! * sum_i weight_i * f(form_i coefficients)``.
    """
    if g.nvars != f.nvars:
        raise ContractViolation(f"nvars mismatch: {g.nvars} vs {f.nvars}")
    if g.degree != f.degree:
        raise ContractViolation(f"degree mismatch: {g.degree} vs {f.degree}")
    total: Scalar = 0
    for t in g.terms:
        total += t.weight * f.eval(t.form.point())
    return Fraction(g.scale) * math.factorial(g.degree) * total


def _power_terms(form: LinearForm, degree: int) -> Iterator[tuple[tuple[int, ...], Scalar]]:
    """Terms of form**degree via multinomial expansion over the support."""
    support = [(j, c) for j, c in enumerate(form.coefficients) if c != 0]
    if not support:
        return
    nvars = form.nvars

    def rec(i: int, remaining: int, alpha: list[int], coeff: Scalar):
        j, c = support[i]
        if i == len(support) - 1:
            alpha[j] = remaining
            yield tuple(alpha), coeff * c**remaining
            alpha[j] = 0
            return
        for k in range(remaining + 1):
            alpha[j] = k
            yield from rec(
                i + 1, remaining - k, alpha, coeff * math.comb(remaining, k) * c**k
            )
            alpha[j] = 0

    yield from rec(0, degree, [0] * nvars, 1)


def expand(
    g: WaringDecomposition, budget: int = DEFAULT_EXPANSION_BUDGET
) -> SparsePolynomial:
    """Multiply out ``scale * sum_i w_i form_i**d`` into an explicit table."""
    dense_size = math.comb(g.nvars + g.degree - 1, g.degree)
    if dense_size > budget:
        raise SizeBudgetError(
            f"expansion would touch up to {dense_size} monomials (budget {budget})"
        )
    acc: dict[tuple[int, ...], Scalar] = {}
    for t in g.terms:
        for alpha, c in _power_terms(t.form, g.degree):
            acc[alpha] = acc.get(alpha, 0) + t.weight * c
    return SparsePolynomial(
        g.nvars, g.degree, {a: g.scale * v for a, v in acc.items() if v != 0}
    )


def operator_on_sparse(g: SparsePolynomial, f: SparsePolynomial) -> Fraction:
    """Apolarity pairing ``sum_alpha g_alpha f_alpha alpha!`` (symmetric)."""
    if g.nvars != f.nvars:
        raise ContractViolation(f"nvars mismatch: {g.nvars} vs {f.nvars}")
    if g.degree != f.degree:
        raise ContractViolation(f"degree mismatch: {g.degree} vs {f.degree}")
    total: Scalar = 0
    for alpha in sorted(g.support() & f.support()):
        total += g.coefficient(alpha) * f.coefficient(alpha) * exponent_factorial(alpha)
    return Fraction(total)


def concat(gs: Sequence[WaringDecomposition]) -> WaringDecomposition:
    """Concatenate decompositions; each scale is folded into its weights."""
    gs = list(gs)
    if not gs:
        raise ContractViolation("concat of an empty sequence")
    nvars, degree = gs[0].nvars, gs[0].degree
    terms = []
    for g in gs:
        if g.nvars != nvars or g.degree != degree:
            raise ContractViolation("concat requires equal nvars and degree")
        for t in g.terms:
            terms.append(WaringTerm(g.scale * t.weight, t.form, t.power))
    return WaringDecomposition(nvars, degree, tuple(terms), 1)


def homogeneity_probe(f: BlackBoxPolynomial, rng, samples: int = 20) -> bool:
    """Spot-check f(lam * v) == lam**degree * f(v) on random rational points."""
    d = f.degree
    for _ in range(samples):
        v = tuple(
            Fraction(rng.randint(-7, 7), rng.randint(1, 5)) for _ in range(f.nvars)
        )
        lam = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        scaled = tuple(lam * x for x in v)
        if f.eval(scaled) != lam**d * f.eval(v):
            return False
    return True
