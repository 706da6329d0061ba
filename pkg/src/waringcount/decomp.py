"""Decomposition generators supported on the multilinear monomials.

Every generator returns a :class:`~waringcount.core.WaringDecomposition`
whose expansion equals the intended polynomial exactly; ``core.expand`` is
the correctness gate for all of them.  Term counts are contractual because
they become downstream query budgets, so generators never emit zero-weight
or zero-form terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .core import (
    LinearForm,
    Scalar,
    WaringDecomposition,
    WaringTerm,
)
from .errors import ContractViolation, DomainError, ParseError, SizeBudgetError
from .splitters import FunctionFamily

DEFAULT_TERM_BUDGET = 1_000_000

DECOMPOSITION_KINDS = (
    "ryser",
    "lee_odd",
    "lee_even",
    "monomial",
    "colorcoding",
    "splitter_composed",
    "direct_power_sum",
    "char2_permanent",
)


def ryser_elementary(n: int, d: int) -> WaringDecomposition:
    """Inclusion-exclusion decomposition of e_{n,d}, one term per nonzero
    0/1 vector alpha with |alpha| <= d.

    d! e_{n,d} = sum_alpha (-1)^{|alpha|+d} C(n-|alpha|, d-|alpha|) (alpha.x)^d;
    the 1/d! lives in the weights so the stored object is e_{n,d} itself.
    """
    if not 1 <= d <= n:
        raise DomainError(f"need 1 <= d <= n, got d={d}, n={n}")
    dfact = math.factorial(d)
    terms = []
    for size in range(1, d + 1):
        binom = math.comb(n - size, d - size)
        sign = (-1) ** (size + d)
        weight = Fraction(sign * binom, dfact)
        for subset in combinations(range(n), size):
            coeffs = [0] * n
            for i in subset:
                coeffs[i] = 1
            terms.append(WaringTerm(weight, LinearForm(tuple(coeffs)), d))
    return WaringDecomposition(n, d, tuple(terms), 1)


def lee_elementary(n: int, d: int) -> WaringDecomposition:
    """Sign-pattern decomposition of e_{n,d} with sum_{i<=floor(d/2)} C(n,i)
    terms, indexed by the subsets S whose variables get a flipped sign.

    Odd d:  2^{d-1} d! e_{n,d}
              = sum_S (-1)^{|S|} C(n-floor(d/2)-|S|-1, floor(d/2)-|S|) (delta_S.x)^d.
    Even d: each weight gains a factor (n-2|S|) and the constant becomes
    2^d d! (n-d); the extra 1/(n-d) is why n > d is required here.  Both
    constants are pinned by the expansion oracle in the test suite.
    """
    if not 1 <= d <= n:
        raise DomainError(f"need 1 <= d <= n, got d={d}, n={n}")
    even = d % 2 == 0
    if even and n == d:
        raise DomainError(
            "even degree with n == d is singular here; use ryser_elementary, "
            "monomial_product_decomposition, or pad with an extra variable"
        )
    half = d // 2
    if even:
        scale = Fraction(1, 2**d * math.factorial(d) * (n - d))
    else:
        scale = Fraction(1, 2 ** (d - 1) * math.factorial(d))
    terms = []
    for size in range(half + 1):
        weight = (-1) ** size * math.comb(n - half - size - 1, half - size)
        if even:
            weight *= n - 2 * size
        for subset in combinations(range(n), size):
            flipped = set(subset)
            coeffs = tuple(-1 if i in flipped else 1 for i in range(n))
            terms.append(WaringTerm(weight, LinearForm(coeffs), d))
    return WaringDecomposition(n, d, tuple(terms), scale)


def monomial_product_decomposition(exponents: Sequence[int]) -> WaringDecomposition:
    """Power-sum decomposition of x_1^{a_1} ... x_t^{a_t} over the rationals.

    Uses the centered-difference identity

        2^d d! x^a = sum_{j in prod [0..a_i]}
            (-1)^{|a|-|j|} prod_i C(a_i, j_i) * (sum_i (2 j_i - a_i) x_i)^d,

    whose only surviving monomial is x^a: each per-variable difference
    kills exponents below a_i and the fixed total degree kills everything
    else.  Antipodal grid points contribute equally (the degree equals
    |a|), so each pair folds into one term with doubled weight and the
    all-zero center form is dropped.  All scalars stay rational; the
    expansion oracle is the correctness gate.
    """
    exponents = tuple(int(a) for a in exponents)
    if not exponents:
        raise DomainError("empty exponent list")
    if any(a < 1 for a in exponents):
        raise DomainError(f"exponents must be positive, got {exponents}")
    t = len(exponents)
    d = sum(exponents)
    if t == 1:
        return WaringDecomposition(
            1, d, (WaringTerm(1, LinearForm((1,)), d),), 1
        )
    scale = Fraction(1, 2**d * math.factorial(d))
    terms = []
    for grid in product(*(range(a + 1) for a in exponents)):
        vector = tuple(2 * j - a for j, a in zip(grid, exponents))
        leading = next((v for v in vector if v != 0), 0)
        if leading <= 0:
            # zero center, or the antipode of a kept grid point
            continue
        weight = 2 * (-1) ** (d - sum(grid))
        for j, a in zip(grid, exponents):
            weight *= math.comb(a, j)
        terms.append(WaringTerm(weight, LinearForm(vector), d))
    return WaringDecomposition(t, d, tuple(terms), scale)


def colorcoding_decomposition(
    n: int, d: int, family: FunctionFamily
) -> WaringDecomposition:
    """One inclusion-exclusion block per coloring function.

    For each function pi: [n] -> [d] and each nonzero alpha in {0,1}^d the
    term is (-1)^{|alpha|+d} (sum_i alpha_{pi(i)} x_i)^d.  The expansion is
    d! * sum_pi prod_j (sum of the variables colored j), so a multilinear
    monomial's coefficient is d! times the number of functions injective on
    its support; a perfect hash family makes them all strictly positive.
    """
    if family.n != n:
        raise DomainError(f"family domain {family.n} != n = {n}")
    if family.range_size != d or family.range_shape is not None:
        raise DomainError(f"family range {family.range_size} != d = {d}")
    terms = []
    for fn in family.functions:
        for mask in range(1, 2**d):
            bits = mask.bit_count()
            weight = (-1) ** (bits + d)
            coeffs = tuple((mask >> fn[i]) & 1 for i in range(n))
            terms.append(WaringTerm(weight, LinearForm(coeffs), d))
    return WaringDecomposition(n, d, tuple(terms), 1)


def splitter_composed(
    base: WaringDecomposition, n: int, family: FunctionFamily
) -> WaringDecomposition:
    """Pull the base decomposition back through every family function.

    Substituting x_j -> (sum of the variables mapped to j) turns each base
    form coefficient vector c into the vector k -> c[pi(k)].  The summed
    expansion is multilinear whenever the base polynomial is, and with a
    delta-balanced family its multilinear coefficients fall within a
    delta^2 max/min ratio.
    """
    if family.n != n:
        raise ContractViolation(f"family domain {family.n} != n = {n}")
    if family.range_size != base.nvars or family.range_shape is not None:
        raise ContractViolation(
            f"family range {family.range_size} != base nvars {base.nvars}"
        )
    terms = []
    for fn in family.functions:
        for t in base.terms:
            src = t.form.coefficients
            coeffs = tuple(src[fn[k]] for k in range(n))
            terms.append(WaringTerm(t.weight, LinearForm(coeffs), base.degree))
    return WaringDecomposition(n, base.degree, tuple(terms), base.scale)


def _block_index(i: int, j: int, k: int, t: int, n0: int) -> int:
    return (i * t + j) * n0 + k


def direct_power_sum(
    base: WaringDecomposition,
    s: int,
    t: int,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> WaringDecomposition:
    """Decomposition of the s-fold disjoint sum of the t-fold disjoint
    product of the base polynomial.

    Variables come in s*t blocks of base.nvars: block (i, j) holds copy j
    of the product inside summand i.  Expanding the t-fold product of the
    base decomposition leaves products of d-th powers on disjoint blocks,
    each rewritten through the decomposition of y_1^d ... y_t^d composed
    with the block forms.
    """
    if s < 1 or t < 1:
        raise DomainError(f"need s, t >= 1, got s={s}, t={t}")
    r = len(base.terms)
    if r == 0:
        raise DomainError("base decomposition has no terms")
    n0, d = base.nvars, base.degree
    nvars = s * t * n0
    degree = t * d

    if t == 1:
        if s * r > term_budget:
            raise SizeBudgetError(f"{s * r} terms exceed budget {term_budget}")
        terms = []
        for i in range(s):
            for bt in base.terms:
                coeffs = [0] * nvars
                for k, c in enumerate(bt.form.coefficients):
                    coeffs[_block_index(i, 0, k, t, n0)] = c
                terms.append(
                    WaringTerm(base.scale * bt.weight, LinearForm(tuple(coeffs)), degree)
                )
        return WaringDecomposition(nvars, degree, tuple(terms), 1)

    mono = monomial_product_decomposition((d,) * t)
    predicted = s * r**t * len(mono.terms)
    if predicted > term_budget:
        raise SizeBudgetError(
            f"direct power sum would emit up to {predicted} terms "
            f"(budget {term_budget})"
        )
    folded = [(base.scale * bt.weight, bt.form.coefficients) for bt in base.terms]
    terms = []
    for i in range(s):
        for choice in product(range(r), repeat=t):
            wprod: Scalar = 1
            for v in choice:
                wprod *= folded[v][0]
            for mt in mono.terms:
                weight = wprod * mono.scale * mt.weight
                mu = mt.form.coefficients
                coeffs = [0] * nvars
                for j in range(t):
                    if mu[j] == 0:
                        continue
                    src = folded[choice[j]][1]
                    for k, c in enumerate(src):
                        coeffs[_block_index(i, j, k, t, n0)] = mu[j] * c
                terms.append(WaringTerm(weight, LinearForm(tuple(coeffs)), degree))
    return WaringDecomposition(nvars, degree, tuple(terms), 1)


def perfect_splitter_composed(
    base: WaringDecomposition,
    n: int,
    d: int,
    family: FunctionFamily,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> WaringDecomposition:
    """Compose the direct power sum with a perfect splitter's blocks.

    Summand i substitutes, for its block variable (j, k), the sum of the
    original variables that function i maps to group j, slot k.  With a
    verified perfect splitter and a base supported on all multilinear
    monomials with positive coefficients, the expansion is multilinear and
    strictly positive on every degree-d multilinear monomial.
    """
    d0, n0 = base.degree, base.nvars
    if d % d0 != 0:
        raise DomainError(
            f"base degree {d0} must divide d = {d}; pad variables so it does"
        )
    t = d // d0
    if family.n != n:
        raise ContractViolation(f"family domain {family.n} != n = {n}")
    if family.range_shape != (t, n0):
        raise ContractViolation(
            f"family range shape {family.range_shape} != ({t}, {n0})"
        )
    s = len(family.functions)
    dps = direct_power_sum(base, s, t, term_budget=term_budget)
    # variable (i, j, k) of the power sum receives sum_{m : pi_i(m) = (j, k)} x_m,
    # so the pulled-back coefficient at m sums the block coefficients at pi_i(m).
    terms = []
    for bt in dps.terms:
        src = bt.form.coefficients
        coeffs = [0] * n
        for m in range(n):
            total: Scalar = 0
            for i, fn in enumerate(family.functions):
                j, k = family.decode(fn[m])
                total += src[_block_index(i, j, k, t, n0)]
            coeffs[m] = total
        terms.append(WaringTerm(bt.weight, LinearForm(tuple(coeffs)), d))
    return WaringDecomposition(n, d, tuple(terms), dps.scale)


def char2_permanent_points(
    rows: Sequence[Sequence[int]], d: int | None = None
) -> list[tuple[int, ...]]:
    """The 2^d - 1 nonzero 0/1 row combinations of a d x n matrix over
    GF(2^m), in mask order.

    Field addition is xor, so signs vanish; summing a multilinear black box
    over these points computes its pairing against the permanent-coefficient
    polynomial of the matrix.
    """
    rows = [tuple(int(x) for x in row) for row in rows]
    if not rows:
        raise DomainError("matrix must have at least one row")
    if d is not None and d != len(rows):
        raise DomainError(f"declared d={d} but matrix has {len(rows)} rows")
    n = len(rows[0])
    if any(len(row) != n for row in rows):
        raise DomainError("ragged matrix")
    for idx, row in enumerate(rows):
        if all(x == 0 for x in row):
            raise DomainError(f"zero row at index {idx}")
    depth = len(rows)
    points: list[tuple[int, ...]] = [(0,) * n]
    for mask in range(1, 2**depth):
        low = (mask & -mask).bit_length() - 1
        prev = points[mask & (mask - 1)]
        points.append(tuple(p ^ r for p, r in zip(prev, rows[low])))
    return points[1:]


@dataclass(frozen=True)
class DecompositionSpec:
    """Which construction produced (or should produce) a decomposition.

    ``parameters`` holds kind-specific extras: ``exponents`` for monomial
    products, ``s``/``t`` for direct power sums.  Family- or base-dependent
    kinds take those objects at build time.
    """

    kind: str
    n: int
    d: int
    parameters: tuple = ()

    def __post_init__(self):
        if self.kind not in DECOMPOSITION_KINDS:
            raise DomainError(f"unknown decomposition kind {self.kind!r}")
        if self.kind in ("ryser", "lee_odd", "lee_even") and not 1 <= self.d <= self.n:
            raise DomainError(f"need n >= d >= 1, got n={self.n}, d={self.d}")
        if self.kind == "lee_odd" and self.d % 2 == 0:
            raise DomainError("lee_odd requires an odd degree")
        if self.kind == "lee_even" and (self.d % 2 or self.n <= self.d):
            raise DomainError("lee_even requires an even degree and n > d")

    def params(self) -> dict:
        return dict(self.parameters)


def build_decomposition(
    spec: DecompositionSpec,
    family: FunctionFamily | None = None,
    base: WaringDecomposition | None = None,
) -> WaringDecomposition:
    """Materialize a decomposition from its spec.

    Self-contained kinds need no extras; colorcoding and the splitter
    compositions need ``family`` (and ``base`` where applicable).
    """
    params = spec.params()
    if spec.kind == "ryser":
        return ryser_elementary(spec.n, spec.d)
    if spec.kind in ("lee_odd", "lee_even"):
        return lee_elementary(spec.n, spec.d)
    if spec.kind == "monomial":
        exponents = tuple(params.get("exponents", (1,) * spec.d))
        if len(exponents) != spec.n or sum(exponents) != spec.d:
            raise DomainError("monomial exponents inconsistent with (n, d)")
        return monomial_product_decomposition(exponents)
    if spec.kind == "colorcoding":
        if family is None:
            raise DomainError("colorcoding needs a function family")
        return colorcoding_decomposition(spec.n, spec.d, family)
    if spec.kind == "splitter_composed":
        if family is None or base is None:
            raise DomainError("splitter composition needs a base and a family")
        return splitter_composed(base, spec.n, family)
    if spec.kind == "direct_power_sum":
        if base is None:
            raise DomainError("direct power sum needs a base decomposition")
        return direct_power_sum(base, int(params["s"]), int(params["t"]))
    # only char2_permanent remains; it has no rational power-sum form
    raise DomainError(
        "char2_permanent yields evaluation points over GF(2^m), not a "
        "rational decomposition; use char2_permanent_points"
    )


def decomposition_to_json(g: WaringDecomposition) -> dict:
    return {
        "nvars": g.nvars,
        "degree": g.degree,
        "scale": str(Fraction(g.scale)),
        "terms": [
            {
                "weight": str(Fraction(t.weight)),
                "coeffs": [str(Fraction(c)) for c in t.form.coefficients],
            }
            for t in g.terms
        ],
    }


def decomposition_from_json(doc: dict) -> WaringDecomposition:
    try:
        nvars = int(doc["nvars"])
        degree = int(doc["degree"])
        scale = Fraction(doc["scale"])
        terms = tuple(
            WaringTerm(
                Fraction(td["weight"]),
                LinearForm(tuple(Fraction(c) for c in td["coeffs"])),
                degree,
            )
            for td in doc["terms"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed decomposition document: {exc}") from exc
    return WaringDecomposition(nvars, degree, terms, scale)
