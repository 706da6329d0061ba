"""End-to-end counting pipelines.

Every pipeline is a pure function of (inputs, seed): randomness comes from
counter-mode streams derived per task, black-box queries are counted, and
each report carries the parameters needed to reproduce the run.  Exact
pipelines must produce integers where integers are expected; a non-integral
intermediate raises ConsistencyError because it can only mean a bug.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    BlackBoxPolynomial,
    Scalar,
    WaringDecomposition,
    apply_operator,
)
from .decomp import (
    char2_permanent_points,
    lee_elementary,
    monomial_product_decomposition,
    ryser_elementary,
    splitter_composed,
)
from .errors import (
    ConsistencyError,
    ContractViolation,
    DomainError,
    SizeBudgetError,
)
from .genpoly import Graph, SetSystem, TreeDecomposition, cycle_poly, hom_poly, partition_poly, prod_poly
from .gf2 import GFBlackBox, cauchy_matrix
from .oracle import count_automorphisms_brute
from .rng import CounterRng
from .splitters import FunctionFamily, injective_probability

CONVENTIONS = ("rooted-directed", "directed-cycles", "undirected-cycles")

DEFAULT_INCLUSION_BUDGET = 20  # 2^n-term pipelines are gated to this n


@dataclass(frozen=True)
class ApproxConfig:
    """Parameters of the randomized multilinear-sum estimator."""

    epsilon: Fraction
    seed: int
    trials: int = 1  # median-of-trials amplification; 1 = single estimate
    collect_samples: bool = False


@dataclass
class CountReport:
    value: Fraction
    queries: int
    method: str
    seed: Optional[int]
    parameters: dict
    elapsed: float = 0.0
    samples: Optional[tuple[Fraction, ...]] = None

    def to_json_dict(self, include_elapsed: bool = False) -> dict:
        doc = {
            "value": str(self.value),
            "queries": self.queries,
            "method": self.method,
            "seed": self.seed,
            "parameters": _jsonable(self.parameters),
        }
        if self.samples is not None:
            doc["samples"] = [str(s) for s in self.samples]
        if include_elapsed:
            doc["elapsed"] = self.elapsed
        return doc


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _exact_divide(value: Fraction, divisor: int, what: str) -> Fraction:
    out = Fraction(value) / divisor
    if out.denominator != 1:
        raise ConsistencyError(f"{what}: {value} is not divisible by {divisor}")
    return out


def _require_integer(value: Fraction, what: str) -> Fraction:
    if Fraction(value).denominator != 1:
        raise ConsistencyError(f"{what}: expected an integer, got {value}")
    return Fraction(value)


def exact_multilinear_sum(f: BlackBoxPolynomial) -> CountReport:
    """Sum of the multilinear coefficients of f, exactly.

    Applies the sign-pattern decomposition when it exists (odd degree, or
    even degree with n > d) and falls back to the product-monomial
    decomposition for the even n == d corner; for odd d this costs exactly
    sum_{i <= floor(d/2)} C(n, i) evaluations.
    """
    d, n = f.degree, f.nvars
    if d > n:
        raise DomainError(f"need degree <= nvars, got d={d}, n={n}")
    if d % 2 == 1 or n > d:
        dec = lee_elementary(n, d)
        kind = "sign-pattern"
    else:
        dec = monomial_product_decomposition((1,) * d)
        kind = "product-monomial"
    start = time.perf_counter()
    before = f.calls
    value = apply_operator(dec, f)
    return CountReport(
        value=value,
        queries=f.calls - before,
        method="exact-multilinear",
        seed=None,
        parameters={"decomposition": kind, "terms": len(dec.terms)},
        elapsed=time.perf_counter() - start,
    )


def count_simple_cycles(g: Graph, d: int, convention: str) -> CountReport:
    """Exact simple-cycle count of length d under the given convention."""
    if convention not in CONVENTIONS:
        raise DomainError(f"unknown convention {convention!r}")
    if convention != "rooted-directed" and d < 3:
        raise DomainError("cycle conventions require d >= 3")
    if d < 1:
        raise DomainError("d must be positive")
    start = time.perf_counter()
    report = exact_multilinear_sum(cycle_poly(g, d))
    rooted = _require_integer(report.value, "rooted cycle count")
    divisor = {"rooted-directed": 1, "directed-cycles": d, "undirected-cycles": 2 * d}[
        convention
    ]
    value = _exact_divide(rooted, divisor, f"{convention} cycle count")
    params = dict(report.parameters)
    params.update({"convention": convention, "rooted": rooted, "d": d})
    return CountReport(
        value=value,
        queries=report.queries,
        method="count-simple-cycles",
        seed=None,
        parameters=params,
        elapsed=time.perf_counter() - start,
    )


def _median(values: Sequence[Fraction]) -> Fraction:
    ordered = sorted(values)
    mid = len(ordered) // 2
    if len(ordered) % 2 == 1:
        return ordered[mid]
    return (ordered[mid - 1] + ordered[mid]) / 2


def approx_multilinear_sum(f: BlackBoxPolynomial, cfg: ApproxConfig) -> CountReport:
    """Randomized (1 +/- epsilon) estimate of the multilinear sum of a
    nonnegative-coefficient black box, correct with probability >= 2/3.

    Collapses the n variables onto n0 = ceil(1.55 d) through M = ceil(3/(eps^2 p))
    independent uniform functions, where p = (n0)_d / n0^d is the chance a
    fixed multilinear monomial survives injectively; each collapsed sum is
    computed exactly through the sign-pattern decomposition, giving an
    unbiased estimator with relative variance at most p M.  Nonnegativity
    of f is the caller's assertion; it cannot be checked through a black box.
    """
    eps = Fraction(cfg.epsilon)
    if not Fraction(0) < eps < Fraction(1):
        raise DomainError("epsilon must lie strictly between 0 and 1")
    if cfg.trials < 1:
        raise DomainError("trials must be >= 1")
    d, n = f.degree, f.nvars
    if d > n:
        raise DomainError(f"need degree <= nvars, got d={d}, n={n}")
    n0 = -((-31 * d) // 20)  # ceil(1.55 d), exactly
    p = injective_probability(n0, d)
    m_functions = math.ceil(Fraction(3) / (eps * eps * p))
    base = lee_elementary(n0, d)

    start = time.perf_counter()
    before = f.calls
    estimates = []
    first_trial_samples: list[Fraction] = []
    for trial in range(cfg.trials):
        total = Fraction(0)
        for i in range(m_functions):
            # one stream per (seed, trial, function): parallel and serial
            # schedules of the M collapsed sums draw identical functions
            fn = CounterRng(cfg.seed, "approx-multilinear", trial, i).function(n, n0)
            family = FunctionFamily(n, n0, (fn,), kind="uniform", seed=cfg.seed)
            collapsed = splitter_composed(base, n, family)
            y = apply_operator(collapsed, f)
            total += y
            if trial == 0 and cfg.collect_samples:
                first_trial_samples.append(y / p)
        estimates.append(total / (p * m_functions))
    value = _median(estimates)
    return CountReport(
        value=value,
        queries=f.calls - before,
        method="approx-multilinear",
        seed=cfg.seed,
        parameters={
            "epsilon": eps,
            "n0": n0,
            "p": p,
            "M": m_functions,
            "trials": cfg.trials,
            "per_function_queries": len(base.terms),
            "max_result_bits": f.max_result_bits,
        },
        elapsed=time.perf_counter() - start,
        samples=tuple(first_trial_samples) if cfg.collect_samples else None,
    )


def count_automorphisms(h: Graph, budget: int = 10) -> int:
    """|Aut(H)| by exhaustive permutation check (gated to small patterns)."""
    return count_automorphisms_brute(h, budget)


def count_subgraphs_approx(
    h: Graph,
    g: Graph,
    td: TreeDecomposition,
    cfg: ApproxConfig,
    aut_budget: int = 10,
    table_budget: int | None = None,
) -> CountReport:
    """Randomized (1 +/- epsilon) estimate of the number of subgraphs of G
    isomorphic to H: the injective-homomorphism estimate divided by |Aut(H)|."""
    start = time.perf_counter()
    if table_budget is None:
        poly = hom_poly(h, g, td)
    else:
        poly = hom_poly(h, g, td, table_budget=table_budget)
    report = approx_multilinear_sum(poly, cfg)
    aut = count_automorphisms(h, aut_budget)
    params = dict(report.parameters)
    params.update({"automorphisms": aut, "pattern_vertices": h.n})
    return CountReport(
        value=report.value / aut,
        queries=report.queries,
        method="count-subgraphs-approx",
        seed=cfg.seed,
        parameters=params,
        elapsed=time.perf_counter() - start,
        samples=tuple(s / aut for s in report.samples) if report.samples else None,
    )


def permanent(
    a: Sequence[Sequence[Scalar]], budget: int = DEFAULT_INCLUSION_BUDGET
) -> CountReport:
    """Permanent by the inclusion-exclusion evaluation of the row-product
    polynomial: sum over 0/1 vectors alpha of (-1)^{|alpha|+n} Prod_A(alpha)."""
    n = len(a)
    if n == 0 or any(len(row) != n for row in a):
        raise DomainError("matrix must be square and nonempty")
    if n > budget:
        raise SizeBudgetError(f"permanent pipeline gated to n <= {budget}, got {n}")
    start = time.perf_counter()
    f = prod_poly(a)
    value = apply_operator(ryser_elementary(n, n), f)
    return CountReport(
        value=value,
        queries=f.calls,
        method="permanent",
        seed=None,
        parameters={"n": n},
        elapsed=time.perf_counter() - start,
    )


def count_hamiltonian(
    g: Graph, convention: str, budget: int = DEFAULT_INCLUSION_BUDGET
) -> CountReport:
    """Hamiltonian cycle count: the inclusion-exclusion sum of trace powers
    sum_alpha (-1)^{|alpha|+n} trace(A(alpha)^n), with convention divisions."""
    if convention not in CONVENTIONS:
        raise DomainError(f"unknown convention {convention!r}")
    n = g.n
    if convention != "rooted-directed" and n < 3:
        raise DomainError("cycle conventions require n >= 3")
    if n > budget:
        raise SizeBudgetError(f"hamiltonian pipeline gated to n <= {budget}, got {n}")
    start = time.perf_counter()
    f = cycle_poly(g, n)
    rooted = _require_integer(
        apply_operator(ryser_elementary(n, n), f), "rooted hamiltonian count"
    )
    divisor = {"rooted-directed": 1, "directed-cycles": n, "undirected-cycles": 2 * n}[
        convention
    ]
    value = _exact_divide(rooted, divisor, f"{convention} hamiltonian count")
    return CountReport(
        value=value,
        queries=f.calls,
        method="count-hamiltonian",
        seed=None,
        parameters={"convention": convention, "rooted": rooted, "n": n},
        elapsed=time.perf_counter() - start,
    )


def count_set_partitions(
    s: SetSystem, budget: int = DEFAULT_INCLUSION_BUDGET
) -> CountReport:
    """Ordered partitions of the ground set into k of the listed sets, by
    inclusion-exclusion over the partition generating polynomial.  The
    unordered count value/k! is reported alongside, with an exactness check."""
    ground = s.ground
    if ground > budget:
        raise SizeBudgetError(
            f"partition pipeline gated to ground <= {budget}, got {ground}"
        )
    start = time.perf_counter()
    f = partition_poly(s)
    ordered = _require_integer(
        apply_operator(ryser_elementary(ground, ground), f), "ordered partition count"
    )
    unordered = _exact_divide(ordered, math.factorial(s.k), "unordered partition count")
    return CountReport(
        value=ordered,
        queries=f.calls,
        method="count-set-partitions",
        seed=None,
        parameters={"k": s.k, "r": s.r, "sets": len(s.sets), "unordered": unordered},
        elapsed=time.perf_counter() - start,
    )


@dataclass(frozen=True)
class DetectionReport:
    detected: bool
    trials_run: int
    queries: int


def detect_multilinear_char2(
    f: GFBlackBox, trials: int = 10, seed: int = 0
) -> DetectionReport:
    """One-sided multilinear-support detection over GF(2^m).

    Per trial: scale each variable by a uniform field element and sum f over
    the 2^d - 1 nonzero row combinations of a fixed Cauchy matrix (all of
    whose minors are nonzero).  The sum equals a degree-d polynomial in the
    scalings whose coefficients are multilinear coefficients of f times
    nonzero minors: identically zero when f has no multilinear monomial,
    and nonzero with probability >= 1/2 per trial otherwise (field size
    >= 2d).  Never reports true on a multilinear-free input.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    field = f.field
    d, n = f.degree, f.nvars
    if field.size < 2 * d:
        raise DomainError(
            f"need |GF(2^m)| >= 2d = {2 * d}, got {field.size}; increase m"
        )
    matrix = cauchy_matrix(field, d, n)
    points = char2_permanent_points(matrix)
    before = f.calls
    for trial in range(trials):
        rng = CounterRng(seed, "char2-detect", trial)
        scaling = [rng.randrange(field.size) for _ in range(n)]
        total = 0
        for point in points:
            scaled = tuple(field.mul(s, c) for s, c in zip(scaling, point))
            total ^= f.eval(scaled)
        if total != 0:
            return DetectionReport(True, trial + 1, f.calls - before)
    return DetectionReport(False, trials, f.calls - before)


def certify_support_intersection(
    g: WaringDecomposition,
    f: BlackBoxPolynomial,
    delta: Fraction,
    seed: int = 0,
    nonneg: bool = False,
) -> bool:
    """Randomized one-sided test of supp(f) and supp(g) intersecting.

    Scales each variable by a uniform element of {1, ..., ceil(d/delta)} and
    applies g to the scaled f; the result is a polynomial in the scalings
    that vanishes identically iff the supports are disjoint, so a nonzero
    answer is certain and a zero answer errs with probability at most delta.
    With nonneg=True (both f and the polynomial of g have nonnegative
    coefficients) the scalings are all 1 and the test is deterministic.
    """
    if g.nvars != f.nvars or g.degree != f.degree:
        raise ContractViolation("shape mismatch between decomposition and black box")
    d, n = g.degree, g.nvars
    if nonneg:
        scaling: tuple[int, ...] = (1,) * n
    else:
        delta = Fraction(delta)
        if not Fraction(0) < delta < Fraction(1):
            raise DomainError("delta must lie strictly between 0 and 1")
        universe = math.ceil(Fraction(d) / delta)
        rng = CounterRng(seed, "certify-support")
        scaling = tuple(rng.randint(1, universe) for _ in range(n))
    total: Scalar = 0
    for t in g.terms:
        point = tuple(s * c for s, c in zip(scaling, t.form.coefficients))
        total += t.weight * f.eval(point)
    value = Fraction(g.scale) * math.factorial(d) * total
    return value != 0
