"""Random function families: balanced splitters, perfect hash families,
perfect splitters, and the size lower bound for perfectly balanced families.

Sampling is reproducible: families are drawn from counter-mode streams keyed
by (seed, kind, parameters), so equal parameters and seed give identical
families on any platform.  Verification is exhaustive over subsets and
budget-gated; past the budget a family is accepted on the sampling guarantee
alone and stays flagged unverified.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Optional

from .errors import DomainError, ParseError, SizeBudgetError
from .rng import CounterRng

DEFAULT_VERIFY_BUDGET = 1_000_000
DEFAULT_RETRIES = 20


@dataclass(frozen=True)
class FunctionFamily:
    """A family of functions [n] -> range, stored as value tuples.

    ``range_size`` is the flat range; families used as perfect splitters
    additionally carry ``range_shape = (groups, slots)`` with
    ``range_size == groups * slots`` and values encoding the pair
    ``(value // slots, value % slots)``.
    """

    n: int
    range_size: int
    functions: tuple[tuple[int, ...], ...]
    kind: str = "explicit"
    seed: Optional[int] = None
    range_shape: Optional[tuple[int, int]] = None
    balance_constant: Optional[Fraction] = None
    verified: bool = False

    def __post_init__(self):
        if self.n < 1 or self.range_size < 1:
            raise DomainError("family needs n >= 1 and a nonempty range")
        if not self.functions:
            raise DomainError("family must contain at least one function")
        if self.range_shape is not None:
            groups, slots = self.range_shape
            if groups * slots != self.range_size:
                raise DomainError("range_shape inconsistent with range_size")
        functions = []
        for fn in self.functions:
            fn = tuple(int(v) for v in fn)
            if len(fn) != self.n:
                raise DomainError(f"function of length {len(fn)}, expected {self.n}")
            if any(not 0 <= v < self.range_size for v in fn):
                raise DomainError("function value outside declared range")
            functions.append(fn)
        object.__setattr__(self, "functions", tuple(functions))

    def __len__(self) -> int:
        return len(self.functions)

    def decode(self, value: int) -> tuple[int, int]:
        """Split a flat value into its (group, slot) pair."""
        if self.range_shape is None:
            raise DomainError("family has a flat range; nothing to decode")
        _, slots = self.range_shape
        return divmod(value, slots)


def identity_family(n: int) -> FunctionFamily:
    return FunctionFamily(n, n, (tuple(range(n)),), kind="identity")


def all_bijections_family(n: int) -> FunctionFamily:
    """Every bijection [n] -> [n]; perfectly balanced with ratio 1."""
    fns = tuple(tuple(p) for p in permutations(range(n)))
    return FunctionFamily(n, n, fns, kind="all-bijections")


def all_functions_family(n: int, l: int) -> FunctionFamily:
    """Every function [n] -> [l]; perfectly balanced by symmetry."""
    fns = []

    def rec(prefix):
        if len(prefix) == n:
            fns.append(tuple(prefix))
            return
        for v in range(l):
            rec(prefix + [v])

    rec([])
    return FunctionFamily(n, l, tuple(fns), kind="all-functions")


@dataclass(frozen=True)
class SplitterSpec:
    n: int
    k: int
    l: int
    delta: Fraction


@dataclass(frozen=True)
class BalanceReport:
    ok: bool
    c: Fraction
    worst_ratio: Optional[Fraction]
    min_count: int
    max_count: int
    mean_count: Fraction


def injective_probability(l: int, k: int) -> Fraction:
    """p = (l)_k / l^k: chance a uniform function [k] -> [l] is injective."""
    if not 1 <= k <= l:
        raise DomainError(f"need 1 <= k <= l, got k={k}, l={l}")
    falling = 1
    for i in range(k):
        falling *= l - i
    return Fraction(falling, l**k)


def balanced_splitter_size(n: int, k: int, l: int, delta: Fraction) -> int:
    """M = ceil(8 (k ln n + 1) / (p (delta-1)^2)), the sampled family size."""
    delta = Fraction(delta)
    if not Fraction(1) < delta <= Fraction(2):
        raise DomainError("delta must satisfy 1 < delta <= 2")
    if k > l:
        raise DomainError(f"need k <= l, got k={k}, l={l}")
    if n < k:
        raise DomainError(f"need n >= k, got n={n}, k={k}")
    p = injective_probability(l, k)
    numerator = 8.0 * (k * math.log(n) + 1.0)
    denominator = float(p * (delta - 1) ** 2)
    return math.ceil(numerator / denominator)


def sample_balanced_splitter(
    spec: SplitterSpec, seed: int, salt: int = 0
) -> FunctionFamily:
    """Draw the formula-sized family of independent uniform functions."""
    size = balanced_splitter_size(spec.n, spec.k, spec.l, spec.delta)
    rng = CounterRng(seed, "balanced-splitter", spec.n, spec.k, spec.l, str(Fraction(spec.delta)), salt)
    fns = tuple(rng.function(spec.n, spec.l) for _ in range(size))
    return FunctionFamily(
        spec.n, spec.l, fns, kind="balanced-splitter", seed=seed
    )


def verify_balanced(
    family: FunctionFamily,
    k: int,
    delta: Fraction,
    budget: int = DEFAULT_VERIFY_BUDGET,
) -> BalanceReport:
    """Exhaustively count injective hits per k-subset.

    ok means every subset is hit and max/min <= delta^2.  c is the midpoint
    (max+min)/2; the mean count is also reported since it is the natural
    normalizer for compositions built on the family.
    """
    delta = Fraction(delta)
    n = family.n
    subsets = math.comb(n, k)
    if subsets > budget:
        raise SizeBudgetError(f"C({n},{k}) = {subsets} exceeds budget {budget}")
    lo = hi = None
    total = 0
    for subset in combinations(range(n), k):
        count = 0
        for fn in family.functions:
            if len({fn[i] for i in subset}) == k:
                count += 1
        total += count
        lo = count if lo is None else min(lo, count)
        hi = count if hi is None else max(hi, count)
    ok = lo is not None and lo > 0 and Fraction(hi, lo) <= delta * delta
    worst = Fraction(hi, lo) if lo else None
    return BalanceReport(
        ok=ok,
        c=Fraction(hi + lo, 2),
        worst_ratio=worst,
        min_count=lo,
        max_count=hi,
        mean_count=Fraction(total, subsets),
    )


def sample_verified_balanced(
    spec: SplitterSpec,
    seed: int,
    retries: int = DEFAULT_RETRIES,
    budget: int = DEFAULT_VERIFY_BUDGET,
) -> tuple[FunctionFamily, BalanceReport]:
    """Sample-and-verify loop; resamples with a fresh salt on failure."""
    for attempt in range(retries):
        family = sample_balanced_splitter(spec, seed, salt=attempt)
        report = verify_balanced(family, spec.k, spec.delta, budget=budget)
        if report.ok:
            family = dataclasses.replace(
                family, balance_constant=report.c, verified=True
            )
            return family, report
    raise DomainError(
        f"no verified balanced splitter after {retries} attempts for {spec}"
    )


def perfect_splitter_size(n: int, d: int, n0: int, d0: int) -> int:
    """sigma(n, d, n0, d0): the union-bound size for sampled perfect splitters."""
    _check_perfect_params(n, d, n0, d0)
    t = d // d0
    rational = (
        Fraction(n0**d0) / _falling(n0, d0)
    ) ** t * Fraction(math.factorial(d0) ** t * t**d, math.factorial(d))
    return math.ceil(float(rational) * d * math.log(n))


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def _check_perfect_params(n: int, d: int, n0: int, d0: int) -> None:
    if d0 < 1 or d < 1:
        raise DomainError("degrees must be positive")
    if d % d0 != 0:
        raise DomainError(f"d0 = {d0} must divide d = {d}")
    if n0 < d0:
        raise DomainError(f"need n0 >= d0, got n0={n0}, d0={d0}")
    if n < d:
        raise DomainError(f"need n >= d, got n={n}, d={d}")


def sample_perfect_splitter(
    n: int, d: int, n0: int, d0: int, seed: int, salt: int = 0
) -> FunctionFamily:
    """sigma-many independent uniform functions [n] -> [d/d0] x [n0]."""
    size = perfect_splitter_size(n, d, n0, d0)
    t = d // d0
    rng = CounterRng(seed, "perfect-splitter", n, d, n0, d0, salt)
    fns = tuple(rng.function(n, t * n0) for _ in range(size))
    return FunctionFamily(
        n,
        t * n0,
        fns,
        kind="perfect-splitter",
        seed=seed,
        range_shape=(t, n0),
    )


def verify_perfect(
    family: FunctionFamily,
    d: int,
    d0: int,
    budget: int = DEFAULT_VERIFY_BUDGET,
) -> bool:
    """True iff every d-subset is split evenly by group with distinct slots.

    A function splits S when each of the d/d0 groups receives exactly d0
    elements of S and no two elements of a group share a slot.
    """
    if family.range_shape is None:
        raise DomainError("perfect-splitter verification needs a product range")
    t, _ = family.range_shape
    if d0 * t != d:
        raise DomainError(
            f"family groups {t} inconsistent with d={d}, d0={d0}"
        )
    n = family.n
    subsets = math.comb(n, d)
    if subsets > budget:
        raise SizeBudgetError(f"C({n},{d}) = {subsets} exceeds budget {budget}")
    for subset in combinations(range(n), d):
        if not any(_splits_evenly(family, fn, subset, d0) for fn in family.functions):
            return False
    return True


def _splits_evenly(
    family: FunctionFamily, fn: tuple[int, ...], subset: tuple[int, ...], d0: int
) -> bool:
    groups: dict[int, set[int]] = {}
    for m in subset:
        g, slot = family.decode(fn[m])
        slots = groups.setdefault(g, set())
        if slot in slots:
            return False
        slots.add(slot)
        if len(slots) > d0:
            return False
    t, _ = family.range_shape
    return len(groups) == t and all(len(s) == d0 for s in groups.values())


def sample_verified_perfect(
    n: int,
    d: int,
    n0: int,
    d0: int,
    seed: int,
    retries: int = DEFAULT_RETRIES,
    budget: int = DEFAULT_VERIFY_BUDGET,
) -> FunctionFamily:
    for attempt in range(retries):
        family = sample_perfect_splitter(n, d, n0, d0, seed, salt=attempt)
        if verify_perfect(family, d, d0, budget=budget):
            return dataclasses.replace(family, verified=True)
    raise DomainError(
        f"no verified perfect splitter after {retries} attempts "
        f"for (n={n}, d={d}, n0={n0}, d0={d0})"
    )


def hash_family_lower_bound(n: int, k: int, l: int) -> Fraction:
    """Minimum size of a perfectly-k-balanced hash family [n] -> [l]."""
    if not (n > l >= k > 0):
        raise DomainError(f"need n > l >= k > 0, got n={n}, l={l}, k={k}")
    half = k // 2
    denominator = sum(math.comb(l, i) for i in range(half + 1))
    if k % 2 == 1:
        numerator = sum(math.comb(n, i) for i in range(half + 1))
    else:
        numerator = sum(math.comb(n, i) for i in range(half + 1)) - math.comb(
            n - 1, half
        )
    return Fraction(numerator, denominator)


def family_to_json(family: FunctionFamily) -> dict:
    doc = {
        "n": family.n,
        "range": list(family.range_shape) if family.range_shape else family.range_size,
        "seed": family.seed,
        "kind": family.kind,
        "functions": [list(fn) for fn in family.functions],
        "verified": family.verified,
    }
    if family.balance_constant is not None:
        doc["c"] = str(family.balance_constant)
    return doc


def family_from_json(doc: dict) -> FunctionFamily:
    try:
        rng_field = doc["range"]
        if isinstance(rng_field, list):
            shape = (int(rng_field[0]), int(rng_field[1]))
            size = shape[0] * shape[1]
        else:
            shape = None
            size = int(rng_field)
        return FunctionFamily(
            n=int(doc["n"]),
            range_size=size,
            functions=tuple(tuple(fn) for fn in doc["functions"]),
            kind=str(doc.get("kind", "explicit")),
            seed=doc.get("seed"),
            range_shape=shape,
            balance_constant=(
                Fraction(doc["c"]) if doc.get("c") is not None else None
            ),
            verified=bool(doc.get("verified", False)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed function-family document: {exc}") from exc
