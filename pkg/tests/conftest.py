"""Shared helpers: deterministic random instances used across the suite."""

from fractions import Fraction

from hypothesis import settings

from waringcount.core import SparsePolynomial
from waringcount.genpoly import Graph
from waringcount.rng import CounterRng

settings.register_profile("suite", derandomize=True, max_examples=40, deadline=None)
settings.load_profile("suite")


def er_graph(n: int, percent: int, seed: int, directed: bool = False) -> Graph:
    """Erdos-Renyi graph with edge probability percent/100, seeded."""
    rng = CounterRng(seed, "er-graph", n, percent, directed)
    pairs = []
    if directed:
        candidates = [(u, v) for u in range(n) for v in range(n) if u != v]
    else:
        candidates = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for u, v in candidates:
        if rng.randrange(100) < percent:
            pairs.append((u, v))
    return Graph.from_edges(n, pairs, directed=directed)


def random_sparse(
    nvars: int, degree: int, seed: int, terms: int = 4, span: int = 5
) -> SparsePolynomial:
    """Random homogeneous polynomial with small rational coefficients."""
    rng = CounterRng(seed, "sparse", nvars, degree, terms)
    table = {}
    for _ in range(terms):
        alpha = [0] * nvars
        for _ in range(degree):
            alpha[rng.randrange(nvars)] += 1
        coeff = Fraction(rng.randint(-span, span), rng.randint(1, 3))
        key = tuple(alpha)
        table[key] = table.get(key, Fraction(0)) + coeff
    return SparsePolynomial(nvars, degree, table)


def random_rational_point(nvars: int, seed: int, span: int = 6):
    rng = CounterRng(seed, "point", nvars)
    return tuple(
        Fraction(rng.randint(-span, span), rng.randint(1, 4)) for _ in range(nvars)
    )


def random_int_point(nvars: int, seed: int, span: int = 5):
    rng = CounterRng(seed, "int-point", nvars)
    return tuple(rng.randint(-span, span) for _ in range(nvars))
