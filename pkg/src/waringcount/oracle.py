"""Brute-force counting baselines and exact algebraic audits.

The enumeration counters are deliberately naive; they are the independent
oracles all pipelines are checked against, so they share no code with the
decomposition path.  Rank certificates are computed by fraction-free
Bareiss elimination over exact integers (rows are cleared of denominators
first); no floating point is involved anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Sequence

from .core import (
    SparsePolynomial,
    WaringDecomposition,
    expand,
    exponent_vectors,
)
from .errors import ContractViolation, DomainError, SizeBudgetError
from .genpoly import Graph, SetSystem

DEFAULT_ENUM_BUDGET = 10


# ---------------------------------------------------------------------------
# enumeration oracles


def count_cycles_brute(g: Graph, d: int, convention: str = "rooted-directed") -> int:
    """Count length-d closed walks with distinct vertices by DFS.

    Enumerates each directed cycle once (smallest vertex first), then
    converts: rooted-directed multiplies by d, undirected-cycles halves the
    directed count.
    """
    if d < 1:
        raise DomainError("cycle length must be positive")
    n = g.n
    neighbors = [g.out_neighbors(u) for u in range(n)]
    directed = 0

    def walk(start: int, current: int, visited: set, depth: int):
        nonlocal directed
        if depth == d:
            if g.has_edge(current, start):
                directed += 1
            return
        for w in neighbors[current]:
            if w > start and w not in visited:
                visited.add(w)
                walk(start, w, visited, depth + 1)
                visited.discard(w)

    for start in range(n):
        if d == 1:
            if g.has_edge(start, start):
                directed += 1
            continue
        walk(start, start, {start}, 1)

    if convention == "directed-cycles":
        return directed
    if convention == "rooted-directed":
        return directed * d
    if convention == "undirected-cycles":
        if directed % 2:
            raise DomainError(
                "odd directed count; the graph is not undirected"
            )
        return directed // 2
    raise DomainError(f"unknown convention {convention!r}")


def count_hamiltonian_brute(g: Graph, convention: str = "rooted-directed") -> int:
    return count_cycles_brute(g, g.n, convention)


def closed_walk_sum(g: Graph, d: int, point: Sequence) -> object:
    """Sum over rooted closed walks of the product of visited-vertex values.

    Independent check of the trace identity: walks may repeat vertices.
    """
    n = g.n
    neighbors = [g.out_neighbors(u) for u in range(n)]
    total = 0

    def walk(start: int, current: int, depth: int, prod):
        nonlocal total
        if depth == d:
            if g.has_edge(current, start):
                total += prod
            return
        for w in neighbors[current]:
            walk(start, w, depth + 1, prod * point[w])

    for start in range(n):
        if d == 1:
            if g.has_edge(start, start):
                total += point[start]
            continue
        walk(start, start, 1, point[start])
    return total


def count_homomorphisms_brute(h: Graph, g: Graph) -> int:
    """All maps V(H) -> V(G) preserving every stored edge pair."""
    edges = sorted(h.edges)
    n = g.n

    def extend(assignment: list) -> int:
        idx = len(assignment)
        if idx == h.n:
            return 1
        count = 0
        for image in range(n):
            ok = True
            for u, v in edges:
                if u == idx and v < idx and not g.has_edge(image, assignment[v]):
                    ok = False
                    break
                if v == idx and u < idx and not g.has_edge(assignment[u], image):
                    ok = False
                    break
                if u == idx and v == idx and not g.has_edge(image, image):
                    ok = False
                    break
            if ok:
                assignment.append(image)
                count += extend(assignment)
                assignment.pop()
        return count

    return extend([])


def homomorphism_weight_sum_brute(h: Graph, g: Graph, point: Sequence) -> object:
    """Sum over all homomorphisms of the product of image-vertex values.

    Independent oracle for the tree-decomposition DP: plain enumeration of
    maps with edge checks against already-assigned endpoints.
    """
    edges = sorted(h.edges)

    def extend(assignment: list) -> object:
        idx = len(assignment)
        if idx == h.n:
            prod = 1
            for image in assignment:
                prod *= point[image]
            return prod
        total = 0
        for image in range(g.n):
            ok = True
            for u, v in edges:
                if u == idx and v < idx and not g.has_edge(image, assignment[v]):
                    ok = False
                    break
                if v == idx and u < idx and not g.has_edge(assignment[u], image):
                    ok = False
                    break
            if ok:
                assignment.append(image)
                total += extend(assignment)
                assignment.pop()
        return total

    return extend([])


def count_injective_homomorphisms_brute(h: Graph, g: Graph) -> int:
    edges = sorted(h.edges)

    def extend(assignment: list, used: set) -> int:
        idx = len(assignment)
        if idx == h.n:
            return 1
        count = 0
        for image in range(g.n):
            if image in used:
                continue
            ok = True
            for u, v in edges:
                if u == idx and v < idx and not g.has_edge(image, assignment[v]):
                    ok = False
                    break
                if v == idx and u < idx and not g.has_edge(assignment[u], image):
                    ok = False
                    break
            if ok:
                assignment.append(image)
                used.add(image)
                count += extend(assignment, used)
                assignment.pop()
                used.discard(image)
        return count

    return extend([], set())


def count_automorphisms_brute(h: Graph, budget: int = DEFAULT_ENUM_BUDGET) -> int:
    if h.n > budget:
        raise SizeBudgetError(
            f"automorphism enumeration gated to {budget} vertices, got {h.n}"
        )
    count = 0
    for perm in permutations(range(h.n)):
        if all(((perm[u], perm[v]) in h.edges) == ((u, v) in h.edges)
               for u in range(h.n) for v in range(h.n) if u != v):
            count += 1
    return count


def count_subgraphs_brute(h: Graph, g: Graph) -> int:
    """Subgraph copies of H in G: injective homomorphisms / |Aut(H)|."""
    inj = count_injective_homomorphisms_brute(h, g)
    aut = count_automorphisms_brute(h)
    if inj % aut:
        raise ContractViolation("injective homomorphism count not divisible by |Aut|")
    return inj // aut


def permanent_brute(a: Sequence[Sequence], budget: int = DEFAULT_ENUM_BUDGET) -> Fraction:
    n = len(a)
    if n > budget:
        raise SizeBudgetError(f"permanent enumeration gated to {budget}, got {n}")
    if any(len(row) != n for row in a):
        raise DomainError("matrix must be square")
    total = Fraction(0)
    for perm in permutations(range(n)):
        prod = Fraction(1)
        for i, j in enumerate(perm):
            prod *= a[i][j]
            if prod == 0:
                break
        total += prod
    return total


def count_partitions_brute(s: SetSystem) -> int:
    """Ordered partitions of the ground set into k of the listed sets."""
    ground = frozenset(range(s.ground))

    def extend(chosen: list, covered: frozenset) -> int:
        if len(chosen) == s.k:
            return 1 if covered == ground else 0
        count = 0
        for block in s.sets:
            if block & covered:
                continue
            count += extend(chosen + [block], covered | block)
        return count

    return extend([], frozenset())


def enumerate_count(problem: str, **kwargs) -> int | Fraction:
    """Dispatch by problem name; used by the CLI audit surface."""
    table = {
        "cycles": lambda: count_cycles_brute(
            kwargs["graph"], kwargs["d"], kwargs.get("convention", "rooted-directed")
        ),
        "subgraphs": lambda: count_subgraphs_brute(kwargs["pattern"], kwargs["graph"]),
        "hamiltonian": lambda: count_hamiltonian_brute(
            kwargs["graph"], kwargs.get("convention", "rooted-directed")
        ),
        "permanent": lambda: permanent_brute(kwargs["matrix"]),
        "homomorphisms": lambda: count_homomorphisms_brute(
            kwargs["pattern"], kwargs["graph"]
        ),
        "partitions": lambda: count_partitions_brute(kwargs["sets"]),
    }
    if problem not in table:
        raise DomainError(f"unknown enumeration problem {problem!r}")
    return table[problem]()


# ---------------------------------------------------------------------------
# exact linear algebra


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        denom = 1
        for x in row:
            denom = denom * Fraction(x).denominator // math.gcd(
                denom, Fraction(x).denominator
            )
        out.append([int(Fraction(x) * denom) for x in row])
    return out


def matrix_rank_exact(rows: Sequence[Sequence]) -> int:
    """Rank by fraction-free Bareiss elimination on denominator-cleared rows."""
    m = _integer_rows(rows)
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(ncols):
        pivot_row = next((r for r in range(row, nrows) if m[r][col] != 0), None)
        if pivot_row is None:
            continue
        m[row], m[pivot_row] = m[pivot_row], m[row]
        pivot = m[row][col]
        for r in range(row + 1, nrows):
            factor = m[r][col]
            for c in range(col, ncols):
                m[r][c] = (m[r][c] * pivot - factor * m[row][c]) // prev
        prev = pivot
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


def determinant_exact(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by Bareiss elimination; exact for rational entries."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DomainError("determinant needs a square matrix")
    if n == 0:
        return Fraction(1)
    denominator = Fraction(1)
    m = []
    for row in rows:
        denom = 1
        for x in row:
            denom = denom * Fraction(x).denominator // math.gcd(
                denom, Fraction(x).denominator
            )
        denominator *= denom
        m.append([int(Fraction(x) * denom) for x in row])
    sign = 1
    prev = 1
    for col in range(n - 1):
        pivot_row = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            sign = -sign
        pivot = m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col]
            for c in range(col, n):
                m[r][c] = (m[r][c] * pivot - factor * m[col][c]) // prev
        prev = pivot
    return Fraction(sign * m[n - 1][n - 1]) / denominator


# ---------------------------------------------------------------------------
# catalecticants


@dataclass(frozen=True)
class CatalecticantMatrix:
    """Matrix of the map (degree-u form) -> (its derivative action on g).

    Rows are indexed by degree-v monomials, columns by degree-u monomials;
    the entry at (beta, alpha) is the coefficient of x^beta in the alpha
    derivative of g, i.e. c_{alpha+beta} (alpha+beta)! / beta!.
    """

    u: int
    v: int
    row_monomials: tuple
    col_monomials: tuple
    entries: tuple

    def rank(self) -> int:
        return matrix_rank_exact(self.entries)


def catalecticant(
    g: SparsePolynomial, u: int, v: int, size_budget: int = 4_000_000
) -> CatalecticantMatrix:
    if u < 0 or v < 0 or u + v != g.degree:
        raise DomainError(f"need u + v = degree, got u={u}, v={v}, degree={g.degree}")
    n = g.nvars
    cols = tuple(exponent_vectors(n, u))
    rows = tuple(exponent_vectors(n, v))
    if len(cols) * len(rows) > size_budget:
        raise SizeBudgetError(
            f"catalecticant of size {len(rows)}x{len(cols)} exceeds budget"
        )
    entries = []
    for beta in rows:
        row = []
        for alpha in cols:
            gamma = tuple(a + b for a, b in zip(alpha, beta))
            c = g.coefficient(gamma)
            if c == 0:
                row.append(Fraction(0))
            else:
                ratio = 1
                for a, b in zip(alpha, beta):
                    ratio *= math.factorial(a + b) // math.factorial(b)
                row.append(Fraction(c) * ratio)
        entries.append(tuple(row))
    return CatalecticantMatrix(u, v, rows, cols, tuple(entries))


def rank_lower_bound_check(g: SparsePolynomial, decomp: WaringDecomposition) -> bool:
    """Audit: every catalecticant rank of g is at most the term count.

    A failure would prove the decomposition cannot expand to g, so the
    expansion is checked first and a mismatch raises.
    """
    if expand(decomp) != g:
        raise ContractViolation("decomposition does not expand to the given polynomial")
    terms = len(decomp.terms)
    d = g.degree
    for u in range(d + 1):
        if catalecticant(g, u, d - u).rank() > terms:
            return False
    return True


# ---------------------------------------------------------------------------
# Hankel / Vandermonde instruments


def hankel_support_polynomial(
    n: int, d: int, nodes: Sequence, subset_budget: int = 1_000_000
) -> SparsePolynomial:
    """Sum of squared d x d Vandermonde minors: an explicit polynomial
    supported on exactly the degree-d multilinear monomials with all
    coefficients strictly positive."""
    nodes = [Fraction(x) for x in nodes]
    if len(nodes) != n:
        raise DomainError(f"need {n} nodes, got {len(nodes)}")
    if len(set(nodes)) != n:
        raise DomainError("nodes must be pairwise distinct")
    if not 1 <= d <= n:
        raise DomainError(f"need 1 <= d <= n, got d={d}, n={n}")
    if math.comb(n, d) > subset_budget:
        raise SizeBudgetError(f"C({n},{d}) exceeds budget {subset_budget}")
    columns = [[node**j for j in range(d)] for node in nodes]
    table = {}
    for subset in combinations(range(n), d):
        minor = determinant_exact([[columns[i][j] for i in subset] for j in range(d)])
        alpha = [0] * n
        for i in subset:
            alpha[i] = 1
        table[tuple(alpha)] = minor * minor
    return SparsePolynomial(n, d, table)


def hankel_polynomial(d: int) -> SparsePolynomial:
    """Determinant of the symbolic d x d Hankel matrix, on 2d-1 variables.

    Entry (i, j) is the variable x_{i+j} (0-based), so the determinant is a
    degree-d polynomial in x_0 .. x_{2d-2}.
    """
    if d < 1:
        raise DomainError("d must be positive")
    nvars = 2 * d - 1
    table: dict[tuple, int] = {}
    for perm in permutations(range(d)):
        sign = _permutation_sign(perm)
        alpha = [0] * nvars
        for i, j in enumerate(perm):
            alpha[i + j] += 1
        key = tuple(alpha)
        table[key] = table.get(key, 0) + sign
    return SparsePolynomial(nvars, d, table)


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def hankel_catalecticant_bound_check(d: int) -> bool:
    """Check rank(Cat(u, v)) <= C(2v+u, u) for the Hankel determinant,
    over all u <= v with u + v = d."""
    if d < 1:
        raise DomainError("d must be positive")
    if d > 4:
        raise SizeBudgetError("Hankel audit gated to d <= 4")
    h = hankel_polynomial(d)
    for u in range(d // 2 + 1):
        v = d - u
        if catalecticant(h, u, v).rank() > math.comb(2 * v + u, u):
            return False
    return True
