"""Black-box generating polynomials whose multilinear coefficients encode
counting problems.

All evaluation paths are exact.  Integer points go through checked-bound
int64 numpy or big-int arithmetic; rational points through Fractions.  Each
polynomial is homogeneous of its declared degree (spot-testable with
``core.homogeneity_probe``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .core import BlackBoxPolynomial, Scalar, SparsePolynomial
from .errors import DomainError, SizeBudgetError

DEFAULT_TABLE_BUDGET = 50_000_000


@dataclass(frozen=True)
class Graph:
    """Directed or undirected graph on vertices 0..n-1.

    Undirected graphs store both orientations of every edge, so the edge
    set is always a set of ordered pairs.
    """

    n: int
    directed: bool
    edges: frozenset

    @classmethod
    def from_edges(
        cls,
        n: int,
        pairs: Iterable[tuple[int, int]],
        directed: bool = False,
        allow_loops: bool = False,
    ) -> "Graph":
        if n < 1:
            raise DomainError("graph needs at least one vertex")
        es = set()
        for u, v in pairs:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v and not allow_loops:
                raise DomainError(f"self-loop at {u} not allowed")
            es.add((u, v))
            if not directed:
                es.add((v, u))
        return cls(n, directed, frozenset(es))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def out_neighbors(self, u: int) -> list[int]:
        return sorted(v for (a, v) in self.edges if a == u)

    def undirected_pairs(self) -> list[tuple[int, int]]:
        return sorted({(min(u, v), max(u, v)) for (u, v) in self.edges})

    def adjacency_matrix(self) -> list[list[int]]:
        mat = [[0] * self.n for _ in range(self.n)]
        for u, v in self.edges:
            mat[u][v] = 1
        return mat


@dataclass(frozen=True)
class TreeDecomposition:
    """A bag tree over a pattern graph: bags of vertices plus tree edges."""

    bags: tuple[frozenset, ...]
    tree: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "bags", tuple(frozenset(int(v) for v in b) for b in self.bags)
        )
        object.__setattr__(
            self, "tree", tuple((int(a), int(b)) for a, b in self.tree)
        )

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def validate(self, h: Graph) -> list[str]:
        """Return the list of violated tree-decomposition properties."""
        problems = []
        nb = len(self.bags)
        if nb == 0:
            return ["decomposition has no bags"]
        for a, b in self.tree:
            if not (0 <= a < nb and 0 <= b < nb):
                return [f"tree edge ({a}, {b}) references a missing bag"]
        # the bag tree must be a tree: connected with nb-1 edges
        adjacency = {i: set() for i in range(nb)}
        for a, b in self.tree:
            adjacency[a].add(b)
            adjacency[b].add(a)
        seen = {0}
        stack = [0]
        while stack:
            cur = stack.pop()
            for nxt in adjacency[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if len(seen) != nb:
            problems.append("bag tree is not connected")
        if len(self.tree) != nb - 1:
            problems.append(
                f"bag tree has {len(self.tree)} edges, expected {nb - 1}"
            )
        covered = set().union(*self.bags) if self.bags else set()
        for v in range(h.n):
            if v not in covered:
                problems.append(f"vertex {v} appears in no bag")
        for bag in self.bags:
            for v in bag:
                if not 0 <= v < h.n:
                    problems.append(f"bag vertex {v} outside the pattern")
        for u, v in h.undirected_pairs():
            if not any(u in bag and v in bag for bag in self.bags):
                problems.append(f"edge ({u}, {v}) is inside no bag")
        # bags containing any fixed vertex must form a connected subtree
        if "bag tree is not connected" not in problems and len(self.tree) == nb - 1:
            for v in range(h.n):
                holding = [i for i, bag in enumerate(self.bags) if v in bag]
                if len(holding) <= 1:
                    continue
                member = set(holding)
                seen_v = {holding[0]}
                stack = [holding[0]]
                while stack:
                    cur = stack.pop()
                    for nxt in adjacency[cur]:
                        if nxt in member and nxt not in seen_v:
                            seen_v.add(nxt)
                            stack.append(nxt)
                if len(seen_v) != len(holding):
                    problems.append(f"bags containing vertex {v} are disconnected")
        return problems

    def require_valid(self, h: Graph) -> None:
        problems = self.validate(h)
        if problems:
            raise DomainError(
                "invalid tree decomposition: " + "; ".join(problems)
            )


def path_decomposition(n: int) -> TreeDecomposition:
    """Width-1 decomposition of the n-vertex path 0-1-...-(n-1)."""
    if n == 1:
        return TreeDecomposition((frozenset({0}),), ())
    bags = tuple(frozenset({i, i + 1}) for i in range(n - 1))
    tree = tuple((i, i + 1) for i in range(n - 2))
    return TreeDecomposition(bags, tree)


def cycle_decomposition(n: int) -> TreeDecomposition:
    """Width-2 decomposition of the n-cycle: bags {0, i, i+1}."""
    if n < 3:
        raise DomainError("cycle needs at least 3 vertices")
    bags = tuple(frozenset({0, i, i + 1}) for i in range(1, n - 1))
    tree = tuple((i, i + 1) for i in range(len(bags) - 1))
    return TreeDecomposition(bags, tree)


def tree_pattern_decomposition(h: Graph) -> TreeDecomposition:
    """Width-1 decomposition of a tree pattern (one bag per edge)."""
    pairs = h.undirected_pairs()
    if len(pairs) != h.n - 1:
        raise DomainError("pattern is not a tree (wrong edge count)")
    if h.n == 1:
        return TreeDecomposition((frozenset({0}),), ())
    bags = tuple(frozenset({u, v}) for u, v in pairs)
    edge_of = {}
    for idx, (u, v) in enumerate(pairs):
        edge_of.setdefault(u, []).append(idx)
        edge_of.setdefault(v, []).append(idx)
    tree = []
    seen = {0}
    stack = [0]
    while stack:
        cur = stack.pop()
        u, v = pairs[cur]
        for w in (u, v):
            for nxt in edge_of[w]:
                if nxt not in seen:
                    seen.add(nxt)
                    tree.append((cur, nxt))
                    stack.append(nxt)
    if len(seen) != len(bags):
        raise DomainError("pattern is not a tree (disconnected)")
    td = TreeDecomposition(bags, tuple(tree))
    td.require_valid(h)
    return td


def exhaustive_decomposition(h: Graph, max_vertices: int = 10) -> TreeDecomposition:
    """Minimum-width decomposition by dynamic programming over vertex subsets.

    Finds an optimal elimination order (the classic 2^n subset recurrence),
    then builds bags by simulating the elimination.  Exponential; gated to
    small patterns.
    """
    n = h.n
    if n > max_vertices:
        raise SizeBudgetError(
            f"exhaustive decomposition gated to {max_vertices} vertices, got {n}"
        )
    neighbor_mask = [0] * n
    for u, v in h.undirected_pairs():
        neighbor_mask[u] |= 1 << v
        neighbor_mask[v] |= 1 << u

    def reach_degree(v: int, eliminated: int) -> int:
        # vertices outside `eliminated` reachable from v through eliminated ones
        seen = 1 << v
        stack = [v]
        out = 0
        while stack:
            cur = stack.pop()
            for w in range(n):
                bit = 1 << w
                if neighbor_mask[cur] & bit and not seen & bit:
                    seen |= bit
                    if eliminated & bit:
                        stack.append(w)
                    else:
                        out |= bit
        return out.bit_count()

    full = (1 << n) - 1
    cost = [0] * (full + 1)
    pick = [0] * (full + 1)
    for mask in range(1, full + 1):
        best, best_v = None, -1
        rest = mask
        while rest:
            vbit = rest & -rest
            rest ^= vbit
            v = vbit.bit_length() - 1
            cand = max(cost[mask ^ vbit], reach_degree(v, mask ^ vbit))
            if best is None or cand < best:
                best, best_v = cand, v
        cost[mask] = best
        pick[mask] = best_v

    order = []
    mask = full
    while mask:
        v = pick[mask]
        order.append(v)
        mask ^= 1 << v
    order.reverse()  # pick[mask] is the vertex eliminated last within mask

    # simulate elimination along `order`, collecting one bag per vertex
    fill = [set() for _ in range(n)]
    for u, v in h.undirected_pairs():
        fill[u].add(v)
        fill[v].add(u)
    position = {v: i for i, v in enumerate(order)}
    bags = []
    parents_hint = []
    alive = set(range(n))
    for v in order:
        nbrs = {w for w in fill[v] if w in alive and w != v}
        bags.append(frozenset({v} | nbrs))
        parents_hint.append(min(nbrs, key=lambda w: position[w]) if nbrs else None)
        for a in nbrs:
            for b in nbrs:
                if a != b:
                    fill[a].add(b)
        alive.discard(v)
    tree = []
    for i, hint in enumerate(parents_hint):
        if hint is not None:
            tree.append((i, position[hint]))
        elif i + 1 < len(bags):
            tree.append((i, i + 1))
    td = TreeDecomposition(tuple(bags), tuple(tree))
    td.require_valid(h)
    return td


@dataclass(frozen=True)
class SetSystem:
    """m equal-size sets over the ground set [k*r]; k is the part count."""

    k: int
    sets: tuple[frozenset, ...]

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("part count k must be positive")
        if not self.sets:
            raise DomainError("set system must contain at least one set")
        normalized = tuple(frozenset(int(i) for i in s) for s in self.sets)
        object.__setattr__(self, "sets", normalized)
        r = len(normalized[0])
        if r < 1:
            raise DomainError("sets must be nonempty")
        if any(len(s) != r for s in normalized):
            raise DomainError("all sets must have equal size")
        ground = self.k * r
        for s in normalized:
            for i in s:
                if not 0 <= i < ground:
                    raise DomainError(f"element {i} outside ground set of size {ground}")

    @property
    def r(self) -> int:
        return len(self.sets[0])

    @property
    def ground(self) -> int:
        return self.k * self.r


def _all_integral(point: tuple) -> bool:
    for x in point:
        if isinstance(x, int):
            continue
        if isinstance(x, Fraction) and x.denominator == 1:
            continue
        return False
    return True


def cycle_poly(g: Graph, d: int) -> BlackBoxPolynomial:
    """Closed-walk generating polynomial: eval(v) = trace(M^d) where
    M[i][j] = v_i exactly when (i, j) is an edge."""
    if d < 1:
        raise DomainError("walk length d must be positive")
    n = g.n
    adj64 = np.zeros((n, n), dtype=np.int64)
    for u, v in g.edges:
        adj64[u, v] = 1
    adj_rows = [[1 if (u, v) in g.edges else 0 for v in range(n)] for u in range(n)]

    def trace_power_exact(point: tuple) -> Scalar:
        mat = [
            [point[u] if adj_rows[u][v] else 0 for v in range(n)] for u in range(n)
        ]
        power = mat
        for _ in range(d - 1):
            power = [
                [
                    sum(power[i][k] * mat[k][j] for k in range(n) if power[i][k])
                    for j in range(n)
                ]
                for i in range(n)
            ]
        return sum(power[i][i] for i in range(n))

    def fn(point: tuple) -> Scalar:
        if _all_integral(point):
            ints = tuple(int(x) for x in point)
            bound = max(1, max(abs(x) for x in ints))
            if (n * bound) ** d < 2**62:
                # plain d-1 products (no repeated squaring); entries stay
                # below (n*bound)^d so int64 cannot overflow
                m64 = np.array(ints, dtype=np.int64)[:, None] * adj64
                power = m64
                for _ in range(d - 1):
                    power = power @ m64
                return int(np.trace(power))
            return trace_power_exact(ints)
        return trace_power_exact(point)

    return BlackBoxPolynomial(n, d, fn)


def prod_poly(a: Sequence[Sequence[Scalar]]) -> BlackBoxPolynomial:
    """Row-product polynomial of a square matrix: eval(v) = prod_i <row_i, v>.
    The coefficient of x_1...x_n is the permanent of the matrix."""
    rows = tuple(tuple(x for x in row) for row in a)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise DomainError("matrix must be square and nonempty")

    def fn(point: tuple) -> Scalar:
        out: Scalar = 1
        for row in rows:
            out *= sum(c * x for c, x in zip(row, point) if c)
            if out == 0:
                return 0
        return out

    return BlackBoxPolynomial(n, n, fn)


def partition_poly(s: SetSystem) -> BlackBoxPolynomial:
    """eval(v) = (sum_i prod_{j in S_i} v_j)^k; the multilinear coefficient
    of the full ground set counts ordered partitions into k of the sets."""
    sets = [sorted(block) for block in s.sets]
    k = s.k

    def fn(point: tuple) -> Scalar:
        total: Scalar = 0
        for block in sets:
            prod: Scalar = 1
            for j in block:
                prod *= point[j]
                if prod == 0:
                    break
            total += prod
        return total**k

    return BlackBoxPolynomial(s.ground, s.ground, fn)


def hom_poly(h: Graph, g: Graph, td: TreeDecomposition, table_budget: int = DEFAULT_TABLE_BUDGET) -> BlackBoxPolynomial:
    """Homomorphism generating polynomial, evaluated by dynamic programming
    over the bag tree: eval(v) = sum over homomorphisms of the product of
    the image variables.

    Edge constraints are enforced in every bag that contains both endpoints
    (idempotent); each pattern vertex's variable factor is applied exactly
    once, at the topmost bag containing it.
    """
    td.require_valid(h)
    n = g.n
    bags = [tuple(sorted(b)) for b in td.bags]
    if n ** max(len(b) for b in bags) > table_budget:
        raise SizeBudgetError("per-bag assignment table would exceed the budget")

    children: list[list[int]] = [[] for _ in bags]
    parent = [-1] * len(bags)
    seen = {0}
    order = [0]
    stack = [0]
    adjacency = {i: set() for i in range(len(bags))}
    for a, b in td.tree:
        adjacency[a].add(b)
        adjacency[b].add(a)
    while stack:
        cur = stack.pop()
        for nxt in adjacency[cur]:
            if nxt not in seen:
                seen.add(nxt)
                parent[nxt] = cur
                children[cur].append(nxt)
                order.append(nxt)
                stack.append(nxt)
    postorder = list(reversed(order))

    edge_checks = []
    for bag in bags:
        pos = {v: i for i, v in enumerate(bag)}
        checks = sorted(
            {
                (pos[u], pos[v])
                for (u, v) in h.edges
                if u in pos and v in pos
            }
        )
        edge_checks.append(checks)

    # a vertex's variable factor is applied where it leaves the bag tree:
    # at the topmost bag containing it (its "private" positions), or at the root
    private_pos = []
    child_key_pos = []  # key order used by each bag when publishing upward
    for idx, bag in enumerate(bags):
        if parent[idx] >= 0:
            pbag = set(bags[parent[idx]])
            private_pos.append(tuple(i for i, v in enumerate(bag) if v not in pbag))
            child_key_pos.append(tuple(i for i, v in enumerate(bag) if v in pbag))
        else:
            private_pos.append(())
            child_key_pos.append(())
    # positions in the parent bag matching that key, in the same vertex order
    parent_lookup = []
    for idx in range(len(bags)):
        if parent[idx] < 0:
            parent_lookup.append(())
            continue
        ppos = {v: i for i, v in enumerate(bags[parent[idx]])}
        parent_lookup.append(
            tuple(ppos[bags[idx][i]] for i in child_key_pos[idx])
        )

    def fn(point: tuple) -> Scalar:
        messages: dict[int, dict] = {}
        total: Scalar = 0
        for idx in postorder:
            bag = bags[idx]
            checks = edge_checks[idx]
            outgoing: dict = {}
            child_msgs = [(messages.pop(c), parent_lookup[c]) for c in children[idx]]
            is_root = parent[idx] < 0
            for assignment in product(range(n), repeat=len(bag)):
                ok = True
                for a, b in checks:
                    if not g.has_edge(assignment[a], assignment[b]):
                        ok = False
                        break
                if not ok:
                    continue
                value: Scalar = 1
                for msg, lookup in child_msgs:
                    key = tuple(assignment[i] for i in lookup)
                    sub = msg.get(key)
                    if sub is None:
                        value = 0
                        break
                    value *= sub
                if value == 0:
                    continue
                if is_root:
                    for i in range(len(bag)):
                        value *= point[assignment[i]]
                    total += value
                else:
                    for i in private_pos[idx]:
                        value *= point[assignment[i]]
                    key = tuple(assignment[i] for i in child_key_pos[idx])
                    outgoing[key] = outgoing.get(key, 0) + value
            if not is_root:
                messages[idx] = outgoing
        return total

    return BlackBoxPolynomial(n, h.n, fn)


def sparse_blackbox(f: SparsePolynomial) -> BlackBoxPolynomial:
    """Black-box adapter over an explicit sparse polynomial."""
    return BlackBoxPolynomial(f.nvars, f.degree, f.evaluate)
