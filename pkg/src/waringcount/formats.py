"""Input file formats.

Graphs: optional ``#`` comment lines, then one ``u v`` pair per line,
0-based.  Matrices: whitespace-separated rationals, one row per line.
Tree decompositions: PACE-2017 style (``s td <bags> <width+1> <n>``, 1-based
``b`` lines, then bag-tree edges).  Sparse polynomials: one
``coeff e_1 ... e_n`` row per monomial.  Set systems: one set of 0-based
element indices per line.

Every parser raises ParseError with the offending 1-based line number.
"""

from __future__ import annotations

from fractions import Fraction

from .core import SparsePolynomial
from .errors import ParseError
from .genpoly import Graph, SetSystem, TreeDecomposition


def _content_lines(text: str, comment_prefixes: tuple[str, ...] = ("#",)):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or any(line.startswith(p) for p in comment_prefixes):
            continue
        yield lineno, line


def parse_graph(
    text: str,
    directed: bool = False,
    n: int | None = None,
    allow_loops: bool = False,
) -> Graph:
    """Edge-list graph; the vertex count is max id + 1 unless given."""
    pairs = []
    maxid = -1
    for lineno, line in _content_lines(text):
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(f"non-integer vertex in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError(f"negative vertex id in {line!r}", lineno)
        pairs.append((u, v))
        maxid = max(maxid, u, v)
    if maxid < 0 and n is None:
        raise ParseError("graph file contains no edges and no vertex count was given")
    count = n if n is not None else maxid + 1
    if maxid >= count:
        raise ParseError(f"vertex id {maxid} exceeds declared count {count}")
    try:
        return Graph.from_edges(count, pairs, directed=directed, allow_loops=allow_loops)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def parse_matrix(text: str) -> tuple[tuple[Fraction, ...], ...]:
    rows = []
    width = None
    for lineno, line in _content_lines(text):
        try:
            row = tuple(Fraction(f) for f in line.split())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational entry in {line!r}", lineno) from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(
                f"row has {len(row)} entries, expected {width}", lineno
            )
        rows.append(row)
    if not rows:
        raise ParseError("matrix file is empty")
    return tuple(rows)


def parse_tree_decomposition(text: str) -> TreeDecomposition:
    """PACE-2017 style reader; bag ids and vertices are 1-based in the file."""
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, line in _content_lines(text, comment_prefixes=("#", "c")):
        fields = line.split()
        if fields[0] == "s":
            if header is not None:
                raise ParseError("duplicate solution line", lineno)
            if len(fields) != 5 or fields[1] != "td":
                raise ParseError("expected 's td <bags> <width+1> <vertices>'", lineno)
            try:
                header = tuple(int(x) for x in fields[2:])
            except ValueError:
                raise ParseError("non-integer header field", lineno) from None
        elif fields[0] == "b":
            if header is None:
                raise ParseError("bag line before the solution line", lineno)
            try:
                bag_id = int(fields[1])
                members = frozenset(int(x) - 1 for x in fields[2:])
            except (IndexError, ValueError):
                raise ParseError(f"bad bag line {line!r}", lineno) from None
            if bag_id in bags:
                raise ParseError(f"duplicate bag id {bag_id}", lineno)
            bags[bag_id] = members
        else:
            if header is None:
                raise ParseError("edge line before the solution line", lineno)
            if len(fields) != 2:
                raise ParseError(f"expected a bag-tree edge, got {line!r}", lineno)
            try:
                a, b = int(fields[0]), int(fields[1])
            except ValueError:
                raise ParseError(f"non-integer bag id in {line!r}", lineno) from None
            edges.append((a - 1, b - 1))
    if header is None:
        raise ParseError("missing 's td ...' solution line")
    n_bags = header[0]
    if set(bags) != set(range(1, n_bags + 1)):
        raise ParseError(f"expected bags 1..{n_bags}, got ids {sorted(bags)}")
    ordered = tuple(bags[i] for i in range(1, n_bags + 1))
    return TreeDecomposition(ordered, tuple(edges))


def parse_sparse_polynomial(text: str) -> SparsePolynomial:
    """Rows 'coeff e_1 ... e_n'; must be homogeneous with a common n."""
    rows = []
    nvars = None
    for lineno, line in _content_lines(text):
        fields = line.split()
        if len(fields) < 2:
            raise ParseError(f"expected 'coeff e1 ... en', got {line!r}", lineno)
        try:
            coeff = Fraction(fields[0])
            alpha = tuple(int(x) for x in fields[1:])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad monomial row {line!r}", lineno) from None
        if any(e < 0 for e in alpha):
            raise ParseError(f"negative exponent in {line!r}", lineno)
        if nvars is None:
            nvars = len(alpha)
        elif len(alpha) != nvars:
            raise ParseError(
                f"monomial has {len(alpha)} exponents, expected {nvars}", lineno
            )
        rows.append((lineno, coeff, alpha))
    if not rows:
        raise ParseError("polynomial file is empty")
    degree = sum(rows[0][2])
    for lineno, _, alpha in rows:
        if sum(alpha) != degree:
            raise ParseError(
                f"monomial degree {sum(alpha)} differs from {degree}", lineno
            )
    table: dict[tuple[int, ...], Fraction] = {}
    for _, coeff, alpha in rows:
        table[alpha] = table.get(alpha, Fraction(0)) + coeff
    return SparsePolynomial(nvars, degree, table)


def parse_gf_polynomial(text: str, field_size: int) -> tuple[dict, int, int]:
    """Rows 'coeff e_1 ... e_n' with integer coefficients in [0, 2^m).

    Returns (coefficient table, nvars, degree); coefficients are combined
    with xor since the field has characteristic 2.
    """
    rows = []
    nvars = None
    for lineno, line in _content_lines(text):
        fields = line.split()
        if len(fields) < 2:
            raise ParseError(f"expected 'coeff e1 ... en', got {line!r}", lineno)
        try:
            coeff = int(fields[0], 0)
            alpha = tuple(int(x) for x in fields[1:])
        except ValueError:
            raise ParseError(f"bad monomial row {line!r}", lineno) from None
        if not 0 <= coeff < field_size:
            raise ParseError(
                f"coefficient {coeff} outside the field of size {field_size}", lineno
            )
        if any(e < 0 for e in alpha):
            raise ParseError(f"negative exponent in {line!r}", lineno)
        if nvars is None:
            nvars = len(alpha)
        elif len(alpha) != nvars:
            raise ParseError(
                f"monomial has {len(alpha)} exponents, expected {nvars}", lineno
            )
        rows.append((lineno, coeff, alpha))
    if not rows:
        raise ParseError("polynomial file is empty")
    degree = sum(rows[0][2])
    for lineno, _, alpha in rows:
        if sum(alpha) != degree:
            raise ParseError(
                f"monomial degree {sum(alpha)} differs from {degree}", lineno
            )
    table: dict[tuple[int, ...], int] = {}
    for _, coeff, alpha in rows:
        table[alpha] = table.get(alpha, 0) ^ coeff
    return {a: c for a, c in table.items() if c}, nvars, degree


def parse_set_system(text: str, k: int) -> SetSystem:
    """One set of 0-based element indices per line."""
    blocks = []
    for lineno, line in _content_lines(text):
        try:
            members = frozenset(int(x) for x in line.split())
        except ValueError:
            raise ParseError(f"non-integer element in {line!r}", lineno) from None
        if not members:
            raise ParseError("empty set", lineno)
        blocks.append(members)
    if not blocks:
        raise ParseError("set-system file is empty")
    try:
        return SetSystem(k, tuple(blocks))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
