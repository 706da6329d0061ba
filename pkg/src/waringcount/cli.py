"""Command-line interface.

Reports are JSON documents on stdout (``--format human`` prints key/value
lines with identical values).  Exit codes: 0 success, 2 domain or parse
errors, 3 budget errors, 1 failed audits or internal consistency errors.
Seeds default from the WARING_SEED environment variable, else entropy, and
are echoed in every randomized report.  ``--timing`` adds elapsed seconds
(off by default so reruns with the same seed match byte for byte).
"""

from __future__ import annotations

import functools
import json
import math
import os
import secrets
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import engines, oracle, splitters
from .core import elementary_symmetric, expand, operator_on_sparse
from .decomp import lee_elementary, monomial_product_decomposition, ryser_elementary
from .engines import CONVENTIONS, ApproxConfig, CountReport
from .errors import (
    ConsistencyError,
    ContractViolation,
    DomainError,
    ParseError,
    SizeBudgetError,
)
from .formats import (
    parse_gf_polynomial,
    parse_graph,
    parse_matrix,
    parse_set_system,
    parse_sparse_polynomial,
    parse_tree_decomposition,
)
from .genpoly import cycle_poly, exhaustive_decomposition, sparse_blackbox
from .gf2 import GF2mField, gf_sparse_blackbox
from .report import write_estimate_report
from .rng import CounterRng


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("WARING_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise DomainError(f"WARING_SEED={env!r} is not an integer") from None
    return secrets.randbits(63)


def _emit(doc: dict, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(doc, sort_keys=True))
        return
    for line in _human_lines(doc, ""):
        click.echo(line)


def _human_lines(value, prefix: str):
    if isinstance(value, dict):
        for key in sorted(value):
            yield from _human_lines(value[key], f"{prefix}{key}." if prefix else f"{key}.")
    elif isinstance(value, list):
        yield f"{prefix[:-1]}: {json.dumps(value)}"
    else:
        yield f"{prefix[:-1]}: {value}"


def _cli_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ParseError as exc:
            _fail(str(exc), "parse", 2)
        except (DomainError, ContractViolation) as exc:
            _fail(str(exc), "domain", 2)
        except SizeBudgetError as exc:
            _fail(str(exc), "budget", 3)
        except ConsistencyError as exc:
            _fail(str(exc), "consistency", 1)

    return wrapper


def _fail(message: str, kind: str, code: int) -> None:
    click.echo(json.dumps({"error": message, "kind": kind}), err=True)
    sys.exit(code)


def _read(path: str) -> str:
    return Path(path).read_text()


format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "human"]), default="json",
    help="output mode",
)
seed_option = click.option("--seed", type=int, default=None, help="random seed")
timing_option = click.option("--timing", is_flag=True, help="include elapsed seconds")


@click.group()
@click.version_option(package_name="waringcount")
def main():
    """Count combinatorial structures by evaluating black-box generating
    polynomials at the points of explicit power-sum decompositions."""


def _multilinear_support_decomposition(n: int, d: int, kind: str):
    if kind == "ryser":
        return ryser_elementary(n, d)
    if d % 2 == 1 or n > d:
        return lee_elementary(n, d)
    return monomial_product_decomposition((1,) * d)


_CONVENTION_ALIASES = {
    "undirected": "undirected-cycles",
    "directed": "directed-cycles",
    "rooted": "rooted-directed",
}


def _convention_default(convention: str | None, directed: bool) -> str:
    if convention is not None:
        return _CONVENTION_ALIASES.get(convention, convention)
    return "directed-cycles" if directed else "undirected-cycles"


@main.command("count-cycles")
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--d", "length", required=True, type=int, help="cycle length")
@click.option("--directed", is_flag=True, help="treat the edge list as directed")
@click.option("--allow-loops", is_flag=True, help="permit self-loop edges")
@click.option("--vertices", type=int, default=None, help="override the vertex count")
@click.option(
    "--convention", type=click.Choice(CONVENTIONS + tuple(_CONVENTION_ALIASES)), default=None,
    help="defaults to undirected-cycles (directed-cycles for directed input)",
)
@click.option("--exact/--approx", "exact", default=True)
@click.option("--eps", default="1/4", help="approximation accuracy (rational)")
@click.option("--trials", type=int, default=1, help="median-of-trials rounds")
@click.option("--report-dir", type=click.Path(), default=None,
              help="write per-function estimate CSV and figure here (approx only)")
@seed_option
@format_option
@timing_option
@_cli_errors
def count_cycles_cmd(
    graph_path, length, directed, allow_loops, vertices, convention, exact,
    eps, trials, report_dir, seed, fmt, timing,
):
    """Count simple cycles of a given length."""
    g = parse_graph(
        _read(graph_path), directed=directed, n=vertices, allow_loops=allow_loops
    )
    conv = _convention_default(convention, directed)
    if exact:
        rep = engines.count_simple_cycles(g, length, conv)
    else:
        if conv != "rooted-directed" and length < 3:
            raise DomainError("cycle conventions require d >= 3")
        resolved = _resolve_seed(seed)
        cfg = ApproxConfig(
            epsilon=Fraction(eps), seed=resolved, trials=trials,
            collect_samples=report_dir is not None,
        )
        base = engines.approx_multilinear_sum(cycle_poly(g, length), cfg)
        divisor = {"rooted-directed": 1, "directed-cycles": length,
                   "undirected-cycles": 2 * length}[conv]
        params = dict(base.parameters)
        params.update({"convention": conv, "d": length})
        rep = CountReport(
            value=base.value / divisor,
            queries=base.queries,
            method="count-cycles-approx",
            seed=resolved,
            parameters=params,
            elapsed=base.elapsed,
            samples=tuple(s / divisor for s in base.samples) if base.samples else None,
        )
        if report_dir and rep.samples:
            write_estimate_report(report_dir, rep.samples, rep.value, label="cycles")
    _emit(rep.to_json_dict(include_elapsed=timing), fmt)


@main.command("count-sub")
@click.option("--pattern", "pattern_path", required=True, type=click.Path(exists=True))
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--td", "td_path", type=click.Path(exists=True), default=None,
              help="PACE-style tree decomposition of the pattern; found by "
                   "exhaustive search when omitted (pattern size <= 10)")
@click.option("--eps", default="1/4")
@click.option("--trials", type=int, default=1)
@click.option("--report-dir", type=click.Path(), default=None)
@click.option("--budget", type=int, default=None,
              help="cap on the per-bag assignment table size")
@seed_option
@format_option
@timing_option
@_cli_errors
def count_sub_cmd(pattern_path, graph_path, td_path, eps, trials, report_dir,
                  budget, seed, fmt, timing):
    """Approximately count subgraphs isomorphic to a pattern."""
    h = parse_graph(_read(pattern_path))
    g = parse_graph(_read(graph_path))
    td = (
        parse_tree_decomposition(_read(td_path))
        if td_path
        else exhaustive_decomposition(h)
    )
    resolved = _resolve_seed(seed)
    cfg = ApproxConfig(
        epsilon=Fraction(eps), seed=resolved, trials=trials,
        collect_samples=report_dir is not None,
    )
    rep = engines.count_subgraphs_approx(h, g, td, cfg, table_budget=budget)
    if report_dir and rep.samples:
        write_estimate_report(report_dir, rep.samples, rep.value, label="subgraphs")
    _emit(rep.to_json_dict(include_elapsed=timing), fmt)


@main.command("permanent")
@click.option("--matrix", "matrix_path", required=True, type=click.Path(exists=True))
@click.option("--budget", type=int, default=20, help="maximum matrix size (2^n work)")
@format_option
@timing_option
@_cli_errors
def permanent_cmd(matrix_path, budget, fmt, timing):
    """Permanent of a rational matrix by inclusion-exclusion."""
    a = parse_matrix(_read(matrix_path))
    rep = engines.permanent(a, budget=budget)
    _emit(rep.to_json_dict(include_elapsed=timing), fmt)


@main.command("hamiltonian")
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True))
@click.option("--directed", is_flag=True)
@click.option("--vertices", type=int, default=None)
@click.option("--convention", type=click.Choice(CONVENTIONS + tuple(_CONVENTION_ALIASES)), default=None)
@click.option("--budget", type=int, default=20)
@format_option
@timing_option
@_cli_errors
def hamiltonian_cmd(graph_path, directed, vertices, convention, budget, fmt, timing):
    """Count Hamiltonian cycles."""
    g = parse_graph(_read(graph_path), directed=directed, n=vertices)
    conv = _convention_default(convention, directed)
    rep = engines.count_hamiltonian(g, conv, budget=budget)
    _emit(rep.to_json_dict(include_elapsed=timing), fmt)


@main.command("partitions")
@click.option("--sets", "sets_path", required=True, type=click.Path(exists=True))
@click.option("--k", "parts", required=True, type=int, help="number of parts")
@click.option("--budget", type=int, default=20)
@format_option
@timing_option
@_cli_errors
def partitions_cmd(sets_path, parts, budget, fmt, timing):
    """Count ordered partitions of the ground set into k of the given sets."""
    system = parse_set_system(_read(sets_path), parts)
    rep = engines.count_set_partitions(system, budget=budget)
    _emit(rep.to_json_dict(include_elapsed=timing), fmt)


@main.command("detect-multilinear")
@click.option("--poly", "poly_path", required=True, type=click.Path(exists=True),
              help="sparse polynomial with GF(2^m) coefficients")
@click.option("--m", "extension", required=True, type=int, help="field GF(2^m)")
@click.option("--trials", type=int, default=10)
@seed_option
@format_option
@_cli_errors
def detect_multilinear_cmd(poly_path, extension, trials, seed, fmt):
    """One-sided detection of a multilinear monomial over GF(2^m)."""
    field = GF2mField(extension)
    coeffs, nvars, degree = parse_gf_polynomial(_read(poly_path), field.size)
    f = gf_sparse_blackbox(field, nvars, degree, coeffs)
    resolved = _resolve_seed(seed)
    rep = engines.detect_multilinear_char2(f, trials=trials, seed=resolved)
    _emit(
        {
            "detected": rep.detected,
            "trials_run": rep.trials_run,
            "queries": rep.queries,
            "seed": resolved,
            "m": extension,
        },
        fmt,
    )


@main.command("certify")
@click.option("--poly", "poly_path", required=True, type=click.Path(exists=True))
@click.option("--g-kind", type=click.Choice(["lee", "ryser"]), default="lee",
              help="decomposition used for the multilinear-support side")
@click.option("--delta", default="1/4", help="one-sided error bound (rational)")
@click.option("--nonneg", is_flag=True,
              help="deterministic variant for nonnegative coefficients")
@seed_option
@format_option
@_cli_errors
def certify_cmd(poly_path, g_kind, delta, nonneg, seed, fmt):
    """Certify that a polynomial has a multilinear monomial (one-sided)."""
    poly = parse_sparse_polynomial(_read(poly_path))
    if poly.degree > poly.nvars:
        raise DomainError("degree exceeds the variable count")
    dec = _multilinear_support_decomposition(poly.nvars, poly.degree, g_kind)
    f = sparse_blackbox(poly)
    resolved = _resolve_seed(seed)
    intersects = engines.certify_support_intersection(
        dec, f, Fraction(delta), seed=resolved, nonneg=nonneg
    )
    _emit(
        {
            "intersects": intersects,
            "delta": str(Fraction(delta)),
            "nonneg": nonneg,
            "queries": f.calls,
            "seed": resolved,
        },
        fmt,
    )


@main.command("sample-splitter")
@click.option("--kind", type=click.Choice(["balanced", "perfect"]), default="balanced")
@click.option("--n", "domain", required=True, type=int)
@click.option("--k", type=int, default=None, help="subset size (balanced)")
@click.option("--l", "range_size", type=int, default=None, help="range size (balanced)")
@click.option("--delta", default="2", help="balance ratio (balanced)")
@click.option("--d", type=int, default=None, help="subset size (perfect)")
@click.option("--n0", type=int, default=None, help="slots per group (perfect)")
@click.option("--d0", type=int, default=None, help="per-group subset size (perfect)")
@click.option("--verify/--no-verify", "do_verify", default=True)
@click.option("--retries", type=int, default=20)
@click.option("--budget", type=int, default=splitters.DEFAULT_VERIFY_BUDGET)
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="write the family JSON here")
@seed_option
@format_option
@_cli_errors
def sample_splitter_cmd(kind, domain, k, range_size, delta, d, n0, d0, do_verify,
                        retries, budget, out_path, seed, fmt):
    """Sample a balanced splitter or perfect splitter."""
    resolved = _resolve_seed(seed)
    doc: dict = {"kind": kind, "seed": resolved}
    if kind == "balanced":
        if k is None or range_size is None:
            raise DomainError("balanced sampling needs --k and --l")
        spec = splitters.SplitterSpec(domain, k, range_size, Fraction(delta))
        if do_verify:
            family, rep = splitters.sample_verified_balanced(
                spec, resolved, retries=retries, budget=budget
            )
            doc.update(
                {
                    "verified": True,
                    "c": str(rep.c),
                    "worst_ratio": str(rep.worst_ratio),
                    "min_count": rep.min_count,
                    "max_count": rep.max_count,
                }
            )
        else:
            family = splitters.sample_balanced_splitter(spec, resolved)
            doc["verified"] = False
    else:
        if d is None or n0 is None or d0 is None:
            raise DomainError("perfect sampling needs --d, --n0 and --d0")
        if do_verify:
            family = splitters.sample_verified_perfect(
                domain, d, n0, d0, resolved, retries=retries, budget=budget
            )
            doc["verified"] = True
        else:
            family = splitters.sample_perfect_splitter(domain, d, n0, d0, resolved)
            doc["verified"] = False
        doc["sigma"] = splitters.perfect_splitter_size(domain, d, n0, d0)
    doc["size"] = len(family)
    if out_path:
        Path(out_path).write_text(json.dumps(splitters.family_to_json(family)))
        doc["out"] = out_path
    _emit(doc, fmt)


@main.command("verify-splitter")
@click.option("--family", "family_path", required=True, type=click.Path(exists=True))
@click.option("--k", type=int, default=None, help="subset size (balanced check)")
@click.option("--delta", default="2")
@click.option("--d0", type=int, default=None, help="per-group size (perfect check)")
@click.option("--budget", type=int, default=splitters.DEFAULT_VERIFY_BUDGET)
@format_option
@_cli_errors
def verify_splitter_cmd(family_path, k, delta, d0, budget, fmt):
    """Exhaustively verify a stored function family."""
    family = splitters.family_from_json(json.loads(_read(family_path)))
    if k is not None:
        rep = splitters.verify_balanced(family, k, Fraction(delta), budget=budget)
        _emit(
            {
                "mode": "balanced",
                "ok": rep.ok,
                "c": str(rep.c),
                "worst_ratio": None if rep.worst_ratio is None else str(rep.worst_ratio),
                "min_count": rep.min_count,
                "max_count": rep.max_count,
            },
            fmt,
        )
        return
    if d0 is not None:
        if family.range_shape is None:
            raise DomainError("family has a flat range; pass --k for a balanced check")
        groups, _ = family.range_shape
        ok = splitters.verify_perfect(family, groups * d0, d0, budget=budget)
        _emit({"mode": "perfect", "ok": ok, "d": groups * d0, "d0": d0}, fmt)
        return
    raise DomainError("pass --k (balanced) or --d0 (perfect)")


@main.command("hash-bound")
@click.option("--n", required=True, type=int)
@click.option("--k", required=True, type=int)
@click.option("--l", "range_size", required=True, type=int)
@format_option
@_cli_errors
def hash_bound_cmd(n, k, range_size, fmt):
    """Lower bound on the size of a perfectly-k-balanced hash family."""
    value = splitters.hash_family_lower_bound(n, k, range_size)
    _emit({"value": str(value), "n": n, "k": k, "l": range_size}, fmt)


@main.command("verify-decompositions")
@click.option("--nmax", type=int, default=6)
@click.option("--dmax", type=int, default=4)
@click.option("--rank-nmax", type=int, default=6, help="grid for the rank audit")
@click.option("--rank-dmax", type=int, default=4)
@seed_option
@format_option
@_cli_errors
def verify_decompositions_cmd(nmax, dmax, rank_nmax, rank_dmax, seed, fmt):
    """Run the full decomposition audit suite (exit 1 on any failure)."""
    resolved = _resolve_seed(seed)
    checks = []

    def record(name: str, ok: bool, detail: str = ""):
        entry = {"name": name, "ok": bool(ok)}
        if detail:
            entry["detail"] = detail
        checks.append(entry)

    for n in range(1, nmax + 1):
        for d in range(1, min(n, dmax) + 1):
            e = elementary_symmetric(n, d)
            record(f"ryser({n},{d}) expands to e", expand(ryser_elementary(n, d)) == e)
            if d % 2 == 1 or n > d:
                dec = lee_elementary(n, d)
                record(f"lee({n},{d}) expands to e", expand(dec) == e)
                expected = sum(math.comb(n, i) for i in range(d // 2 + 1))
                record(
                    f"lee({n},{d}) term count",
                    len(dec.terms) == expected,
                    f"{len(dec.terms)} vs {expected}",
                )
    for n in range(2, rank_nmax + 1):
        for d in range(1, min(n, rank_dmax) + 1):
            e = elementary_symmetric(n, d)
            record(
                f"rank bound ryser({n},{d})",
                oracle.rank_lower_bound_check(e, ryser_elementary(n, d)),
            )
            if d % 2 == 1 or n > d:
                record(
                    f"rank bound lee({n},{d})",
                    oracle.rank_lower_bound_check(e, lee_elementary(n, d)),
                )
    record(
        "catalecticant rank of e(3,2) at (1,1) is 3",
        oracle.catalecticant(elementary_symmetric(3, 2), 1, 1).rank() == 3,
    )
    for d in (2, 3):
        record(
            f"hankel catalecticant bound d={d}",
            oracle.hankel_catalecticant_bound_check(d),
        )
    rng = CounterRng(resolved, "audit-nodes")
    positivity_ok = True
    for _ in range(20):
        nodes = set()
        while len(nodes) < 6:
            nodes.add(Fraction(rng.randint(-30, 30), rng.randint(1, 4)))
        h = oracle.hankel_support_polynomial(6, 3, sorted(nodes))
        if set(h.support()) != set(elementary_symmetric(6, 3).support()):
            positivity_ok = False
        if any(c <= 0 for _, c in h.terms()):
            positivity_ok = False
    record("hankel support polynomial positivity (6,3)", positivity_ok)

    # pairing of e_{n,d} with itself counts its monomials (alpha! = 1)
    e43 = elementary_symmetric(4, 3)
    pairing = operator_on_sparse(expand(lee_elementary(4, 3)), e43)
    record("pairing self-check e(4,3)", pairing == Fraction(math.comb(4, 3)))

    ok = all(c["ok"] for c in checks)
    _emit({"ok": ok, "seed": resolved, "checks": checks}, fmt)
    if not ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
