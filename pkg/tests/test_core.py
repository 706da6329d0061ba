import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import random_rational_point, random_sparse
from waringcount.core import (
    BlackBoxPolynomial,
    LinearForm,
    SparsePolynomial,
    WaringDecomposition,
    apply_operator,
    concat,
    elementary_symmetric,
    expand,
    exponent_vectors,
    homogeneity_probe,
    operator_on_sparse,
    term,
)
from waringcount.decomp import (
    lee_elementary,
    monomial_product_decomposition,
    ryser_elementary,
)
from waringcount.errors import ContractViolation, SizeBudgetError
from waringcount.genpoly import sparse_blackbox
from waringcount.rng import CounterRng


def bb(poly: SparsePolynomial) -> BlackBoxPolynomial:
    return sparse_blackbox(poly)


class TestApplyOperator:
    def test_product_monomial_pairing(self):
        # difference-of-squares decomposition of x1*x2, paired with x1*x2 itself
        g = monomial_product_decomposition((1, 1))
        f = bb(SparsePolynomial(2, 2, {(1, 1): 1}))
        assert apply_operator(g, f) == 1

    def test_lee_on_full_monomial(self):
        f = bb(SparsePolynomial(3, 3, {(1, 1, 1): 1}))
        assert apply_operator(lee_elementary(3, 3), f) == 1

    def test_ryser_on_pure_square_is_zero(self):
        f = bb(SparsePolynomial(2, 2, {(2, 0): 1}))
        assert apply_operator(ryser_elementary(2, 2), f) == 0

    def test_query_count_equals_term_count(self):
        g = lee_elementary(5, 3)
        f = bb(elementary_symmetric(5, 3))
        apply_operator(g, f)
        assert f.calls == len(g.terms)

    def test_shape_mismatch_raises(self):
        g = lee_elementary(3, 3)
        with pytest.raises(ContractViolation):
            apply_operator(g, bb(elementary_symmetric(4, 3)))
        with pytest.raises(ContractViolation):
            apply_operator(g, bb(elementary_symmetric(3, 2)))


class TestExpand:
    def test_single_square(self):
        g = WaringDecomposition(2, 2, (term(1, (1, 1), 2),), 1)
        assert expand(g) == SparsePolynomial(2, 2, {(2, 0): 1, (1, 1): 2, (0, 2): 1})

    def test_generators_expand_to_elementary_symmetric(self):
        e = elementary_symmetric(3, 3)
        assert expand(ryser_elementary(3, 3)) == e
        assert expand(lee_elementary(3, 3)) == e

    def test_budget_error(self):
        g = WaringDecomposition(30, 10, (term(1, (1,) * 30, 10),), 1)
        with pytest.raises(SizeBudgetError):
            expand(g, budget=1000)


class TestOperatorOnSparse:
    def test_multilinear_self_pairing(self):
        f = SparsePolynomial(2, 2, {(1, 1): 1})
        assert operator_on_sparse(f, f) == 1

    def test_square_self_pairing_includes_factorial(self):
        f = SparsePolynomial(1, 2, {(2,): 1})
        assert operator_on_sparse(f, f) == 2

    def test_elementary_against_mixed(self):
        g = elementary_symmetric(3, 2)
        f = SparsePolynomial(3, 2, {(1, 1, 0): 1, (1, 0, 1): 5})
        assert operator_on_sparse(g, f) == 6
        assert operator_on_sparse(f, g) == 6

    def test_agrees_with_apply_operator(self):
        g = lee_elementary(4, 3)
        f = random_sparse(4, 3, seed=9)
        assert operator_on_sparse(expand(g), f) == apply_operator(g, bb(f))


class TestConcat:
    def test_singleton_rescales_weights(self):
        g = lee_elementary(3, 3)
        merged = concat([g])
        assert merged.scale == 1
        assert expand(merged) == expand(g)

    def test_two_squares(self):
        g1 = WaringDecomposition(2, 2, (term(1, (1, 0), 2),), 1)
        g2 = WaringDecomposition(2, 2, (term(1, (0, 1), 2),), 1)
        merged = concat([g1, g2])
        assert len(merged.terms) == 2
        assert expand(merged) == SparsePolynomial(2, 2, {(2, 0): 1, (0, 2): 1})

    def test_lee_plus_ryser_doubles(self):
        e = elementary_symmetric(3, 3)
        merged = concat([lee_elementary(3, 3), ryser_elementary(3, 3)])
        assert expand(merged) == e.scaled(2)

    def test_shape_mismatch(self):
        with pytest.raises(ContractViolation):
            concat([lee_elementary(3, 3), lee_elementary(4, 3)])


small_scalars = st.integers(min_value=-3, max_value=3)


@st.composite
def small_decompositions(draw):
    nvars = draw(st.integers(1, 3))
    degree = draw(st.integers(1, 3))
    nterms = draw(st.integers(1, 3))
    terms = []
    for _ in range(nterms):
        weight = draw(small_scalars)
        coeffs = tuple(draw(small_scalars) for _ in range(nvars))
        terms.append(term(weight, coeffs, degree))
    scale = Fraction(draw(st.integers(-4, 4)), draw(st.integers(1, 4)))
    if scale == 0:
        scale = Fraction(1)
    return WaringDecomposition(nvars, degree, tuple(terms), scale)


@st.composite
def matching_sparse(draw, g):
    table = {}
    for alpha in exponent_vectors(g.nvars, g.degree):
        if draw(st.booleans()):
            table[alpha] = Fraction(draw(small_scalars), draw(st.integers(1, 3)))
    return SparsePolynomial(g.nvars, g.degree, table)


@given(data=st.data())
def test_oracle_equivalence_property(data):
    g = data.draw(small_decompositions())
    f = data.draw(matching_sparse(g))
    assert apply_operator(g, bb(f)) == operator_on_sparse(expand(g), f)


@given(data=st.data(), lam_num=small_scalars, lam_den=st.integers(1, 3))
def test_apply_operator_linearity(data, lam_num, lam_den):
    g = data.draw(small_decompositions())
    f1 = data.draw(matching_sparse(g))
    f2 = data.draw(matching_sparse(g))
    lam = Fraction(lam_num, lam_den)
    combined = f1.plus(f2.scaled(lam))
    assert apply_operator(g, bb(combined)) == apply_operator(g, bb(f1)) + lam * apply_operator(g, bb(f2))


class TestSparsePolynomial:
    def test_validation(self):
        with pytest.raises(ContractViolation):
            SparsePolynomial(2, 2, {(1, 1, 0): 1})
        with pytest.raises(ContractViolation):
            SparsePolynomial(2, 2, {(3, 0): 1})  # degree 3 term
        with pytest.raises(ContractViolation):
            SparsePolynomial(2, 2, {(-1, 3): 1})

    def test_zero_coefficients_dropped(self):
        f = SparsePolynomial(2, 2, {(1, 1): 0, (2, 0): 1})
        assert len(f) == 1
        assert f.coefficient((1, 1)) == 0

    def test_evaluate(self):
        f = SparsePolynomial(2, 2, {(1, 1): 1})
        assert f.evaluate((2, 3)) == 6
        assert elementary_symmetric(3, 2).evaluate((1, 1, 1)) == 3
        empty = SparsePolynomial(2, 2, {})
        assert empty.evaluate((5, 7)) == 0

    def test_exponent_vectors_count(self):
        assert len(list(exponent_vectors(4, 3))) == math.comb(4 + 3 - 1, 3)


class TestBlackBox:
    def test_homogeneity_probe_passes_for_sparse(self):
        f = bb(random_sparse(3, 3, seed=5))
        assert homogeneity_probe(f, CounterRng(1, "probe"), samples=20)

    def test_homogeneity_probe_fails_for_inhomogeneous(self):
        wrapped = BlackBoxPolynomial(2, 2, lambda p: p[0] * p[1] + 1)
        assert not homogeneity_probe(wrapped, CounterRng(2, "probe"), samples=20)

    def test_eval_tracks_bits(self):
        f = bb(SparsePolynomial(1, 1, {(1,): 1}))
        f.eval((1024,))
        assert f.max_result_bits == 11

    def test_point_length_checked(self):
        f = bb(elementary_symmetric(3, 2))
        with pytest.raises(ContractViolation):
            f.eval((1, 2))


def test_linear_form_point_and_zero():
    form = LinearForm((Fraction(1, 2), 0, -1))
    assert form.point() == (Fraction(1, 2), 0, -1)
    assert not form.is_zero()
    assert LinearForm((0, 0)).is_zero()


def test_decomposition_drops_zero_terms():
    g = WaringDecomposition(
        2, 2, (term(0, (1, 1), 2), term(1, (0, 0), 2), term(2, (1, 0), 2)), 1
    )
    assert len(g.terms) == 1


def test_decomposition_rejects_bad_terms():
    with pytest.raises(ContractViolation):
        WaringDecomposition(2, 2, (term(1, (1, 1, 1), 2),), 1)
    with pytest.raises(ContractViolation):
        WaringDecomposition(2, 2, (term(1, (1, 1), 3),), 1)


def test_random_point_helper_shapes():
    assert len(random_rational_point(4, seed=3)) == 4
