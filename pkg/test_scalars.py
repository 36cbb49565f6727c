"""
Scalar Test Suite
Cyclotomic arithmetic, scalar parsing and exact linear algebra
"""

import os
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from scalars import (ONE, ZERO, Cyclotomic, CyclotomicOrderError, EchelonBasis, binomial, format_vector,
                     identity, inverse, is_zero, mat_mul, matrix, nullspace, parse_scalar, rank, equal)

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)
sixth_roots_field = st.lists(small_fractions, min_size=2, max_size=2).map(lambda cs: Cyclotomic(cs, 6))


class TestCyclotomic:
    """Roots of unity and field operations"""

    def test_root_of_unity_has_its_order(self):
        w = Cyclotomic.root_of_unity(3)
        assert w ** 3 == ONE
        assert w != ONE
        assert ONE + w + w ** 2 == ZERO

    def test_rational_values_collapse_to_order_one(self):
        i = Cyclotomic.root_of_unity(4)
        square = i * i
        assert square == -1
        assert square.is_rational()
        assert square.to_fraction() == Fraction(-1)

    def test_mixed_orders_meet_in_the_lcm_field(self):
        product = Cyclotomic.root_of_unity(4) * Cyclotomic.root_of_unity(3)
        assert product.order == 12
        assert product ** 12 == ONE
        assert product ** 6 != ONE

    def test_inverse_and_division(self):
        x = ONE + Cyclotomic.root_of_unity(5)
        assert x * x.inverse() == ONE
        assert (x / x) == ONE
        assert 1 / Cyclotomic.root_of_unity(7) == Cyclotomic.root_of_unity(7, 6)

    def test_zero_has_no_inverse(self):
        with pytest.raises(ZeroDivisionError):
            ZERO.inverse()

    def test_negative_powers(self):
        w = Cyclotomic.root_of_unity(8)
        assert w ** -1 == w ** 7
        assert w ** -8 == ONE

    def test_conjugate_inverts_roots(self):
        w = Cyclotomic.root_of_unity(6)
        assert w.conjugate() == w ** 5
        assert (w + w.conjugate()).is_rational()

    def test_normalized_trace(self):
        assert Cyclotomic.root_of_unity(4).trace() == 0
        assert Cyclotomic.root_of_unity(3).trace() == Fraction(-1, 2)
        assert Cyclotomic.rational(Fraction(2, 3)).trace() == Fraction(2, 3)

    def test_equal_values_hash_equal(self):
        half = Cyclotomic.rational(Fraction(1, 2))
        w = Cyclotomic.root_of_unity(3)
        assert hash(-(w + w ** 2) / 2) == hash(half)

    def test_order_cap_is_enforced(self):
        with pytest.raises(CyclotomicOrderError):
            Cyclotomic([0, 1], Cyclotomic.order_cap + 1)

    def test_floats_are_rejected(self):
        with pytest.raises(TypeError):
            Cyclotomic.coerce(0.5)

    def test_json_form(self):
        assert Cyclotomic.rational(Fraction(3, 4)).to_json() == "3/4"
        w = Cyclotomic.root_of_unity(4)
        assert Cyclotomic.from_json(w.to_json()) == w
        assert str(w) == "w4"

    @given(sixth_roots_field, sixth_roots_field, sixth_roots_field)
    @settings(max_examples=40, deadline=None)
    def test_field_axioms(self, a, b, c):
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == ZERO

    @given(sixth_roots_field)
    @settings(max_examples=40, deadline=None)
    def test_nonzero_elements_are_invertible(self, a):
        if a:
            assert a * a.inverse() == ONE


class TestScalarParsing:
    """JSON scalars"""

    def test_integers_and_fractions(self):
        assert parse_scalar(3) == 3
        assert parse_scalar("-3/4") == Fraction(-3, 4)

    def test_cyclotomic_objects(self):
        assert parse_scalar({"order": 4, "coeffs": [0, 1]}) == Cyclotomic.root_of_unity(4)

    @pytest.mark.parametrize("value", [True, "abc", "1/0", 0.5, [1, 2]])
    def test_invalid_scalars(self, value):
        with pytest.raises(ValueError):
            parse_scalar(value)

    def test_generalized_binomial(self):
        assert binomial(Fraction(1, 2), 2) == Fraction(-1, 8)
        assert binomial(Fraction(5), 2) == 10
        assert binomial(Fraction(-1), 3) == -1
        assert binomial(Fraction(2), -1) == 0
        assert binomial(Fraction(2), 3) == 0


class TestLinearAlgebra:
    """Exact matrices on object arrays"""

    @pytest.fixture
    def invertible(self):
        return matrix([[1, 2], [3, 4]])

    def test_inverse(self, invertible):
        assert equal(mat_mul(invertible, inverse(invertible)), identity(2))

    def test_singular_matrix(self):
        with pytest.raises(ValueError):
            inverse(matrix([[1, 2], [2, 4]]))

    def test_rank_and_nullspace(self):
        A = matrix([[1, 2], [2, 4]])
        assert rank(A) == 1
        kernel = nullspace(A)
        assert len(kernel) == 1
        assert kernel[0][0] == ONE
        assert kernel[0][1] == Fraction(-1, 2)
        assert is_zero(mat_mul(A, kernel[0]))

    def test_cyclotomic_entries(self):
        w = Cyclotomic.root_of_unity(3)
        A = matrix([[1, 0], [0, 1]])
        A[1, 1] = w
        assert equal(mat_mul(A, inverse(A)), identity(2))

    def test_echelon_basis_spans(self):
        basis = EchelonBasis()
        assert basis.add({'a': 1, 'b': 1})
        assert not basis.add({'a': 2, 'b': 2})
        assert basis.add({'b': 1})
        assert len(basis) == 2
        assert not basis.reduce({'a': 3, 'b': -1})

    def test_format_vector(self):
        assert format_vector(['e', 'h', 'f'], [1, 0, -1]) == "e-f"
        assert format_vector(['e', 'h', 'f'], [0, 2, 0]) == "2h"
        assert format_vector(['e'], [0]) == "0"
