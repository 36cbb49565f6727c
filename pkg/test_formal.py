"""
Formal Series Test Suite
Windows, truncation flags, series algebra and the binomial and delta expansions
"""

import os
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from formal import (FormalSeries, IncompatibleSeriesError, Window, WindowError, binomial_expand, delta_expand,
                    delta_series)
from scalars import ONE, ZERO, Cyclotomic

WINDOW = Window([(-2, 2), (-1, 1)])

terms = st.dictionaries(
    keys=st.tuples(st.integers(-2, 2), st.integers(-1, 1)),
    values=st.integers(-3, 3),
    max_size=6,
)


def series_from(raw):
    return FormalSeries.toroidal(2, 1, WINDOW,
                                 {(Fraction(k, 2), Fraction(j)): Cyclotomic.rational(c) for (k, j), c in raw.items()})


class TestWindow:
    def test_empty_bound_is_rejected(self):
        with pytest.raises(WindowError):
            Window([(1, 0)])

    def test_contains_is_inclusive(self):
        assert WINDOW.contains((Fraction(2), Fraction(-1)))
        assert not WINDOW.contains((Fraction(5, 2), Fraction(0)))

    def test_intersect(self):
        assert WINDOW.intersect(Window([(0, 5), (-3, 0)])) == Window([(0, 2), (-1, 0)])
        with pytest.raises(WindowError):
            WINDOW.intersect(Window([(0, 1)]))


class TestFormalSeries:
    """Term bookkeeping and algebra"""

    @pytest.fixture
    def half(self):
        return FormalSeries.toroidal(2, 1, WINDOW, {(Fraction(1, 2), 0): ONE})

    def test_fractional_exponents(self, half):
        assert half.coefficient((Fraction(1, 2), 0)) == ONE
        assert half.coefficient((0, 0)) == ZERO
        assert half.variables == ('x0', 'x1')
        assert half.N == 2 and half.r == 1

    def test_exponent_must_fit_the_denominator(self, half):
        with pytest.raises(ValueError):
            half.add_term((Fraction(1, 3), 0), ONE)

    def test_terms_outside_the_window_set_the_flag(self, half):
        assert not half.truncated
        assert not half.add_term((3, 0), ONE)
        assert half.truncated

    def test_coefficients_outside_the_window_are_refused(self, half):
        with pytest.raises(WindowError):
            half.coefficient((3, 0))

    def test_cancelling_terms_disappear(self, half):
        half.add_term((Fraction(1, 2), 0), -ONE)
        assert not half
        assert len(half) == 0

    def test_product(self, half):
        square = half * half
        assert square.coefficient((1, 0)) == ONE
        assert len(square) == 1

    def test_product_past_the_window_truncates(self):
        edge = FormalSeries.toroidal(2, 1, WINDOW, {(2, 0): ONE})
        assert (edge * edge).truncated

    def test_derivative(self, half):
        assert half.derivative('x0').coefficient((Fraction(-1, 2), 0)) == Fraction(1, 2)

    def test_twist_multiplies_by_powers_of_zeta(self, half):
        twisted = half.twist('x0', Cyclotomic.root_of_unity(2))
        assert twisted.coefficient((Fraction(1, 2), 0)) == -1

    def test_residue(self):
        series = FormalSeries.toroidal(2, 1, WINDOW, {(-1, 1): Cyclotomic.rational(3), (0, 1): ONE})
        res = series.residue('x0')
        assert res.variables == ('x1',)
        assert res.coefficient((1,)) == 3
        assert len(res) == 1

    def test_incompatible_series(self, half):
        other = FormalSeries.toroidal(3, 1, WINDOW)
        with pytest.raises(IncompatibleSeriesError):
            half + other

    def test_different_windows_meet_on_the_intersection(self, half):
        narrow = FormalSeries.toroidal(2, 1, Window([(0, 1), (-1, 1)]), {(1, 0): ONE})
        total = half + narrow
        assert total.window == Window([(0, 1), (-1, 1)])
        assert total.truncated
        assert total.coefficient((Fraction(1, 2), 0)) == ONE
        assert total.coefficient((1, 0)) == ONE
        product = narrow * half
        assert product.window == total.window and product.truncated
        assert len(product) == 0

    def test_terms_outside_the_intersection_are_dropped(self):
        wide = FormalSeries.toroidal(2, 1, WINDOW, {(-2, 0): ONE, (0, 0): ONE})
        narrow = FormalSeries.toroidal(2, 1, Window([(-1, 2), (-1, 1)]))
        total = wide + narrow
        assert len(total) == 1
        assert total.truncated
        assert not wide.truncated

    def test_disjoint_windows_are_refused(self, half):
        far = FormalSeries.toroidal(2, 1, Window([(3, 4), (-1, 1)]))
        with pytest.raises(IncompatibleSeriesError):
            half * far

    def test_json_form(self, half):
        data = half.to_json()
        assert data['variables'] == ['x0', 'x1']
        assert data['terms'] == [[['1/2', '0'], '1']]
        assert data['truncated'] is False

    @given(terms, terms)
    @settings(max_examples=40, deadline=None)
    def test_addition_commutes(self, a, b):
        assert series_from(a) + series_from(b) == series_from(b) + series_from(a)

    @given(terms, terms, terms)
    @settings(max_examples=30, deadline=None)
    def test_product_distributes(self, a, b, c):
        A, B, C = series_from(a), series_from(b), series_from(c)
        assert A * (B + C) == A * B + A * C


class TestExpansions:
    """Binomial and delta-function expansions"""

    def test_polynomial_binomial_is_exact(self):
        series = binomial_expand(2, 'x', 'y', Window([(-5, 5), (0, 5)]))
        assert series.coefficient((2, 0)) == 1
        assert series.coefficient((1, 1)) == 2
        assert series.coefficient((0, 2)) == 1
        assert len(series) == 3
        assert not series.truncated

    def test_negative_power_expands_in_the_second_variable(self):
        series = binomial_expand(-1, 'x', 'y', Window([(-5, 5), (0, 3)]))
        assert series.coefficient((-3, 2)) == 1
        assert series.coefficient((-2, 1)) == -1
        assert series.truncated

    def test_fractional_power(self):
        series = binomial_expand(Fraction(1, 2), 'x', 'y', Window([(-5, 5), (0, 2)]), sign=-1)
        assert series.denominators == (2, 1)
        assert series.coefficient((Fraction(-3, 2), 2)) == Fraction(-1, 8)
        assert series.coefficient((Fraction(-1, 2), 1)) == Fraction(-1, 2)

    def test_delta_series_is_diagonal(self):
        delta = delta_series('z1', 'z0', 0, Window([(-3, 3), (-3, 3)]))
        assert delta.coefficient((-1, 0)) == 1
        assert delta.coefficient((0, -1)) == 1
        assert delta.coefficient((0, 0)) == 0
        assert delta.truncated

    def test_delta_with_fractional_twist(self):
        delta = delta_series('z1', 'z0', Fraction(1, 2), Window([(-3, 3), (-3, 3)]))
        assert delta.coefficient((Fraction(-3, 2), Fraction(1, 2))) == 1
        assert delta.coefficient((Fraction(-1, 2), Fraction(-1, 2))) == 1

    def test_delta_expansion_of_a_difference(self):
        delta = delta_expand(0, Window([(-3, 3), (-3, 3), (0, 2)]))
        assert delta.variables == ('z0', 'z1', 'z2')
        # z0^-1 (z1 - z2)^0 term, then z0^-2 (z1 - z2)^1 = z0^-2 z1 - z0^-2 z2
        assert delta.coefficient((-1, 0, 0)) == 1
        assert delta.coefficient((-2, 1, 0)) == 1
        assert delta.coefficient((-2, 0, 1)) == -1
        # (z1 - z2)^-1 expanded in nonnegative powers of z2
        assert delta.coefficient((0, -2, 1)) == 1
