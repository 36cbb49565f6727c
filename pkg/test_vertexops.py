"""
Vertex Operator Test Suite
Operator-valued series on W, locality orders, Y_E products and closure generation
"""

import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from formal import Window
from repn import VACUUM, basis_vector, vectors_equal
from scalars import ONE
from verify import Scenario
from vertexops import (METHODS, ClassError, ClosureCaps, CombinationSeries, CurrentSeries, IdentitySeries,
                       LocalityWindowError, NotLocalError, ProductSeries, VertexOperatorMap, find_locality_order,
                       generate_closure, sigma, twisted_Y)

H_HALF = (-1, (0,), 1)


@pytest.fixture(scope="module")
def scenario():
    return Scenario.from_presets(degree_cap=2, weight_cap=1)


@pytest.fixture(scope="module")
def W(scenario):
    return scenario.W


@pytest.fixture(scope="module")
def h(W):
    return CurrentSeries(W, 1)


class TestSeries:
    """Identity, currents and combinations"""

    def test_identity_series(self, W):
        one = IdentitySeries(W)
        vac = basis_vector(VACUUM)
        assert vectors_equal(one.mode(-1, (0,), vac).vector, vac)
        assert one.mode(0, (0,), vac).vector == {}
        assert one.mode(-1, (1,), vac).vector == {}

    def test_current_class_and_modes(self, h):
        assert h.klass == 1
        assert h.supports(Fraction(1, 2))
        assert not h.supports(Fraction(0))
        assert h.modes(1) == [Fraction(-1, 2), Fraction(1, 2)]

    def test_current_creates_from_the_vacuum(self, h):
        value = h.mode(Fraction(-1, 2), (0,), basis_vector(VACUUM))
        assert value.valid
        assert vectors_equal(value.vector, basis_vector(((H_HALF,), -1)))

    def test_current_outside_its_class_vanishes(self, h):
        assert h.mode(Fraction(-1), (0,), basis_vector(VACUUM)).vector == {}

    def test_sigma_multiplies_by_the_class_root(self, h):
        value = sigma(h).mode(Fraction(-1, 2), (0,), basis_vector(VACUUM))
        assert vectors_equal(value.vector, {((H_HALF,), -1): -ONE})

    def test_mixed_combination_has_no_class(self, W, h):
        mixed = CombinationSeries(W, [(1, h), (1, CurrentSeries(W, 0))])
        assert mixed.klass is None
        with pytest.raises(ClassError):
            ProductSeries(mixed, h, 0, (0,), 2)

    def test_materialize(self, W):
        series = IdentitySeries(W).materialize(Window([(-2, 2), (-1, 1)]), [VACUUM])
        assert len(series) == 1
        coeff = series.coefficient((0, 0))
        assert vectors_equal(coeff.columns[VACUUM], basis_vector(VACUUM))


class TestLocality:
    """Least k with (x0-y0)^k [A(x0), B(y0)] = 0 on the window"""

    def test_heisenberg_current_has_order_two(self, h):
        assert find_locality_order(h, h) == 2

    def test_identity_commutes(self, W, h):
        assert find_locality_order(IdentitySeries(W), h) == 0

    def test_cap_is_enforced(self, h):
        with pytest.raises(NotLocalError):
            find_locality_order(h, h, cap=1)

    def test_empty_probe_set(self, h):
        with pytest.raises(LocalityWindowError):
            find_locality_order(h, h, probes=[])


class TestProducts:
    """Y_E products of the Heisenberg current with itself"""

    @pytest.mark.parametrize("method", METHODS)
    def test_first_product_is_the_pairing(self, h, method):
        product = ProductSeries(h, h, 1, (0,), 2, method)
        value = product.mode(-1, (0,), basis_vector(VACUUM))
        assert value.valid
        assert vectors_equal(value.vector, {VACUUM: ONE * 2})

    def test_zeroth_product_is_the_bracket(self, h):
        product = ProductSeries(h, h, 0, (0,), 2)
        assert product.mode(-1, (0,), basis_vector(VACUUM)).vector == {}

    def test_products_past_the_order_vanish(self, h):
        product = ProductSeries(h, h, 2, (0,), 2)
        assert product.mode(-1, (0,), basis_vector(VACUUM)).vector == {}

    def test_unknown_method(self, h):
        with pytest.raises(ValueError):
            ProductSeries(h, h, 0, (0,), 2, 'contour')


class TestVertexOperatorMap:
    """Y_W on V_L monomials"""

    def test_vacuum_and_generators(self, scenario, W):
        assert isinstance(twisted_Y(scenario.V_L, basis_vector(VACUUM), W), IdentitySeries)
        current = twisted_Y(scenario.V_L, basis_vector(((), 1)), W)
        assert isinstance(current, CurrentSeries) and current.idx == 1

    def test_creation_monomials_become_products(self, scenario, W):
        mono = (((-1, (0,), 1),), 1)
        series = twisted_Y(scenario.V_L, basis_vector(mono), W)
        assert isinstance(series, ProductSeries)
        assert series.m0 == -1 and series.k == 2

    def test_maps_are_cached_per_target(self, scenario, W):
        v = basis_vector(((), 0))
        assert twisted_Y(scenario.V_L, v, W) is twisted_Y(scenario.V_L, v, W)

    def test_maps_live_on_the_target(self, scenario, W):
        twisted_Y(scenario.V_L, basis_vector(((), 2)), W, 'residue')
        vertex_map = W.vertex_maps[(id(scenario.V_L), 'residue')]
        assert vertex_map.source is scenario.V_L
        assert vertex_map.target is W and vertex_map.method == 'residue'
        assert '_vertex_maps' not in vars(W)

    def test_source_must_be_v_l(self, W):
        with pytest.raises(ValueError):
            VertexOperatorMap(W, W)


class TestClosure:
    """Closure of the Heisenberg current"""

    def test_heisenberg_closure(self, W, h):
        report = generate_closure([h], ClosureCaps(depth=2, t_bound=0, mode_bound=1, max_members=6))
        assert [s.label for s in report.members] == ['1', 'h']
        assert report.closed
        assert report.orders[('h', 'h')] == 2
        assert report.to_json()['closed'] is True

    def test_needs_generators(self):
        with pytest.raises(ValueError):
            generate_closure([])
