"""
Toroidal Algebra Test Suite
Loop elements, the twisted subalgebra τ, the untwisted L and the mode commutator
"""

import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from formal import Window
from liealg import decompose, preset, preset_automorphism, validate_family
from toroidal import NotHomogeneousError, ToroidalAlgebra, check_mode_commutator, mode_grid

SMALL_WINDOW = Window([(-1, 1), (-1, 1)])


@pytest.fixture(scope="module")
def sl2():
    return preset('sl2')


@pytest.fixture(scope="module")
def decomposition(sl2):
    family = validate_family(sl2, [preset_automorphism(sl2, 'chevalley_involution'),
                                   preset_automorphism(sl2, 'sign')])
    return decompose(sl2, family)


@pytest.fixture(scope="module")
def tor(decomposition):
    return ToroidalAlgebra(decomposition)


@pytest.fixture(scope="module")
def tor_L(decomposition):
    return ToroidalAlgebra(decomposition, 1)


class TestToroidalElements:
    """Construction and arithmetic of loop elements"""

    def test_tau_component_respects_the_grading(self, tor, sl2):
        h = sl2.basis_vector(1)
        assert tor.tau_component(h, Fraction(1, 2), (0,))
        assert not tor.tau_component(h, 0, (0,))
        assert not tor.tau_component(h, Fraction(1, 2), (1,))

    def test_tau_needs_the_t0_denominator(self, tor, sl2):
        with pytest.raises(ValueError):
            tor.tau_component(sl2.basis_vector(1), Fraction(1, 3), (0,))

    def test_loop_component(self, tor_L, sl2):
        e = sl2.basis_vector(0)
        x = tor_L.loop_component(e, 1, (1,))
        assert x
        assert tor_L.is_in_loop_subalgebra(x)
        with pytest.raises(ValueError):
            tor_L.loop_component(e, Fraction(1, 2), (0,))

    def test_membership(self, tor, sl2):
        x = tor.tau_component(sl2.basis_vector(0), Fraction(3, 2), (1,))
        assert tor.is_in_tau(x)
        assert not tor.is_in_tau(tor.generator(1, 0, (0,)))

    def test_arithmetic(self, tor):
        x = tor.generator(1, 1, (0,))
        assert x - x == tor.zero()
        assert x + x == x.scale(2)
        assert not (x - x)

    def test_describe(self, tor):
        assert tor.describe(tor.central(1)) == "1c"
        assert tor.describe(tor.zero()) == "0"
        assert tor.describe(tor.generator(1, 1, (0,))) == "(h)⊗t0^1/2t^[0]"


class TestBracket:
    """Brackets on τ"""

    def test_heisenberg_central_term(self, tor):
        x = tor.generator(1, 1, (0,))
        y = tor.generator(1, -1, (0,))
        assert tor.bracket(x, y) == tor.central(1)
        assert tor.bracket(y, x) == tor.central(-1)

    def test_antisymmetry_on_generators(self, tor):
        gens = [tor.generator(idx, p, (m,)) for idx in range(3) for p in (-1, 1, 2) for m in (-1, 0)]
        for x in gens:
            for y in gens:
                assert tor.bracket(x, y) == -tor.bracket(y, x)

    def test_tau_is_a_subalgebra(self, tor, sl2):
        elements = [tor.tau_component(sl2.basis_vector(i), p0, (m,))
                    for i in range(3) for p0 in (Fraction(-1, 2), 0, Fraction(1, 2), 1) for m in (-1, 0, 1)]
        for x in elements:
            for y in elements:
                z = tor.bracket(x, y)
                assert tor.is_in_tau(z)

    def test_no_central_term_away_from_zero_weight(self, tor):
        x = tor.generator(1, 1, (1,))
        y = tor.generator(1, -1, (0,))
        assert tor.bracket(x, y) == tor.zero()


class TestModeCommutator:
    """[a^τ(p0, m), b^τ(q0, q)] against the generating-function coefficients"""

    def test_grid_size(self):
        assert len(list(mode_grid(2, 1, 1, 1))) == 15

    @pytest.mark.parametrize("i,j", [(0, 0), (0, 2), (1, 1), (1, 2), (2, 0)])
    def test_eigenbasis_pairs_pass(self, tor, decomposition, i, j):
        report = check_mode_commutator(tor, decomposition.basis[i], decomposition.basis[j], SMALL_WINDOW)
        assert report.checked == 15 * 15
        assert report.passed, report.failures[:3]

    def test_exponents_up_to_four(self, tor, decomposition):
        report = check_mode_commutator(tor, decomposition.basis[1], decomposition.basis[1], Window([(-4, 4), (-4, 4)]))
        assert report.checked == (17 * 9) ** 2
        assert report.passed, report.failures[:3]

    def test_central_term_at_opposite_modes(self, tor, decomposition):
        # [h(1/2), h(-1/2)] = 1/2 <h,h> c
        h = decomposition.basis[1]
        assert tor.bracket(tor.tau_component(h, Fraction(1, 2), (0,)), tor.tau_component(h, Fraction(-1, 2), (0,))) \
            == tor.central(Fraction(1, 2) * decomposition.algebra.form(h, h))
        report = check_mode_commutator(tor, h, h, Window([(-Fraction(1, 2), Fraction(1, 2)), (0, 0)]))
        assert report.checked == 9
        assert report.passed, report.failures

    def test_inhomogeneous_elements_are_refused(self, tor, sl2):
        with pytest.raises(NotHomogeneousError):
            check_mode_commutator(tor, sl2.basis_vector(0), sl2.basis_vector(1), SMALL_WINDOW)

    def test_mutated_table_is_detected(self, decomposition, sl2):
        mutated = ToroidalAlgebra(decomposition.with_algebra(sl2.mutate(0, 2, 1)))
        report = check_mode_commutator(mutated, decomposition.basis[0], decomposition.basis[2], SMALL_WINDOW)
        assert not report.passed
        assert report.failures[0]['lhs'] != report.failures[0]['rhs']
