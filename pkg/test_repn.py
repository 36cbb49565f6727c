"""
Module Test Suite
PBW bases of the truncated modules W and V_L, the loop action and lifted automorphisms
"""

import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from liealg import decompose, preset, preset_automorphism, validate_family
from repn import (VACUUM, ModuleCapError, OperatorMatrix, basis_vector, combine, induce_twisted_vacuum,
                  induce_vacuum, lift_automorphism, vectors_equal)
from scalars import ONE
from toroidal import ToroidalAlgebra

H_HALF = (-1, (0,), 1)


@pytest.fixture(scope="module")
def decomposition():
    g = preset('sl2')
    family = validate_family(g, [preset_automorphism(g, 'chevalley_involution'), preset_automorphism(g, 'sign')])
    return decompose(g, family)


@pytest.fixture(scope="module")
def tor(decomposition):
    return ToroidalAlgebra(decomposition)


@pytest.fixture(scope="module")
def tor_L(decomposition):
    return ToroidalAlgebra(decomposition, 1)


class TestSparseVectors:
    def test_combine_cancels(self):
        v = basis_vector(VACUUM)
        assert combine((ONE, v), (-ONE, v)) == {}
        assert vectors_equal(combine((2, v)), {VACUUM: ONE * 2})


class TestTwistedVacuumModule:
    """W = U(τ) ⊗_{τ^{>=0}} C with c acting by ℓ"""

    @pytest.fixture
    def narrow(self, tor):
        return induce_twisted_vacuum(tor, 1, 1, 0)

    @pytest.fixture
    def wide(self, tor):
        return induce_twisted_vacuum(tor, 1, 1, 1)

    def test_graded_dimensions(self, narrow, wide):
        assert narrow.graded_dims() == {Fraction(0): 1, Fraction(1, 2): 1, Fraction(1): 1}
        assert wide.graded_dims() == {Fraction(0): 1, Fraction(1, 2): 3, Fraction(1): 8}

    def test_vacuum_comes_first(self, wide):
        assert wide.basis()[0] == VACUUM
        assert wide.label(VACUUM) == "|0>"

    def test_creation_generators(self, narrow):
        assert narrow.creation_generators() == [H_HALF]

    def test_annihilation_gives_the_central_term(self, narrow, tor):
        v = basis_vector(((H_HALF,), -1))
        result = narrow.act(tor.generator(1, 1, (0,)), v)
        assert result.valid
        assert vectors_equal(result.vector, {VACUUM: ONE})

    def test_positive_modes_kill_the_vacuum(self, narrow, tor):
        assert narrow.act(tor.generator(1, 1, (0,)), basis_vector(VACUUM)).vector == {}

    def test_leaving_the_box_is_flagged(self, narrow, tor):
        top = basis_vector(((H_HALF, H_HALF), -1))
        result = narrow.act(tor.generator(1, -1, (0,)), top)
        assert not result.valid
        assert result.vector

    def test_heisenberg_relation_on_the_truncation(self, narrow, tor):
        X = narrow.operator_matrix(tor.generator(1, 1, (0,)))
        Y = narrow.operator_matrix(tor.generator(1, -1, (0,)))
        identity = OperatorMatrix({mono: basis_vector(mono) for mono in narrow.basis()})
        assert X @ Y - Y @ X == identity

    def test_level_scales_the_central_term(self, tor):
        W2 = induce_twisted_vacuum(tor, 2, 1, 0)
        result = W2.act(tor.central(1), basis_vector(VACUUM))
        assert vectors_equal(result.vector, {VACUUM: ONE * 2})

    def test_cap_too_small(self, tor):
        with pytest.raises(ModuleCapError):
            induce_twisted_vacuum(tor, 1, Fraction(1, 4), 0)

    def test_dump_basis(self, narrow):
        data = narrow.dump_basis()
        assert data['module'] == 'W'
        assert len(data['basis']) == 3
        assert data['graded_dims'] == {'0': 1, '1/2': 1, '1': 1}


class TestVacuumModule:
    """V_L(ℓ, 0), induced from g ⊕ C with g in degree 1"""

    @pytest.fixture
    def V(self, tor_L):
        return induce_vacuum(tor_L, 1, 1, 0)

    def test_graded_dimensions(self, V):
        assert V.graded_dims() == {Fraction(0): 1, Fraction(1): 4}

    def test_zero_modes_act_by_the_bracket(self, V, tor_L, decomposition):
        h = decomposition.algebra.basis_vector(1)
        x = tor_L.loop_component(h, 0, (0,))
        # [h, e-f] = 2(e+f)
        result = V.act(x, basis_vector(((), 0)))
        assert vectors_equal(result.vector, {((), 2): ONE * 2})

    def test_first_modes_act_by_the_form(self, V, tor_L):
        result = V.act(tor_L.generator(1, 1, (0,)), basis_vector(((), 1)))
        assert vectors_equal(result.vector, {VACUUM: ONE * 2})

    def test_seed_needs_degree_one(self, tor_L):
        with pytest.raises(ModuleCapError):
            induce_vacuum(tor_L, 1, Fraction(1, 2), 0)

    def test_wrong_loop_algebra(self, tor):
        with pytest.raises(ValueError):
            induce_vacuum(tor, 1, 1, 0)


class TestLiftedAutomorphisms:
    """σ̃_i on W (i >= 1) and on V_L"""

    @pytest.fixture
    def wide(self, tor):
        return induce_twisted_vacuum(tor, 1, 1, 1)

    def test_sigma_zero_does_not_lift_to_w(self, wide):
        with pytest.raises(ValueError):
            lift_automorphism(wide, 0)

    def test_unknown_index(self, wide):
        with pytest.raises(ValueError):
            lift_automorphism(wide, 5)

    def test_orders_on_the_truncation(self, wide, tor_L):
        assert lift_automorphism(wide, 1).order_on_truncation() == 2
        V = induce_vacuum(tor_L, 1, 1, 1)
        assert lift_automorphism(V, 0).order_on_truncation() == 2

    def test_eigenvalues_on_creation_monomials(self, wide):
        sigma1 = lift_automorphism(wide, 1)
        fixed = basis_vector(((H_HALF,), -1))
        assert vectors_equal(sigma1.apply(fixed).vector, fixed)
        flipped = basis_vector((((-1, (1,), 2),), -1))
        assert vectors_equal(sigma1.apply(flipped).vector, combine((-ONE, flipped)))

    def test_lift_intertwines_the_action(self, wide, tor):
        sigma1 = lift_automorphism(wide, 1)
        for gen in wide.creation_generators():
            x = tor.generator(gen[2], gen[0], gen[1])
            lhs = sigma1.apply(wide.act(x, basis_vector(VACUUM)).vector).vector
            rhs = wide.act(sigma1.image_of_generator(gen), sigma1.apply(basis_vector(VACUUM)).vector).vector
            assert vectors_equal(lhs, rhs)
