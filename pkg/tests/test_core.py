import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypzero import (DegenerateBeta, MapSingularity, PairMismatch,
                     ParameterSet, ab_expand, alpha_coeffs, beta_coeffs,
                     cancel_pairs, coefficient_bundle, eval_monic,
                     eval_monic_derivative, gamma_closed, gamma_recursive,
                     jacobi_to_hypergeometric, pochhammer, x_of_z, z_of_x)
from conftest import rel_err


class TestPochhammer:
    @pytest.mark.parametrize("a", [0.0, 1.5, -2.7, 3 + 4j])
    def test_order_zero_is_one(self, a):
        assert pochhammer(a, 0) == 1

    def test_rising_product(self):
        assert pochhammer(2, 3) == 24

    def test_negative_integer_truncates(self):
        assert pochhammer(-3, 5) == 0

    @given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
           st.integers(min_value=0, max_value=12))
    @settings(max_examples=50, deadline=None)
    def test_recurrence(self, a, j):
        assert pochhammer(a, j + 1) == pytest.approx(pochhammer(a, j) * (a + j), rel=1e-12, abs=1e-12)

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            pochhammer(1.0, -1)


class TestParameterSet:
    def test_basic_properties(self):
        p = ParameterSet(N=3, alphas=(1.0, 2.0), betas=(0.5,))
        assert (p.p, p.q) == (2, 1)

    @pytest.mark.parametrize("bad_beta", [0.0, -1.0, -3.0, -2.0 + 1e-11j, 1e-12])
    def test_beta_guard_band(self, bad_beta):
        with pytest.raises(DegenerateBeta):
            ParameterSet(N=4, alphas=(), betas=(bad_beta,))

    def test_beta_outside_guard_band_accepted(self):
        ParameterSet(N=4, alphas=(), betas=(-1.5,))
        ParameterSet(N=4, alphas=(), betas=(-2.0 + 1e-3j,))
        # -N-1 is outside the guarded range
        ParameterSet(N=4, alphas=(), betas=(-5.0,))

    def test_invalid_degree(self):
        with pytest.raises(ValueError):
            ParameterSet(N=0)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            ParameterSet(N=2, alphas=(float("nan"),), betas=())

    def test_json_round_trip(self):
        p = ParameterSet(N=2, alphas=(1 + 2j,), betas=(3.0, 0.5 - 1j))
        blob = p.to_json()
        again = ParameterSet.from_json(blob)
        assert again == p
        doc = json.loads(blob)
        assert set(doc) == {"N", "alphas", "betas"}
        assert doc["alphas"] == [[1.0, 2.0]]


class TestGammaRoutes:
    def test_trivial_family_is_binomial(self):
        p = ParameterSet(N=3)
        assert np.allclose(gamma_closed(p), [1, -3, 3, -1], rtol=0, atol=0)

    def test_hand_evaluated_case(self):
        p = ParameterSet(N=2, alphas=(1.0,), betas=(3.0,))
        got = gamma_closed(p)
        assert got == pytest.approx([1.0, -2.0 / 3.0, 1.0 / 6.0])

    def test_gamma0_always_one(self, random_suite):
        for pipe in random_suite[:25]:
            assert gamma_closed(pipe.params)[0] == 1.0
            assert gamma_recursive(pipe.params)[0] == 1.0

    def test_routes_agree_on_hand_case(self):
        p = ParameterSet(N=2, alphas=(1.0,), betas=(3.0,))
        assert rel_err(gamma_recursive(p), gamma_closed(p)) < 1e-14

    def test_recursive_degree_one(self):
        assert np.array_equal(gamma_recursive(ParameterSet(N=1)), [1, -1])

    def test_recursion_tail_vanishes(self, random_suite):
        # the (m - N) factor kills the step at m = N for every family
        for pipe in random_suite[:25]:
            params = pipe.params
            tail = complex(params.N - params.N)
            for a in params.alphas:
                tail *= a + params.N
            assert tail * gamma_recursive(params)[-1] == 0.0

    def test_route_equivalence_suite(self, random_suite):
        worst = max(rel_err(gamma_closed(p.params), gamma_recursive(p.params))
                    for p in random_suite)
        assert worst < 1e-12

    def test_binomial_collapse_exact_to_n20(self):
        # recursion route stays exact in integer-valued arithmetic
        for n in range(1, 21):
            got = gamma_recursive(ParameterSet(N=n))
            expect = [(-1) ** m * math.comb(n, m) for m in range(n + 1)]
            assert all(g == e for g, e in zip(got, expect))
            assert rel_err(gamma_closed(ParameterSet(N=n)), expect) < 1e-13


class TestABExpansion:
    def test_p2_q1_explicit(self):
        a1, a2, b1 = 1.3, 2.5, 0.9
        p = ParameterSet(N=2, alphas=(a1, a2), betas=(b1,))
        a, b = ab_expand(p)
        assert a == pytest.approx([a1 * a2, -(a1 + a2), 1.0])
        assert b == pytest.approx([b1 - 1.0, -1.0])

    def test_p2_q2_b_formulas(self):
        b1, b2 = 2.2, 0.7
        b = beta_coeffs([b1, b2])
        assert b == pytest.approx([(1 - b1) * (1 - b2), 2 - b1 - b2, 1.0])

    def test_empty_product(self):
        assert np.array_equal(alpha_coeffs([]), [1.0])

    @given(st.lists(st.floats(min_value=0.5, max_value=3.0), min_size=0, max_size=3),
           st.lists(st.floats(min_value=0.5, max_value=3.0), min_size=0, max_size=3))
    @settings(max_examples=50, deadline=None)
    def test_leading_coefficients_exact(self, alphas, betas):
        a = alpha_coeffs(alphas)
        b = beta_coeffs(betas)
        assert a[-1] == (-1.0) ** len(alphas)
        assert b[-1] == (-1.0) ** len(betas)

    @given(st.lists(st.floats(min_value=-3.0, max_value=3.0), min_size=1, max_size=3))
    @settings(max_examples=50, deadline=None)
    def test_b_low_order_sums(self, betas):
        b = beta_coeffs(betas)
        b1 = np.prod([bb - 1.0 for bb in betas])
        assert abs(b[0] - b1) < 1e-13 * max(1.0, abs(b1))
        if len(betas) >= 2:
            b2 = -sum(np.prod([betas[k] - 1.0 for k in range(len(betas)) if k != j])
                      for j in range(len(betas)))
            assert abs(b[1] - b2) < 1e-13 * max(1.0, abs(b2))


class TestEvalMonic:
    def test_known_zero(self):
        assert eval_monic([1, -3, 3, -1], 1.0) == 0

    def test_constant_term(self):
        assert eval_monic([1, -2 / 3, 1 / 6], 0.0) == pytest.approx(1 / 6)

    def test_derivative_of_linear(self):
        for z in (0.0, 2.5, -1 + 1j):
            assert eval_monic_derivative([1, -1], z) == 1.0

    def test_derivative_matches_difference_quotient(self):
        g = np.array([1.0, -0.4, 0.3, 0.1], dtype=complex)
        h = 1e-7
        for z in (0.3, 1.2 - 0.5j):
            fd = (eval_monic(g, z + h) - eval_monic(g, z - h)) / (2 * h)
            assert eval_monic_derivative(g, z) == pytest.approx(fd, rel=1e-6)


class TestJacobiMap:
    def test_parameter_map(self):
        p = jacobi_to_hypergeometric(0.0, 0.0, 1)
        assert p.betas == (1.0,)
        assert p.alphas == (3.0,)

    @pytest.mark.parametrize("x", [-0.9, 0.0, 0.9])
    def test_maps_are_inverse(self, x):
        assert x_of_z(z_of_x(x)) == pytest.approx(x, abs=1e-14)

    @given(st.floats(min_value=-0.95, max_value=0.95))
    @settings(max_examples=50, deadline=None)
    def test_round_trip_property(self, x):
        assert x_of_z(z_of_x(x)) == pytest.approx(x, abs=1e-12)

    def test_pole_guards(self):
        with pytest.raises(MapSingularity):
            x_of_z(0.0)
        with pytest.raises(MapSingularity):
            z_of_x(1.0)

    def test_symmetric_degree_one_zero(self):
        # alpha = beta puts the single mapped node at the origin
        alpha = beta = 0.7
        p = jacobi_to_hypergeometric(alpha, beta, 1)
        zeta = p.alphas[0] / p.betas[0]
        assert x_of_z(zeta) == pytest.approx(0.0, abs=1e-14)


class TestCancelPairs:
    def test_drop_one_pair(self):
        p = ParameterSet(N=3, alphas=(1.1, 7.3), betas=(2.2, 7.3))
        reduced = cancel_pairs(p, 1)
        assert reduced == ParameterSet(N=3, alphas=(1.1,), betas=(2.2,))

    def test_identity(self):
        p = ParameterSet(N=3, alphas=(1.1,), betas=(2.2,))
        assert cancel_pairs(p, 0) is p

    def test_arity_bound(self):
        p = ParameterSet(N=3, alphas=(1.1, 7.3), betas=(2.2, 7.3))
        with pytest.raises(ValueError):
            cancel_pairs(p, 2)

    def test_mismatch(self):
        p = ParameterSet(N=3, alphas=(1.1, 7.3), betas=(2.2, 7.4))
        with pytest.raises(PairMismatch):
            cancel_pairs(p, 1)

    def test_same_coefficients(self):
        p = ParameterSet(N=4, alphas=(1.1, 7.3), betas=(2.2, 7.3))
        reduced = cancel_pairs(p, 1)
        assert rel_err(gamma_closed(p), gamma_closed(reduced)) < 1e-12


class TestCoefficientBundle:
    def test_cross_check_flag(self):
        bundle = coefficient_bundle(ParameterSet(N=5, alphas=(1.2,), betas=(2.0,)),
                                    cross_check=True)
        assert bundle.gammas[0] == 1.0
        assert bundle.N == 5
        assert (bundle.p, bundle.q) == (1, 1)
