import math

import numpy as np
import pytest

from hypzero import (ClusterWarning, ParameterSet, companion_matrix,
                     find_zeros, gamma_recursive, jacobi_to_hypergeometric,
                     verify_zeroset, vieta_coefficients, zeroset_from_zeros)
from conftest import rel_err


class TestCompanion:
    def test_degree_one(self):
        assert np.array_equal(companion_matrix([1, -1]), [[1.0]])

    def test_z2_minus_one(self):
        vals = np.linalg.eigvals(companion_matrix([1, 0, -1]))
        assert sorted(vals.real) == pytest.approx([-1.0, 1.0])
        assert np.max(np.abs(vals.imag)) < 1e-14

    def test_complex_pair(self):
        vals = np.sort_complex(np.linalg.eigvals(companion_matrix([1, -2 / 3, 1 / 6])))
        expect = np.sort_complex([1 / 3 - 1j * math.sqrt(2) / 6,
                                  1 / 3 + 1j * math.sqrt(2) / 6])
        assert np.max(np.abs(vals - expect)) < 1e-14

    def test_requires_monic(self):
        with pytest.raises(ValueError):
            companion_matrix([2.0, 1.0])


class TestFindZeros:
    def test_single_zero(self):
        g = gamma_recursive(ParameterSet(N=1, alphas=(2.0,), betas=(5.0,)))
        zs = find_zeros(g)
        assert zs.zeros == pytest.approx([0.4])
        assert zs.min_separation == math.inf

    def test_quadratic_pair(self):
        zs = find_zeros(np.array([1, -2 / 3, 1 / 6], dtype=complex))
        expect = [1 / 3 - 1j * math.sqrt(2) / 6, 1 / 3 + 1j * math.sqrt(2) / 6]
        assert np.max(np.abs(zs.zeros - expect)) < 1e-15
        assert zs.min_separation == pytest.approx(math.sqrt(2) / 3)
        assert zs.polished

    def test_triple_zero_warns(self):
        with pytest.warns(ClusterWarning):
            zs = find_zeros(np.array([1, -3, 3, -1], dtype=complex))
        assert np.max(np.abs(zs.zeros - 1.0)) < 1e-3

    def test_deterministic_order(self):
        g = gamma_recursive(ParameterSet(N=6, alphas=(1.5,), betas=(2.5,)))
        a = find_zeros(g)
        b = find_zeros(g)
        assert np.array_equal(a.zeros, b.zeros)
        order = np.lexsort((a.zeros.imag, a.zeros.real))
        assert np.array_equal(order, np.arange(len(order)))

    def test_json_shape(self):
        zs = find_zeros(np.array([1, 0, -1], dtype=complex))
        doc = zs.to_json_dict()
        assert set(doc) == {"zeros", "min_separation", "residual_norm"}
        single = find_zeros(np.array([1, -1], dtype=complex))
        assert single.to_json_dict()["min_separation"] is None


class TestVerifyZeroset:
    def test_exact_zeros(self):
        zs = zeroset_from_zeros([1.0, -1.0])
        chk = verify_zeroset([1, 0, -1], zs)
        assert chk.max_residual == 0.0
        assert chk.coeff_error == 0.0

    def test_perturbed_simple_zero(self):
        zs = zeroset_from_zeros([1.0 + 1e-4])
        chk = verify_zeroset([1, -1], zs)
        assert chk.max_residual == pytest.approx(1e-4, rel=1e-10)

    def test_polished_pair(self):
        g = np.array([1, -2 / 3, 1 / 6], dtype=complex)
        chk = verify_zeroset(g, find_zeros(g))
        assert chk.max_residual <= 1e-14

    def test_vieta_reconstruction(self):
        zeros = np.array([0.5, -1.5, 2 + 1j], dtype=complex)
        coeffs = vieta_coefficients(zeros)
        # expand (z - 0.5)(z + 1.5)(z - 2 - i) by hand: e1, e2, e3
        e1 = zeros.sum()
        e2 = zeros[0] * zeros[1] + zeros[0] * zeros[2] + zeros[1] * zeros[2]
        e3 = zeros.prod()
        assert coeffs == pytest.approx([1.0, -e1, e2, -e3])


class TestSuiteInvariants:
    def test_vieta_round_trip(self, random_suite):
        worst = max(rel_err(vieta_coefficients(p.zs.zeros), p.bundle.gammas)
                    for p in random_suite)
        assert worst < 1e-9

    def test_conjugate_symmetry(self, random_suite):
        for p in random_suite:
            conj = np.sort_complex(np.conj(p.zs.zeros))
            assert np.max(np.abs(np.sort_complex(p.zs.zeros.copy()) - conj)) < 1e-10

    @pytest.mark.parametrize("alpha,beta,n", [(0.5, -0.3, 4), (2.0, 1.0, 7), (-0.6, 2.4, 10)])
    def test_jacobi_reality(self, alpha, beta, n):
        params = jacobi_to_hypergeometric(alpha, beta, n)
        zs = find_zeros(gamma_recursive(params))
        x = 1.0 - 2.0 / zs.zeros
        assert np.max(np.abs(x.imag)) < 1e-9
        assert np.all((x.real > -1.0) & (x.real < 1.0))
