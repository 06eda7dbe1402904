import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypzero import (CaseArityMismatch, DegenerateZeros, ParameterSet,
                     coefficient_bundle, f_closed, f_jacobian, f_recursive,
                     fg_vectors, find_zeros, g_closed, g_from_f, g_jacobian,
                     residual, residual_report, residual_special, sigma,
                     sigma_partial, sigma_table, zeroset_from_zeros)
from conftest import rel_err

PAIR = zeroset_from_zeros([1.0, 3.0])
TRIPLE = zeroset_from_zeros([1.0, 3.0, -2.0])

# distinct lattice points with spacing >= 0.5 give safely separated zeros
lattice_zeros = st.lists(
    st.tuples(st.integers(-8, 8), st.integers(-8, 8)), unique=True,
    min_size=1, max_size=8,
).map(lambda pts: zeroset_from_zeros([0.5 * a + 0.5j * b for a, b in pts]))


class TestSigma:
    def test_order_zero_counts_others(self, random_suite):
        for p in random_suite[:20]:
            for n in range(p.zs.n):
                assert sigma(p.zs, n, 0, 0) == p.zs.n - 1

    def test_two_term_sums(self):
        assert sigma(PAIR, 0, 1, 1) == pytest.approx(-1.5)
        assert sigma(PAIR, 1, 2, 2) == pytest.approx(0.25)

    def test_degenerate_zeros_rejected(self):
        clustered = zeroset_from_zeros([1.0, 1.0 + 1e-9])
        with pytest.raises(DegenerateZeros):
            sigma(clustered, 0, 1, 1)

    def test_table_matches_pointwise(self):
        table = sigma_table(TRIPLE, 3, 4)
        for n in range(3):
            for r in range(4):
                for rho in range(5):
                    assert table.value(n, r, rho) == pytest.approx(
                        sigma(TRIPLE, n, r, rho), rel=1e-13, abs=1e-13)
        assert np.all(table.values[:, 0, 0] == 2.0)

    @given(lattice_zeros)
    @settings(max_examples=40, deadline=None)
    def test_shift_identities(self, zs):
        table = sigma_table(zs, 4, 4)
        z = zs.zeros
        for r in range(1, 4):
            for rho in range(1, 5):
                lhs = table.values[:, r, rho]
                rhs = z * table.values[:, r - 1, rho] - table.values[:, r - 1, rho - 1]
                scale = np.maximum(1.0, np.abs(lhs))
                assert np.max(np.abs(lhs - rhs) / scale) < 1e-10
        for r in range(0, 4):
            for rho in range(1, 5):
                lhs = z * table.values[:, r, rho]
                rhs = table.values[:, r + 1, rho] + table.values[:, r, rho - 1]
                scale = np.maximum(1.0, np.abs(lhs))
                assert np.max(np.abs(lhs - rhs) / scale) < 1e-10


class TestSigmaPartial:
    def test_diagonal_case(self):
        for n in range(3):
            assert sigma_partial(TRIPLE, n, n, 1, 1) == pytest.approx(
                -sigma(TRIPLE, n, 1, 2), rel=1e-13)

    def test_equal_index_pair(self):
        # (r, rho) = (r, r) off-diagonal: r z_n z_m^(r-1) / (z_n - z_m)^(r+1)
        z = TRIPLE.zeros
        for r in (1, 2, 3):
            got = sigma_partial(TRIPLE, 0, 2, r, r)
            expect = r * z[0] * z[2] ** (r - 1) / (z[0] - z[2]) ** (r + 1)
            assert got == pytest.approx(expect, rel=1e-13)

    @pytest.mark.parametrize("r,rho", [(0, 1), (1, 1), (2, 2), (1, 2), (3, 4), (0, 0)])
    def test_finite_difference_oracle(self, r, rho):
        h = 1e-6
        for n in range(3):
            for m in range(3):
                zp = TRIPLE.zeros.copy()
                zm = TRIPLE.zeros.copy()
                zp[m] += h
                zm[m] -= h
                fd = (sigma(_raw(zp), n, r, rho) - sigma(_raw(zm), n, r, rho)) / (2 * h)
                assert sigma_partial(TRIPLE, n, m, r, rho) == pytest.approx(fd, abs=1e-7)


def _raw(zeros):
    """ZeroSet preserving the given order (finite differences pin labels)."""
    from hypzero.rootfind import ZeroSet, _separation
    z = np.asarray(zeros, dtype=complex)
    return ZeroSet(zeros=z, min_separation=_separation(z),
                   max_modulus=float(np.max(np.abs(z))), residual_norm=0.0)


class TestFTower:
    def test_first_is_zeros(self):
        assert np.array_equal(f_recursive(PAIR, 1)[1], PAIR.zeros)

    def test_single_zero_alternates(self):
        single = zeroset_from_zeros([1.7])
        fs = f_recursive(single, 5)
        for j in range(1, 6):
            assert fs[j][0] == pytest.approx((-1) ** (j + 1) * 1.7)

    def test_pair_hand_values(self):
        fs = f_recursive(PAIR, 4)
        assert fs[2] == pytest.approx([-4.0, 0.0])
        assert fs[3] == pytest.approx([10.0, -6.0])

    def test_closed_matches_hand_value(self):
        assert f_closed(PAIR, 2)[0] == pytest.approx(-4.0)

    def test_single_zero_closed(self):
        single = zeroset_from_zeros([1.7])
        assert f_closed(single, 3)[0] == pytest.approx(1.7)

    def test_closed_vs_recursive_random(self, random_suite):
        count = 0
        for p in random_suite:
            if p.zs.n > 10:
                continue
            fs = f_recursive(p.zs, 4)
            for j in (1, 2, 3, 4):
                assert rel_err(f_closed(p.zs, j), fs[j]) < 1e-10
            count += 1
            if count == 50:
                break
        assert count == 50


class TestGTower:
    def test_g0_is_ones(self):
        assert np.array_equal(g_from_f(PAIR), [1.0, 1.0])

    def test_g1_sigma_form(self, random_suite):
        for p in random_suite[:20]:
            fs = f_recursive(p.zs, 1)
            got = g_from_f(p.zs, fs[1])
            expect = (p.zs.n - 1) + 2.0 * np.array(
                [sigma(p.zs, n, 1, 1) for n in range(p.zs.n)])
            assert rel_err(got, expect) < 1e-12

    def test_empty_sum_for_single_zero(self):
        single = zeroset_from_zeros([1.7])
        fs = f_recursive(single, 3)
        for j in (1, 2, 3):
            assert g_from_f(single, fs[j])[0] == 0.0
        assert g_closed(single, 2)[0] == pytest.approx(0.0)

    def test_pair_hand_value(self):
        fs = f_recursive(PAIR, 1)
        assert g_from_f(PAIR, fs[1]) == pytest.approx([-2.0, 2.0])
        assert g_closed(PAIR, 1) == pytest.approx([-2.0, 2.0])

    def test_closed_vs_recursive_random(self, random_suite):
        for p in random_suite[:50]:
            fs = f_recursive(p.zs, 3)
            for j in (1, 2, 3):
                assert rel_err(g_closed(p.zs, j), g_from_f(p.zs, fs[j])) < 1e-10


class TestJacobians:
    def test_f1_is_identity(self):
        assert np.array_equal(f_jacobian(TRIPLE, 1), np.eye(3))
        assert np.array_equal(f_jacobian(TRIPLE, 1, method="closed"), np.eye(3))

    def test_g1_entries(self):
        got = g_jacobian(TRIPLE, 1, method="closed")
        z = TRIPLE.zeros
        for n in range(3):
            assert got[n, n] == pytest.approx(-2 * sigma(TRIPLE, n, 1, 2), rel=1e-12)
            for m in range(3):
                if m != n:
                    assert got[n, m] == pytest.approx(
                        2 * z[n] / (z[n] - z[m]) ** 2, rel=1e-12)

    @pytest.mark.parametrize("j", [1, 2, 3])
    def test_routes_agree(self, j, random_suite):
        for p in random_suite[:25]:
            closed_f = f_jacobian(p.zs, j, method="closed")
            assert rel_err(f_jacobian(p.zs, j), closed_f) < 1e-10
            closed_g = g_jacobian(p.zs, j, method="closed")
            assert rel_err(g_jacobian(p.zs, j), closed_g) < 1e-10

    @pytest.mark.parametrize("j", [1, 2, 3])
    def test_finite_difference_oracle(self, j):
        h = 1e-6

        def fd(fun):
            out = np.zeros((3, 3), dtype=complex)
            for m in range(3):
                zp = TRIPLE.zeros.copy()
                zm = TRIPLE.zeros.copy()
                zp[m] += h
                zm[m] -= h
                out[:, m] = (fun(_raw(zp)) - fun(_raw(zm))) / (2 * h)
            return out

        fd_f = fd(lambda zs: f_recursive(zs, j)[j])
        assert np.max(np.abs(f_jacobian(TRIPLE, j) - fd_f)) < 1e-6
        fd_g = fd(lambda zs: g_from_f(zs, f_recursive(zs, j)[j]))
        assert np.max(np.abs(g_jacobian(TRIPLE, j) - fd_g)) < 1e-6

    def test_bundle_builder(self):
        vecs = fg_vectors(TRIPLE, 3, 2, jacobians=True)
        assert set(vecs.f) == {1, 2, 3}
        assert set(vecs.g) == {0, 1, 2}
        assert set(vecs.f_jac) == {1, 2, 3}
        assert set(vecs.g_jac) == {1, 2}
        assert np.array_equal(vecs.f[1], TRIPLE.zeros)
        assert np.array_equal(vecs.g[0], np.ones(3))


class TestResidual:
    def test_degree_one_hand_case(self):
        params = ParameterSet(N=1, alphas=(2.0,), betas=(5.0,))
        bundle = coefficient_bundle(params)
        zs = zeroset_from_zeros([0.4])
        assert np.max(np.abs(residual(params, bundle, zs))) < 1e-15

    def test_suite_scaled_bound(self, random_suite):
        for p in random_suite:
            bound = 1e-8 * (1.0 + p.zs.max_modulus) ** (p.params.q + 1)
            assert np.max(np.abs(residual(p.params, p.bundle, p.zs))) < bound

    def test_detects_perturbed_zero(self, random_suite):
        p = random_suite[0]
        z = p.zs.zeros.copy()
        z[0] += 1e-3
        moved = _raw(z)
        assert np.max(np.abs(residual(p.params, p.bundle, moved))) > 1e-4

    def test_report_shape(self):
        params = ParameterSet(N=1, alphas=(2.0,), betas=(5.0,))
        bundle = coefficient_bundle(params)
        rep = residual_report("generic", residual(params, bundle, zeroset_from_zeros([0.4])))
        assert set(rep) == {"case", "max_abs", "per_n"}
        assert len(rep["per_n"]) == 1


class TestResidualSpecial:
    def test_p1q1_degree_one(self):
        params = ParameterSet(N=1, alphas=(2.0,), betas=(5.0,))
        zs = zeroset_from_zeros([0.4])
        assert residual_special("p1q1", params, zs) == pytest.approx([0.0])

    def test_jac1_coincides_with_p1q1(self):
        params = ParameterSet(N=4, alphas=(1.7,), betas=(2.3,))
        zs = find_zeros(coefficient_bundle(params).gammas)
        a = residual_special("p1q1", params, zs)
        b = residual_special("jac1", params, zs)
        assert np.max(np.abs(a - b)) < 1e-12

    def test_jac2_vanishes_on_plain_zeros(self):
        params = ParameterSet(N=3, alphas=(1.7,), betas=(2.3,))
        zs = find_zeros(coefficient_bundle(params).gammas)
        assert np.max(np.abs(residual_special("jac2", params, zs))) < 1e-8

    @pytest.mark.parametrize("case,p,q", [("p1q1", 1, 1), ("p2q1", 2, 1), ("p2q2", 2, 2)])
    def test_matches_generic(self, case, p, q, random_suite):
        hits = 0
        for pipe in random_suite:
            if (pipe.params.p, pipe.params.q) != (p, q):
                continue
            got = residual_special(case, pipe.params, pipe.zs)
            want = residual(pipe.params, pipe.bundle, pipe.zs)
            scale = max(1.0, float(np.max(np.abs(want))))
            assert np.max(np.abs(got - want)) / scale < 1e-10
            hits += 1
        assert hits > 0

    def test_arity_mismatch(self):
        params = ParameterSet(N=2, alphas=(1.0,), betas=(3.0,))
        zs = find_zeros(coefficient_bundle(params).gammas)
        with pytest.raises(CaseArityMismatch):
            residual_special("p2q2", params, zs)
        with pytest.raises(CaseArityMismatch):
            residual_special("nope", params, zs)
