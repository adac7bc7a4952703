import math

import numpy as np
import pytest

from jacobiweyl import (DeBrangesDescriptor, chain_inclusion_check,
                        db_inner_product, de_branges_e, embedding_check,
                        kernel_identity_defect, reproducing_kernel,
                        spectral_measure)
from jacobiweyl.debranges import de_branges_modulus_margin, e_modulus_squared
from jacobiweyl.errors import DegreeError
from jacobiweyl.lattice import phi_polynomials, spectral_bounds
from tests.conftest import random_model


class TestStructureFunction:
    def test_p3_site2_closed_form(self, p3):
        coeffs, window = p3
        z = 0.7 - 1.2j
        assert abs(de_branges_e(coeffs, window, 2, z) - (z + 1j * (z * z - 1))) < 1e-14

    def test_modulus_squared_positive(self, p3):
        coeffs, window = p3
        lams = np.linspace(-4, 4, 101)
        w = e_modulus_squared(coeffs, window, 2, lams)
        assert np.allclose(w, lams ** 4 - lams ** 2 + 1, atol=1e-10)
        assert np.min(w) > 0

    def test_imaginary_part_on_real_axis(self, p3):
        coeffs, window = p3
        lam = 0.83
        e_val = de_branges_e(coeffs, window, 2, lam)
        assert abs(e_val.imag - coeffs.a(2) * (lam * lam - 1)) < 1e-14

    def test_no_real_zero_random(self):
        rng = np.random.default_rng(71)
        for _ in range(5):
            coeffs, window = random_model(rng, int(rng.integers(2, 12)))
            n = int(rng.integers(window.n_left + 1, window.n_right - 1))
            desc = DeBrangesDescriptor(coeffs, window, n)
            assert desc.real_zero_margin() > 0

    def test_modulus_inequality_orientation(self, p3):
        # |E(z*, n)| > |E(z, n)| on the upper half-plane for this phi
        # orientation (the conjugate is the upper structure function)
        coeffs, window = p3
        rng = np.random.default_rng(72)
        for _ in range(10):
            z = complex(rng.uniform(-2, 2), rng.uniform(0.1, 2.0))
            assert de_branges_modulus_margin(coeffs, window, 2, z) > 0


class TestReproducingKernel:
    def test_p3_closed_form(self, p3):
        coeffs, window = p3
        zeta, z = 0.4 + 0.3j, -1.1 + 0.8j
        expected = 1.0 + np.conj(zeta) * z
        assert abs(reproducing_kernel(coeffs, window, 2, zeta, z) - expected) < 1e-14
        assert abs(reproducing_kernel(coeffs, window, 2, 0.0, z) - 1.0) < 1e-14

    def test_diagonal_nonnegative(self, p3):
        coeffs, window = p3
        for z in (1j, 0.3 - 0.7j, 2.0 + 0j):
            val = reproducing_kernel(coeffs, window, 3, z, z)
            assert abs(val.imag) < 1e-13 and val.real >= 0

    def test_hermitian(self, p3):
        coeffs, window = p3
        zeta, z = 0.5 + 1.1j, -0.2 + 0.4j
        k1 = reproducing_kernel(coeffs, window, 3, zeta, z)
        k2 = reproducing_kernel(coeffs, window, 3, z, zeta)
        assert abs(k1 - np.conj(k2)) < 1e-14

    def test_kernel_identity_random_windows(self):
        rng = np.random.default_rng(73)
        for _ in range(8):
            coeffs, window = random_model(rng, int(rng.integers(2, 20)))
            n = int(rng.integers(window.n_left + 1, window.n_right - 1))
            for _ in range(5):
                zeta = complex(rng.uniform(-2, 2), rng.uniform(-1.5, 1.5))
                z = complex(rng.uniform(-2, 2), rng.uniform(-1.5, 1.5))
                assert kernel_identity_defect(coeffs, window, n, zeta, z) < 1e-10


class TestInnerProduct:
    def test_p3_constant(self, p3):
        coeffs, window = p3
        desc = DeBrangesDescriptor(coeffs, window, 2)
        assert abs(db_inner_product(desc, [1.0], [1.0]).real - 1.0) < 1e-8

    def test_p3_odd_integrand(self, p3):
        coeffs, window = p3
        desc = DeBrangesDescriptor(coeffs, window, 2)
        assert abs(db_inner_product(desc, [1.0], [0.0, 1.0])) < 1e-10

    def test_p3_linear(self, p3):
        coeffs, window = p3
        desc = DeBrangesDescriptor(coeffs, window, 2)
        assert abs(db_inner_product(desc, [0.0, 1.0], [0.0, 1.0]).real - 1.0) < 1e-8

    def test_p3_quadratic_site3(self, p3):
        coeffs, window = p3
        desc = DeBrangesDescriptor(coeffs, window, 3)
        val = db_inner_product(desc, [0.0, 0.0, 1.0], [0.0, 0.0, 1.0]).real
        assert abs(val - 2.0) < 1e-7

    def test_degree_too_high_rejected(self, p3):
        coeffs, window = p3
        desc = DeBrangesDescriptor(coeffs, window, 2)
        with pytest.raises(DegreeError):
            db_inner_product(desc, [0.0, 0.0, 1.0], [1.0])

    def test_dense_quadrature_oracle(self, p3):
        # brute-force Simpson on a wide interval agrees with the adaptive value
        coeffs, window = p3
        desc = DeBrangesDescriptor(coeffs, window, 2)
        xs = np.linspace(-600.0, 600.0, 2_000_001)
        integrand = 1.0 / (xs ** 4 - xs ** 2 + 1)
        oracle = np.trapezoid(integrand, xs) / math.pi
        assert abs(db_inner_product(desc, [1.0], [1.0]).real - oracle) < 1e-6

    def test_orthonormal_family(self):
        rng = np.random.default_rng(74)
        coeffs, window = random_model(rng, 6)
        polys = phi_polynomials(coeffs, window)
        n = 4
        desc = DeBrangesDescriptor(coeffs, window, n)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                val = db_inner_product(desc, polys[i], polys[j]).real
                assert abs(val - (1.0 if i == j else 0.0)) < 1e-7

    def test_reproducing_property(self):
        rng = np.random.default_rng(75)
        coeffs, window = random_model(rng, 6)
        n = 4
        desc = DeBrangesDescriptor(coeffs, window, n)
        lo, hi = spectral_bounds(coeffs, window)
        for _ in range(3):
            w = rng.uniform(lo, hi)
            f = rng.normal(size=desc.max_degree + 1)
            k_poly = desc.kernel_polynomial(w)
            val = db_inner_product(desc, k_poly, f)
            assert abs(val - np.polyval(f[::-1], w)) < 1e-7


class TestEmbedding:
    def test_p3_examples(self, p3):
        coeffs, window = p3
        rho = spectral_measure(coeffs, window)
        d2 = DeBrangesDescriptor(coeffs, window, 2)
        for poly, expected in ([[1.0], 1.0], [[0.0, 1.0], 1.0]):
            nb, nr, resid = embedding_check(d2, poly, rho)
            assert abs(nb - expected) < 1e-7
            assert abs(nr - expected) < 1e-12
            assert resid < 1e-7
        d3 = DeBrangesDescriptor(coeffs, window, 3)
        nb, nr, resid = embedding_check(d3, [0.0, 0.0, 1.0], rho)
        assert abs(nb - 2.0) < 1e-7 and abs(nr - 2.0) < 1e-12

    def test_basis_embedding_random(self):
        rng = np.random.default_rng(76)
        coeffs, window = random_model(rng, 5)
        rho = spectral_measure(coeffs, window)
        polys = phi_polynomials(coeffs, window)
        for n in range(window.n_left + 1, window.n_right - 1):
            desc = DeBrangesDescriptor(coeffs, window, n)
            for m in range(1, window.index(n) + 1):
                _, _, resid = embedding_check(desc, polys[m], rho)
                assert resid < 1e-7


class TestChainInclusion:
    def test_p3_complement(self, p3):
        coeffs, window = p3
        report = chain_inclusion_check(coeffs, window, 2)
        assert report.codimension == 1
        assert report.dim_lower == 2 and report.dim_upper == 3
        # complement spanned by lambda^2 - c with fitted c = 1
        assert np.allclose(report.complement_coeffs, [-1.0, 0.0, 1.0], atol=1e-10)
        assert report.kernel_membership_defect < 1e-7
        assert report.shared_inner_product_defect < 1e-7
        assert report.complement_orthogonality_defect < 1e-7

    def test_leftmost_space_is_constants(self, p3):
        coeffs, window = p3
        desc = DeBrangesDescriptor(coeffs, window, 1)
        assert desc.max_degree == 0
        assert abs(db_inner_product(desc, [1.0], [1.0]).real - 1.0) < 1e-8

    def test_random_window_chain(self):
        rng = np.random.default_rng(77)
        coeffs, window = random_model(rng, 5)
        report = chain_inclusion_check(coeffs, window, 3)
        assert report.codimension == 1
        assert report.shared_inner_product_defect < 1e-8
