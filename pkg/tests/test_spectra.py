import numpy as np
import pytest

from jacobiweyl import (CoefficientModel, LatticeWindow, convergence_exponent,
                        discreteness_probe, eigen_tridiagonal, genus,
                        norming_constants, restriction_spectra,
                        spectral_measure)
from jacobiweyl.errors import InterlacingError, JacobiWeylError
from jacobiweyl.spectra import SpectralMeasure, check_interlacing
from tests.conftest import SQRT2, random_model


class TestEigenTridiagonal:
    def test_single_site(self):
        coeffs = CoefficientModel.table([1.0, 1.0], [0.0, 5.0, 0.0], origin=0)
        window = LatticeWindow(0, 2)
        spec = eigen_tridiagonal(coeffs, window)
        assert np.allclose(spec.eigenvalues, [5.0])

    def test_two_sites_free(self, free):
        spec = eigen_tridiagonal(free, LatticeWindow(0, 3))
        assert np.allclose(spec.eigenvalues, [-1.0, 1.0], atol=1e-14)

    def test_three_sites_free(self, p3):
        spec = eigen_tridiagonal(*p3)
        assert np.allclose(spec.eigenvalues, [-SQRT2, 0.0, SQRT2], atol=1e-14)

    def test_matches_numpy_oracle(self):
        rng = np.random.default_rng(21)
        for _ in range(12):
            coeffs, window = random_model(rng, int(rng.integers(2, 40)))
            spec = eigen_tridiagonal(coeffs, window, vectors=True)
            d = np.array([coeffs.b(n) for n in window.interior()])
            e = np.array([coeffs.a(n) for n in window.interior()[:-1]])
            mat = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
            w_ref, v_ref = np.linalg.eigh(mat)
            assert np.max(np.abs(spec.eigenvalues - w_ref)) < 1e-12 * max(
                1.0, np.max(np.abs(w_ref)))
            # orthonormality of our vectors
            gram = spec.eigenvectors.T @ spec.eigenvectors
            assert np.max(np.abs(gram - np.eye(d.size))) < 1e-12
            assert np.max(spec.residuals) < 1e-12 * max(1.0, np.max(np.abs(w_ref)))


class TestRestrictionSpectra:
    def test_p3_site3(self, p3):
        coeffs, window = p3
        mu, nu = restriction_spectra(coeffs, window, 3)
        assert np.allclose(mu, [-1.0, 1.0])
        assert np.allclose(nu, [-SQRT2, 0.0, SQRT2])

    def test_interlacing_order(self, p3):
        coeffs, window = p3
        mu, nu = restriction_spectra(coeffs, window, 3)
        merged = np.sort(np.concatenate([mu, nu]))
        assert np.allclose(merged, [-SQRT2, -1.0, 0.0, 1.0, SQRT2])

    def test_leftmost_site_empty(self, p3):
        coeffs, window = p3
        mu, nu = restriction_spectra(coeffs, window, 1)
        assert mu.size == 0
        assert np.allclose(nu, [coeffs.b(1)])

    def test_random_windows_interlace(self):
        rng = np.random.default_rng(22)
        for _ in range(10):
            coeffs, window = random_model(rng, int(rng.integers(4, 25)))
            n = int(rng.integers(window.n_left + 2, window.n_right - 1))
            mu, nu = restriction_spectra(coeffs, window, n)
            check_interlacing(mu, nu, tol=1e-10)

    def test_interlacing_error_detected(self):
        with pytest.raises(InterlacingError):
            check_interlacing([1.0, 2.0], [0.5, 0.7, 3.0])


class TestNormingConstants:
    def test_p3_values(self, p3):
        coeffs, window = p3
        g2 = norming_constants(coeffs, window, [0.0, SQRT2])
        assert abs(g2[0] - 2.0) < 1e-12
        assert abs(g2[1] - 4.0) < 1e-10

    def test_single_site_unity(self):
        coeffs = CoefficientModel.table([1.0, 1.0], [0.0, -3.7, 0.0], origin=0)
        g2 = norming_constants(coeffs, LatticeWindow(0, 2), [-3.7])
        assert abs(g2[0] - 1.0) < 1e-14

    def test_non_eigenvalue_rejected(self, p3):
        coeffs, window = p3
        with pytest.raises(JacobiWeylError):
            norming_constants(coeffs, window, [0.5])


class TestSpectralMeasure:
    def test_p3_atoms(self, p3):
        rho = spectral_measure(*p3)
        assert np.allclose(rho.lambdas, [-SQRT2, 0.0, SQRT2], atol=1e-12)
        assert np.allclose(rho.weights, [0.25, 0.5, 0.25], atol=1e-12)

    def test_single_atom(self):
        coeffs = CoefficientModel.table([1.0, 1.0], [0.0, 5.0, 0.0], origin=0)
        rho = spectral_measure(coeffs, LatticeWindow(0, 2))
        assert np.allclose(rho.lambdas, [5.0]) and np.allclose(rho.weights, [1.0])

    def test_total_mass_one(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            coeffs, window = random_model(rng, int(rng.integers(2, 35)))
            rho = spectral_measure(coeffs, window)
            assert abs(rho.total_mass() - 1.0) < 1e-12

    def test_mass_with_eigenvector_nodes(self):
        # zero-diagonal operators put exact nodes in every other eigenvector
        # component; the branch-matching must not divide noise by noise there
        rng = np.random.default_rng(25)
        for n_int in (3, 8, 15, 24, 39):
            a = rng.uniform(0.5, 2.0, n_int + 1)
            coeffs = CoefficientModel.table(a, [0.0] * (n_int + 2), origin=0)
            window = LatticeWindow(0, n_int + 1)
            rho = spectral_measure(coeffs, window)
            assert abs(rho.total_mass() - 1.0) < 1e-12
        geo = CoefficientModel.geometric_a(0.6)
        rho = spectral_measure(geo, LatticeWindow(-5, 5))
        assert abs(rho.total_mass() - 1.0) < 1e-12

    def test_weight_identity_eigenvector_oracle(self):
        rng = np.random.default_rng(24)
        for _ in range(8):
            coeffs, window = random_model(rng, int(rng.integers(2, 25)))
            rho = spectral_measure(coeffs, window)
            d = np.array([coeffs.b(n) for n in window.interior()])
            e = np.array([coeffs.a(n) for n in window.interior()[:-1]])
            mat = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
            _, v = np.linalg.eigh(mat)
            assert np.max(np.abs(rho.weights - v[0, :] ** 2)) < 1e-10

    def test_json_roundtrip_bit_exact(self, p3):
        rho = spectral_measure(*p3)
        again = SpectralMeasure.from_json(rho.to_json())
        assert np.array_equal(again.lambdas, rho.lambdas)
        assert np.array_equal(again.weights, rho.weights)

    def test_csv_roundtrip_bit_exact(self, p3):
        rho = spectral_measure(*p3)
        again = SpectralMeasure.from_csv(rho.to_csv())
        assert np.array_equal(again.lambdas, rho.lambdas)
        assert np.array_equal(again.weights, rho.weights)


class TestConvergenceExponent:
    def test_linear_sequence(self):
        mods = np.arange(1.0, 10001.0)
        est = convergence_exponent(mods)
        assert abs(est.value - 1.0) <= 0.05
        assert genus(mods).value == 1

    def test_quadratic_sequence(self):
        mods = np.arange(1.0, 10001.0) ** 2
        est = convergence_exponent(mods)
        assert abs(est.value - 0.5) <= 0.05
        assert genus(mods).value == 0

    def test_complete_finite_list(self):
        mods = np.arange(1.0, 101.0)
        assert convergence_exponent(mods, complete=True).value == 0.0
        assert genus(mods, complete=True).value == 0

    def test_too_few_points(self):
        with pytest.raises(JacobiWeylError):
            convergence_exponent([1.0, 2.0, 3.0])


class TestDiscretenessProbe:
    def test_linear_potential_discrete(self):
        coeffs = CoefficientModel.linear_potential(1.0)
        report = discreteness_probe(coeffs, side="left")
        assert report.verdict == "discrete-likely"

    def test_free_continuous(self, free):
        report = discreteness_probe(free, side="left")
        assert report.verdict == "continuous-likely"

    def test_finite_table_trivially_discrete(self):
        coeffs = CoefficientModel.table([1.0] * 5, [0.0] * 6, origin=0)
        report = discreteness_probe(coeffs, side="right")
        assert report.verdict == "discrete-likely"

    def test_vanishing_coupling_discrete(self):
        coeffs = CoefficientModel.geometric_a(0.5)
        report = discreteness_probe(coeffs, side="left")
        assert report.verdict == "discrete-likely"
