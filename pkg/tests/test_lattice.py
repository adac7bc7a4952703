import math

import numpy as np
import pytest

from jacobiweyl import (CoefficientModel, LatticeWindow, apply_tau,
                        phi_fundamental, phi_zeros, solve_recurrence,
                        theta_fundamental, wronskian)
from jacobiweyl.errors import ConfigError, WindowError
from jacobiweyl.lattice import (fundamental_pair_scaled, phi_polynomials,
                                phi_table, poly_eval, theta_table, uplus_table)
from tests.conftest import random_model


def delta(k):
    return lambda n: 1.0 if n == k else 0.0


class TestApplyTau:
    def test_delta_at_origin(self, free):
        assert apply_tau(free, delta(0), 0) == 0.0

    def test_constant_sequence(self, free):
        assert apply_tau(free, lambda n: 1.0, 3) == 2.0

    def test_geometric_sequence(self, free):
        x = 0.7 + 0.2j
        f = lambda n: x ** n
        for n in (-2, 0, 5):
            expected = (x + 1.0 / x) * x ** n
            assert abs(apply_tau(free, f, n) - expected) < 1e-14

    def test_outside_table_window_raises(self):
        coeffs = CoefficientModel.table([1.0, 1.0], [0.0, 0.0, 0.0], origin=0)
        with pytest.raises(WindowError):
            apply_tau(coeffs, lambda n: 1.0, 5)


class TestWronskian:
    def test_antisymmetry_zero(self, free):
        f = lambda n: 1.5 ** n
        assert wronskian(free, f, f, 2) == 0.0

    def test_geometric_pair_constant(self, free):
        x = 1.37
        f = lambda n: x ** n
        g = lambda n: x ** (-n)
        expected = 1.0 / x - x
        for n in (-1, 0, 3):
            assert abs(wronskian(free, f, g, n) - expected) < 1e-14

    def test_fundamental_normalization(self, p3):
        coeffs, window = p3
        z = -0.3 + 1.1j
        th = theta_fundamental(coeffs, window, z)
        ph = phi_fundamental(coeffs, window, z)
        for n in range(window.n_left, window.n_right):
            assert abs(wronskian(coeffs, th, ph, n) - 1.0) < 1e-12


class TestSolveRecurrence:
    def test_forward_free_polynomials(self, p3):
        coeffs, window = p3
        z = 0.9 - 0.4j
        u = solve_recurrence(coeffs, z, 0, 0.0, 1.0, window)
        assert abs(u.value(2) - z) < 1e-14
        assert abs(u.value(3) - (z * z - 1)) < 1e-14
        assert abs(u.value(4) - (z ** 3 - 2 * z)) < 1e-14

    def test_theta_free_at_zero_energy(self, p3):
        coeffs, window = p3
        u = solve_recurrence(coeffs, 0.0, 0, 1.0, 0.0, window)
        assert np.allclose(u.values, [1.0, 0.0, -1.0, 0.0, 1.0])

    def test_zero_initial_data(self):
        rng = np.random.default_rng(3)
        coeffs, window = random_model(rng, 6)
        u = solve_recurrence(coeffs, 1.1 + 0.3j, 2, 0.0, 0.0, window)
        assert np.all(u.values == 0.0)

    def test_middle_seed_satisfies_recurrence(self):
        rng = np.random.default_rng(4)
        coeffs, window = random_model(rng, 9)
        u = solve_recurrence(coeffs, 0.4 + 0.9j, 5, 1.0, -2.0, window)
        assert u.residual(coeffs) < 1e-12

    def test_initial_sites_must_be_inside(self, p3):
        coeffs, window = p3
        with pytest.raises(WindowError):
            solve_recurrence(coeffs, 1.0, 4, 1.0, 1.0, window)


class TestFundamentalSystem:
    def test_phi_values_p3(self, p3):
        coeffs, window = p3
        z = 2.2 + 0.1j
        ph = phi_fundamental(coeffs, window, z)
        assert abs(ph.value(2) - z) < 1e-14
        assert abs(ph.value(3) - (z * z - 1)) < 1e-14

    def test_phi_real_for_real_z(self, p3):
        coeffs, window = p3
        ph = phi_fundamental(coeffs, window, 0.37)
        assert not np.iscomplexobj(ph.values)

    def test_phi_degree_equals_offset(self):
        rng = np.random.default_rng(7)
        coeffs, window = random_model(rng, 8)
        polys = phi_polynomials(coeffs, window)
        for i, p in enumerate(polys):
            if i == 0:
                assert p == [0.0]
            else:
                assert len(p) == i and p[-1] != 0.0

    def test_phi_leading_coefficient(self):
        rng = np.random.default_rng(8)
        coeffs, window = random_model(rng, 6)
        polys = phi_polynomials(coeffs, window)
        for n in range(window.n_left + 1, window.n_right + 1):
            lead = polys[window.index(n)][-1]
            expected = 1.0
            for m in range(window.n_left + 1, n):
                expected /= coeffs.a(m)
            assert abs(lead - expected) < 1e-12 * abs(expected)

    def test_polynomial_matches_recurrence_eval(self):
        rng = np.random.default_rng(9)
        coeffs, window = random_model(rng, 7)
        polys = phi_polynomials(coeffs, window)
        z = 0.3 + 1.7j
        ph = phi_fundamental(coeffs, window, z)
        for n in range(window.n_left, window.n_right + 1):
            assert abs(poly_eval(polys[window.index(n)], z) - ph.value(n)) < 1e-10

    def test_wronskian_constancy_random_pairs(self):
        # drift measured relative to the size of the terms entering W:
        # solutions grow exponentially across the window, so the cancellation
        # in W is conditioned by |u||v|, not by |W| itself
        rng = np.random.default_rng(10)
        for _ in range(20):
            coeffs, window = random_model(rng, int(rng.integers(3, 31)))
            z = complex(rng.uniform(-2, 2), rng.uniform(0.1, 2))
            u = solve_recurrence(coeffs, z, window.n_left,
                                 complex(rng.normal(), rng.normal()),
                                 complex(rng.normal(), rng.normal()), window)
            v = solve_recurrence(coeffs, z, window.n_left,
                                 complex(rng.normal(), rng.normal()),
                                 complex(rng.normal(), rng.normal()), window)
            ws = [wronskian(coeffs, u, v, n)
                  for n in range(window.n_left, window.n_right)]
            a_max = max(coeffs.a(n) for n in range(window.n_left, window.n_right))
            scale = a_max * np.max(np.abs(u.values)) * np.max(np.abs(v.values))
            assert max(abs(w - ws[0]) for w in ws) / scale < 1e-10


class TestAsymptotics:
    def test_phi_ratio_asymptotics(self):
        # phi(z, n) / phi(z, ntilde) * z^(ntilde - n) * prod a(m) -> 1 on z = it
        rng = np.random.default_rng(11)
        coeffs, window = random_model(rng, 10)
        n, ntilde = 9, 4
        prod_a = np.prod([coeffs.a(m) for m in range(ntilde, n)])
        vals = []
        for t in (1e2, 1e3, 1e4):
            z = 1j * t
            ph = phi_fundamental(coeffs, window, z)
            vals.append(ph.value(n) / ph.value(ntilde) * z ** (ntilde - n) * prod_a)
        errs = [abs(v - 1.0) for v in vals]
        assert errs[-1] < 1e-3
        assert errs[2] < errs[0]

    def test_m_minus_leading_term(self):
        rng = np.random.default_rng(12)
        coeffs, window = random_model(rng, 8)
        n = 5
        for t in (1e2, 1e4):
            z = 1j * t
            ph = phi_fundamental(coeffs, window, z)
            m_minus = -ph.value(n - 1) / (coeffs.a(n - 1) * ph.value(n))
            assert abs(m_minus + 1.0 / z) < 5.0 / t ** 2

    def test_scaled_pair_matches_unscaled_ratio(self):
        rng = np.random.default_rng(13)
        coeffs, window = random_model(rng, 12)
        z = 1j * 50.0
        th, ph = fundamental_pair_scaled(coeffs, window, z)
        th_u = theta_fundamental(coeffs, window, z)
        ph_u = phi_fundamental(coeffs, window, z)
        assert th.values[window.index(window.n_left + 1)] == 0.0
        for n in range(window.n_left + 2, window.n_right + 1):
            i = window.index(n)
            ratio = th.values[i] / ph.values[i]
            assert abs(ratio - th_u.value(n) / ph_u.value(n)) < 1e-10 * abs(ratio)

    def test_scaled_pair_no_overflow(self):
        coeffs = CoefficientModel.free()
        window = LatticeWindow(0, 60)
        z = 1j * 1e4
        th, ph = fundamental_pair_scaled(coeffs, window, z)
        assert np.all(np.isfinite(th.values)) and np.all(np.isfinite(ph.values))
        # log|phi(it, n)| ~ (n-1) log t for the free model
        assert abs(ph.log_abs(59) - 58 * math.log(1e4)) < 1.0


class TestBatchTables:
    def test_tables_match_single_solves(self):
        rng = np.random.default_rng(14)
        coeffs, window = random_model(rng, 9)
        zs = np.array([0.5 + 0.5j, -1.0 + 2.0j, 3.0 + 0.1j])
        pht = phi_table(coeffs, window, zs)
        tht = theta_table(coeffs, window, zs)
        upt = uplus_table(coeffs, window, zs)
        for k, z in enumerate(zs):
            assert np.allclose(pht[k], phi_fundamental(coeffs, window, z).values)
            assert np.allclose(tht[k], theta_fundamental(coeffs, window, z).values)
            u = solve_recurrence(coeffs, z, window.n_right - 1, 1.0, 0.0, window)
            assert np.allclose(upt[k], u.values)

    def test_real_grid_stays_real(self, p3):
        coeffs, window = p3
        table = phi_table(coeffs, window, np.linspace(-2, 2, 5))
        assert table.dtype == np.float64


class TestPhiZeros:
    def test_p3_zeros(self, p3):
        coeffs, window = p3
        zeros = phi_zeros(coeffs, window)
        assert np.allclose(zeros, [-math.sqrt(2), 0.0, math.sqrt(2)], atol=1e-10)

    def test_intermediate_site(self, p3):
        coeffs, window = p3
        assert np.allclose(phi_zeros(coeffs, window, site=3), [-1.0, 1.0],
                           atol=1e-10)

    def test_agrees_with_eigensolver(self):
        from jacobiweyl import eigen_tridiagonal
        rng = np.random.default_rng(15)
        for _ in range(10):
            coeffs, window = random_model(rng, int(rng.integers(3, 25)))
            zeros = phi_zeros(coeffs, window)
            eig = eigen_tridiagonal(coeffs, window).eigenvalues
            scale = np.maximum(np.abs(eig), 1.0)
            assert np.max(np.abs(zeros - eig) / scale) < 1e-8


class TestWindow:
    def test_minimum_size(self):
        with pytest.raises(WindowError):
            LatticeWindow(0, 1)
        LatticeWindow(0, 2)

    def test_interior(self):
        w = LatticeWindow(-2, 3)
        assert list(w.interior()) == [-1, 0, 1, 2]


class TestCoefficientModels:
    def test_shifted_copy(self):
        base = CoefficientModel.table([1.0, 2.0, 3.0], [0.1, 0.2, 0.3, 0.4],
                                      origin=0)
        sh = CoefficientModel.shifted(base, 2)
        assert sh.a(0) == base.a(2)
        assert sh.b(1) == base.b(3)

    def test_linear_potential(self):
        m = CoefficientModel.linear_potential(2.0)
        assert m.b(-3) == 6.0 and m.a(5) == 1.0

    def test_geometric(self):
        m = CoefficientModel.geometric_a(0.5)
        assert m.a(-2) == 0.25 and m.b(7) == 0.0

    def test_positivity_enforced(self):
        with pytest.raises(ConfigError):
            CoefficientModel.table([1.0, -1.0], [0.0, 0.0, 0.0])

    def test_config_roundtrip(self):
        rng = np.random.default_rng(16)
        base = CoefficientModel.table(rng.uniform(0.5, 2, 5).tolist(),
                                      rng.uniform(-1, 1, 6).tolist(), origin=-2)
        model = CoefficientModel.shifted(base, 3)
        again = CoefficientModel.loads(model.dumps())
        assert again == model

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError):
            CoefficientModel.from_config({"family": "free", "bogus": 1})
