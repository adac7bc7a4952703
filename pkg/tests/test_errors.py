"""Failure-path contracts: diagnostics must carry usable payloads."""

import numpy as np
import pytest

from jacobiweyl import CoefficientModel, LatticeWindow, stieltjes_inversion
from jacobiweyl.errors import (EigenConvergenceError, InversionError,
                               JacobiWeylError)
from jacobiweyl.weyl import WeylFunction


class TestWeylFunctionValidation:
    def test_requires_exactly_one_representation(self):
        with pytest.raises(JacobiWeylError):
            WeylFunction()
        with pytest.raises(JacobiWeylError):
            WeylFunction(poles=np.array([0.0]), weights=np.array([1.0]),
                         sampler=lambda z: z)

    def test_rejects_nonpositive_weights(self):
        with pytest.raises(JacobiWeylError):
            WeylFunction(poles=np.array([0.0, 1.0]),
                         weights=np.array([0.5, -0.5]))


class TestInversionDiagnostics:
    def test_short_epsilon_sequence_rejected(self):
        m = WeylFunction(poles=np.array([0.0]), weights=np.array([1.0]))
        with pytest.raises(JacobiWeylError):
            stieltjes_inversion(m, -1.0, 1.0, eps_sequence=(0.1, 0.01))

    def test_reversed_interval_rejected(self):
        m = WeylFunction(poles=np.array([0.0]), weights=np.array([1.0]))
        with pytest.raises(JacobiWeylError):
            stieltjes_inversion(m, 1.0, -1.0)

    def test_non_settling_sampler_reports_partials(self):
        # Im M(x + i eps) ~ eps^(-1/2) at the origin: the interval mass grows
        # like eps^(1/2)-corrected terms that defeat linear extrapolation at
        # a tight tolerance
        def m(z):
            return 1.0 / np.sqrt(-np.asarray(z, dtype=complex))

        wf = WeylFunction(sampler=m)
        with pytest.raises(InversionError) as err:
            stieltjes_inversion(wf, -1.0, 1.0, rtol=1e-12,
                                eps_sequence=(1e-1, 1e-2, 1e-3, 1e-4))
        partials = err.value.partials
        assert set(partials) == {"eps", "raw", "extrapolated"}
        assert len(partials["raw"]) == 4


class TestEigenDiagnostics:
    def test_convergence_error_payload(self):
        err = EigenConvergenceError(index=3, sweeps=50)
        assert err.index == 3 and err.sweeps == 50
        assert "3" in str(err)

    def test_kernel_raises_through_wrapper(self):
        from jacobiweyl import _core

        # one sweep is never enough for a coupled 12-site matrix
        rng = np.random.default_rng(1)
        d = rng.uniform(-1, 1, 12)
        e = rng.uniform(0.5, 2.0, 11)
        with pytest.raises(EigenConvergenceError) as err:
            _core.tridiag_eigen(d, e, max_sweeps=1)
        assert err.value.index >= 0


class TestWindowErrors:
    def test_interior_site_required(self):
        coeffs = CoefficientModel.free()
        window = LatticeWindow(0, 4)
        from jacobiweyl import restriction_spectra
        from jacobiweyl.errors import WindowError
        with pytest.raises(WindowError):
            restriction_spectra(coeffs, window, 4)
