"""The spectral transformation of a window operator and its inverse.

Forward:  fhat(lambda_k) = sum_m phi(lambda_k, m) f(m)   (m over interior sites)
Inverse:  f(n) = sum_k phi(lambda_k, n) fhat(lambda_k) w_k

The pair is unitary between l^2 of the interior sites and l^2 of the atoms
weighted by w_k, and conjugates the interior matrix to multiplication by the
independent variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import JacobiWeylError
from .spectra import SpectralMeasure, eigenfunction_table, spectral_measure


def _phi_matrix(coeffs, window, measure):
    """phi(lambda_k, m) for atoms k x interior sites m (two-sided assembly)."""
    table = eigenfunction_table(coeffs, window, measure.lambdas)
    return table[:, 1:-1]


def forward_transform(coeffs, window, f, measure: SpectralMeasure | None = None):
    """Spectral-side vector of an interior-site vector f."""
    if measure is None:
        measure = spectral_measure(coeffs, window)
    f = np.asarray(f)
    if f.shape[0] != window.n_interior:
        raise JacobiWeylError("f must be supported on the interior sites")
    return _phi_matrix(coeffs, window, measure) @ f


def inverse_transform(coeffs, window, fhat, measure: SpectralMeasure | None = None):
    """Lattice-side vector of a spectral-side vector fhat."""
    if measure is None:
        measure = spectral_measure(coeffs, window)
    fhat = np.asarray(fhat)
    if fhat.shape[0] != measure.natoms:
        raise JacobiWeylError("fhat must be defined on all atoms")
    phi = _phi_matrix(coeffs, window, measure)
    return phi.T @ (measure.weights * fhat)


@dataclass(frozen=True)
class TransformPair:
    f: np.ndarray
    fhat: np.ndarray
    measure: SpectralMeasure

    def parseval_defect(self) -> float:
        lattice = float(np.sum(np.abs(self.f) ** 2))
        spectral = float(np.sum(np.abs(self.fhat) ** 2 * self.measure.weights))
        return abs(lattice - spectral)


def transform_pair(coeffs, window, f, measure=None) -> TransformPair:
    if measure is None:
        measure = spectral_measure(coeffs, window)
    return TransformPair(f=np.asarray(f),
                         fhat=forward_transform(coeffs, window, f, measure),
                         measure=measure)


def apply_hamiltonian(coeffs, window, f):
    """Interior matrix applied to an interior vector (Dirichlet ends)."""
    f = np.asarray(f)
    interior = window.interior()
    out = np.empty_like(f, dtype=np.result_type(f, float))
    for i, n in enumerate(interior):
        val = coeffs.b(n) * f[i]
        if i > 0:
            val += coeffs.a(n - 1) * f[i - 1]
        if i + 1 < f.shape[0]:
            val += coeffs.a(n) * f[i + 1]
        out[i] = val
    return out


def green_transform_defect(coeffs, window, z, n: int, k: int = 0,
                           measure: SpectralMeasure | None = None) -> float:
    """Defect of the transform of m -> d^k/dz^k G(z, n, m).

    The transform must equal k! phi(lambda, n) / (lambda - z)^(k+1) on the
    atoms; the Green column is assembled from the spectral representation and
    differentiated analytically in z.
    """
    if k not in (0, 1):
        raise JacobiWeylError("k = 0 or 1 supported")
    if measure is None:
        measure = spectral_measure(coeffs, window)
    phi = _phi_matrix(coeffs, window, measure)
    i = window.index(n) - 1
    lam, w = measure.lambdas, measure.weights
    denom = (lam - z) ** (k + 1)
    column = phi.T @ (w * phi[:, i] * math.factorial(k) / denom)
    lhs = phi @ column
    rhs = math.factorial(k) * phi[:, i] / denom
    return float(np.max(np.abs(lhs - rhs)))
