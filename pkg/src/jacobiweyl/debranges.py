"""Structure functions E(z, n), reproducing kernels, and weighted inner products.

At each site n,

    E(z, n) = phi(z, n) + i a(n) phi(z, n+1),
    |E(lambda, n)|^2 = phi(lambda, n)^2 + a(n)^2 phi(lambda, n+1)^2  (real lambda),

and E has no real zero.  The space B(n) is the span of phi(., m), m <= n
(polynomials of degree up to n - n_L - 1) with inner product
(1/pi) integral of conj(F) G / |E(., n)|^2 over the line.  The family
phi(., m) is orthonormal for that weight, the kernel
K(zeta, z, n) = sum_{m <= n} conj(phi(zeta, m)) phi(z, m) reproduces point
evaluations, and the same inner products are computed by the window's atomic
measure (isometric embedding).

With this phi orientation the Christoffel-Darboux identity reads

    K(zeta, z, n) = (E(z,n) E#(zeta*,n) - E(zeta*,n) E#(z,n)) / (2i (z - zeta*)),

and the half-plane modulus inequality runs |E(z*, n)| > |E(z, n)| for
Im z > 0 (the conjugate E# is the upper-half-plane structure function; the
weight on the real axis is identical either way).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegreeError, JacobiWeylError
from .lattice import LatticeWindow, phi_table, spectral_bounds
from .quadrature import adaptive_integral
from .spectra import SpectralMeasure


def _phi_pair(coeffs, window, n, zs):
    table = phi_table(coeffs, window, np.atleast_1d(zs))
    i = window.index(n)
    return table[:, i], table[:, i + 1]


def de_branges_e(coeffs, window, n: int, z):
    """E(z, n) = phi(z, n) + i a(n) phi(z, n+1)."""
    if not (window.contains(n) and window.contains(n + 1)):
        raise JacobiWeylError("need n and n+1 inside the window")
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    pn, pn1 = _phi_pair(coeffs, window, n, z_arr)
    val = pn + 1j * coeffs.a(n) * pn1
    return complex(val[0]) if np.ndim(z) == 0 else val


def e_sharp(coeffs, window, n: int, z):
    """E#(z, n) = conj(E(conj z, n))."""
    z_arr = np.conj(np.atleast_1d(np.asarray(z, dtype=complex)))
    val = np.conj(de_branges_e(coeffs, window, n, z_arr))
    return complex(val[0]) if np.ndim(z) == 0 else val


def e_modulus_squared(coeffs, window, n: int, lams):
    """|E(lambda, n)|^2 on real lambda grids (the B(n) weight denominator)."""
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    pn, pn1 = _phi_pair(coeffs, window, n, lams)
    return pn ** 2 + (coeffs.a(n) * pn1) ** 2


def reproducing_kernel(coeffs, window, n: int, zeta, z):
    """K(zeta, z, n) = sum_{m = n_L+1}^{n} conj(phi(zeta, m)) phi(z, m)."""
    if not window.contains(n):
        raise JacobiWeylError("site outside window")
    zeta_row = phi_table(coeffs, window, np.atleast_1d(np.asarray(zeta, dtype=complex)))[0]
    z_row = phi_table(coeffs, window, np.atleast_1d(np.asarray(z, dtype=complex)))[0]
    i = window.index(n)
    return complex(np.sum(np.conj(zeta_row[1:i + 1]) * z_row[1:i + 1]))


def kernel_identity_defect(coeffs, window, n: int, zeta, z) -> float:
    """|CD-form - K| at one point pair (see module docstring for the form)."""
    e_z = de_branges_e(coeffs, window, n, z)
    e_zc = de_branges_e(coeffs, window, n, np.conj(zeta))
    es_z = e_sharp(coeffs, window, n, z)
    es_zc = e_sharp(coeffs, window, n, np.conj(zeta))
    denom = 2j * (z - np.conj(zeta))
    if denom == 0:
        raise JacobiWeylError("zeta* = z: use the confluent (diagonal) form")
    cd = (e_z * es_zc - e_zc * es_z) / denom
    return abs(cd - reproducing_kernel(coeffs, window, n, zeta, z))


def de_branges_modulus_margin(coeffs, window, n: int, z) -> float:
    """|E(z*, n)| - |E(z, n)| for Im z > 0 (positive with this orientation)."""
    if np.imag(z) <= 0:
        raise JacobiWeylError("need Im z > 0")
    return abs(de_branges_e(coeffs, window, n, np.conj(z))) \
        - abs(de_branges_e(coeffs, window, n, z))


@dataclass(frozen=True)
class DeBrangesDescriptor:
    """Site-n space data: structure function, kernel, and quadrature policy."""

    coeffs: object
    window: LatticeWindow
    n: int
    quad_tol: float = 1e-10

    def __post_init__(self):
        if not (self.window.n_left + 1 <= self.n <= self.window.n_right - 1):
            raise JacobiWeylError("site must be interior")

    @property
    def max_degree(self) -> int:
        return self.n - self.window.n_left - 1

    def e(self, z):
        return de_branges_e(self.coeffs, self.window, self.n, z)

    def kernel(self, zeta, z):
        return reproducing_kernel(self.coeffs, self.window, self.n, zeta, z)

    def kernel_polynomial(self, w: float) -> np.ndarray:
        """Ascending coefficients of K(w, ., n) for real w."""
        from .lattice import phi_polynomials

        polys = phi_polynomials(self.coeffs, self.window)
        i = self.window.index(self.n)
        coeffs = np.zeros(self.max_degree + 1)
        w_row = phi_table(self.coeffs, self.window, np.array([float(w)]))[0]
        for m in range(1, i + 1):
            pm = np.asarray(polys[m], dtype=float)
            coeffs[: pm.size] += w_row[m] * pm
        return coeffs

    def real_zero_margin(self, n_scan: int = 2001) -> float:
        """min |E|^2 over a spectral-range scan (must stay positive)."""
        lo, hi = spectral_bounds(self.coeffs, self.window)
        grid = np.linspace(lo - 1.0, hi + 1.0, n_scan)
        return float(np.min(e_modulus_squared(self.coeffs, self.window, self.n, grid)))


def _as_poly(f):
    coeffs = np.atleast_1d(np.asarray(f, dtype=complex))
    while coeffs.size > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    return coeffs


def db_inner_product(desc: DeBrangesDescriptor, F, G) -> complex:
    """(1/pi) integral conj(F) G / |E(., n)|^2 for polynomial F, G in B(n).

    F, G are ascending coefficient sequences; degrees above the space's
    maximal degree make the integral divergent and raise DegreeError.  The
    quadrature is adaptive on a core interval with doubling shells, stopped by
    the algebraic tail bound from the known degree gap.
    """
    F = _as_poly(F)
    G = _as_poly(G)
    deg_f, deg_g = F.size - 1, G.size - 1
    if deg_f > desc.max_degree or deg_g > desc.max_degree:
        raise DegreeError(
            f"degree {max(deg_f, deg_g)} exceeds B(n) limit {desc.max_degree}")
    coeffs, window, n = desc.coeffs, desc.window, desc.n
    # integrand decays like |x|^(-gap); gap >= 2 by the degree bookkeeping
    gap = 2 * (desc.n - window.n_left) - deg_f - deg_g

    def real_part(xs):
        w = e_modulus_squared(coeffs, window, n, xs)
        fv = np.conj(np.polyval(F[::-1], xs))
        gv = np.polyval(G[::-1], xs)
        return np.real(fv * gv) / w

    def imag_part(xs):
        w = e_modulus_squared(coeffs, window, n, xs)
        fv = np.conj(np.polyval(F[::-1], xs))
        gv = np.polyval(G[::-1], xs)
        return np.imag(fv * gv) / w

    lo, hi = spectral_bounds(coeffs, window)
    radius = max(abs(lo), abs(hi), 1.0) + 1.0
    re = _line_integral(real_part, radius, gap, desc.quad_tol)
    complex_coeffs = np.any(np.abs(np.imag(F)) > 0) or np.any(np.abs(np.imag(G)) > 0)
    im = _line_integral(imag_part, radius, gap, desc.quad_tol) if complex_coeffs else 0.0
    return complex(re, im) / math.pi


def _line_integral(f, radius, gap, tol, max_doublings=60):
    total = adaptive_integral(f, -radius, radius, tol=0.25 * tol)
    r = radius
    for _ in range(max_doublings):
        shell = (adaptive_integral(f, -2.0 * r, -r, tol=0.125 * tol)
                 + adaptive_integral(f, r, 2.0 * r, tol=0.125 * tol))
        total += shell
        r *= 2.0
        edge = float(np.max(np.abs(f(np.array([-r, r])))))
        tail_bound = 2.0 * edge * r / (gap - 1.0)
        if abs(shell) <= 0.25 * tol and tail_bound <= 0.25 * tol:
            return total
    raise JacobiWeylError("weighted integral tail did not converge")


def embedding_check(desc: DeBrangesDescriptor, F, rho: SpectralMeasure):
    """(||F||^2 in B(n), integral |F|^2 drho, difference)."""
    F = _as_poly(F)
    norm_b = db_inner_product(desc, F, F).real
    vals = np.polyval(F[::-1], rho.lambdas)
    norm_rho = float(np.sum(np.abs(vals) ** 2 * rho.weights))
    return norm_b, norm_rho, abs(norm_b - norm_rho)


@dataclass(frozen=True)
class ChainReport:
    site: int
    dim_lower: int
    dim_upper: int
    kernel_membership_defect: float
    shared_inner_product_defect: float
    complement_coeffs: np.ndarray
    complement_orthogonality_defect: float

    @property
    def codimension(self) -> int:
        return self.dim_upper - self.dim_lower


def chain_inclusion_check(coeffs, window, n: int, n_kernel_samples: int = 3,
                          seed: int = 0) -> ChainReport:
    """B(n) sits inside B(n+1) with codimension one.

    Verifies that kernel sections of B(n) keep their inner products under the
    B(n+1) weight, and exhibits the complement: the transform of the next
    site's delta, i.e. phi(., n+1), orthogonal to everything of lower degree.
    """
    from .lattice import phi_polynomials

    desc_lo = DeBrangesDescriptor(coeffs, window, n)
    desc_hi = DeBrangesDescriptor(coeffs, window, n + 1)
    polys = phi_polynomials(coeffs, window)
    basis = [np.asarray(polys[m], dtype=float)
             for m in range(1, window.index(n) + 1)]
    rng = np.random.default_rng(seed)
    lo_b, hi_b = spectral_bounds(coeffs, window)
    w_points = rng.uniform(lo_b, hi_b, size=n_kernel_samples)

    membership = 0.0
    for w in w_points:
        k_poly = desc_lo.kernel_polynomial(w)
        for m, pm in enumerate(basis):
            lower = db_inner_product(desc_lo, k_poly, pm)
            upper = db_inner_product(desc_hi, k_poly, pm)
            membership = max(membership, abs(lower - upper))

    shared = 0.0
    for i, pi in enumerate(basis):
        for pj in basis[i:]:
            lower = db_inner_product(desc_lo, pi, pj)
            upper = db_inner_product(desc_hi, pi, pj)
            shared = max(shared, abs(lower - upper))

    comp = np.asarray(polys[window.index(n) + 1], dtype=float)
    comp_defect = max(abs(db_inner_product(desc_hi, comp, pm)) for pm in basis)
    comp_norm = comp / comp[-1]
    return ChainReport(site=n,
                       dim_lower=n - window.n_left,
                       dim_upper=n + 1 - window.n_left,
                       kernel_membership_defect=membership,
                       shared_inner_product_defect=shared,
                       complement_coeffs=comp_norm,
                       complement_orthogonality_defect=comp_defect)
