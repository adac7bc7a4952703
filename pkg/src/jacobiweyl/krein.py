"""Elementary factors, product representations of m-functions, and growth checks.

The half-line function m_minus(z, n) = -phi(z, n-1)/(a(n-1) phi(z, n)) has
zeros at the zeros mu of phi(., n-1) and poles at the zeros nu of phi(., n);
the two sets strictly interlace, and m_minus equals a real constant times the
paired ratio of elementary factors E_p(mu_j, z)/E_p(nu_j, z).  On a finite
window this is an exact rational identity; for model infinite spectra the
paired product converges and carries a reported truncation-tail estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FitError, InterlacingError, JacobiWeylError
from .lattice import refine_phi_zero
from .spectra import check_interlacing, sub_window_eigenvalues


def elementary_factor(p: int, zeta, z):
    """Weierstrass primary factor E_p(zeta, z); E_p(0, z) = z."""
    if p < 0:
        raise JacobiWeylError("p must be a non-negative integer")
    z = np.asarray(z, dtype=complex)
    if zeta == 0:
        return z.copy() if z.ndim else complex(z)
    ratio = z / zeta
    val = 1.0 - ratio
    if p > 0:
        s = np.zeros_like(z)
        term = np.ones_like(z)
        for k in range(1, p + 1):
            term = term * ratio
            s = s + term / k
        val = val * np.exp(s)
    return val if val.ndim else complex(val)


@dataclass(frozen=True)
class InterlacedSpectra:
    """Zero set mu of phi(., anchor-1) and pole set nu of phi(., anchor).

    nu strictly interlaces mu from below: nu_0 < mu_0 < nu_1 < ...; lengths
    len(nu) in {len(mu), len(mu)+1}.  `anchor` records the site convention
    (None for model data).
    """

    mu: np.ndarray
    nu: np.ndarray
    anchor: int | None = None

    def __post_init__(self):
        mu = np.sort(np.asarray(self.mu, dtype=float))
        nu = np.sort(np.asarray(self.nu, dtype=float))
        check_interlacing(mu, nu)
        merged = np.sort(np.concatenate([mu, nu]))
        if merged.size > 1 and np.any(np.diff(merged) == 0.0):
            raise InterlacingError("coincident points are not allowed")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)

    @classmethod
    def from_window(cls, coeffs, window, anchor: int, polish: bool = True):
        """Zeros of phi(., anchor-1) and phi(., anchor) of a window operator.

        A mu/nu pair that collapses to the same float (true gap below the
        resolution of the arithmetic) is cancelled: it contributes an exactly
        neutral factor to the product representation.
        """
        if not (window.n_left + 2 <= anchor <= window.n_right):
            raise JacobiWeylError("anchor must satisfy n_L+2 <= anchor <= n_R")
        mu = sub_window_eigenvalues(coeffs, window, anchor - 1)
        nu = sub_window_eigenvalues(coeffs, window, anchor)
        if polish:
            mu = np.array([refine_phi_zero(coeffs, window, anchor - 1, x) for x in mu])
            nu = np.array([refine_phi_zero(coeffs, window, anchor, x) for x in nu])
        collided = set(mu) & set(nu)
        if collided:
            mu = np.array([x for x in mu if x not in collided])
            nu_list = list(nu)
            for x in collided:
                nu_list.remove(x)
            nu = np.array(nu_list)
        return cls(mu=mu, nu=nu, anchor=anchor)


def _paired_ratio(p, mu, nu, z):
    """prod_j E_p(mu_j, z)/E_p(nu_j, z), pairing indexwise, leftovers in the
    denominator.  Pairing keeps the partial products convergent for
    interlacing spectra."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    npairs = min(len(mu), len(nu))
    for j in range(npairs):
        out = out * elementary_factor(p, mu[j], z) / elementary_factor(p, nu[j], z)
    for j in range(npairs, len(nu)):
        out = out / elementary_factor(p, nu[j], z)
    for j in range(npairs, len(mu)):
        out = out * elementary_factor(p, mu[j], z)
    return out


@dataclass(frozen=True)
class ProductRepresentation:
    genus_p: int
    constant: float
    mu: np.ndarray
    nu: np.ndarray
    truncation: int
    tail_estimate: float

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        val = self.constant * _paired_ratio(self.genus_p, self.mu, self.nu, z)
        return val if val.ndim else complex(val)

    __call__ = evaluate


def krein_fit(spectra: InterlacedSpectra, m_samples, p: int = 0,
              rtol: float = 1e-9) -> ProductRepresentation:
    """Fit the constant of the paired-product representation to m samples.

    `m_samples` is a sequence of (z, m(z)) pairs away from all poles and
    zeros.  The constant comes from the first sample; the rest validate the
    representation and any disagreement beyond rtol raises FitError with the
    per-sample report.
    """
    samples = [(complex(z), complex(m)) for z, m in m_samples]
    if not samples:
        raise JacobiWeylError("need at least one m sample")
    z0, m0 = samples[0]
    base = complex(_paired_ratio(p, spectra.mu, spectra.nu, np.asarray(z0)))
    if base == 0:
        raise JacobiWeylError("first sample sits on a zero of the product")
    c = m0 / base
    if abs(c.imag) > 1e-8 * max(abs(c), 1e-300):
        raise FitError(f"fitted constant is not real: {c}")
    c = float(c.real)
    if c == 0.0:
        raise FitError("fitted constant vanishes")
    errors = []
    for z, m in samples[1:]:
        model = c * complex(_paired_ratio(p, spectra.mu, spectra.nu, np.asarray(z)))
        errors.append(abs(model - m) / max(abs(m), 1e-300))
    if errors and max(errors) > rtol:
        raise FitError("constant inconsistent across samples",
                       report={"relative_errors": errors, "constant": c})
    tail = _tail_estimate(p, spectra.mu, spectra.nu)
    return ProductRepresentation(genus_p=p, constant=c, mu=spectra.mu,
                                 nu=spectra.nu, truncation=len(spectra.nu),
                                 tail_estimate=tail)


def _tail_estimate(p, mu, nu, probe=1j):
    """Truncation error proxy: change under halving the factor count."""
    npairs = min(len(mu), len(nu))
    if npairs < 8:
        return 0.0
    half = npairs // 2
    full = complex(_paired_ratio(p, mu, nu, np.asarray(probe)))
    halfval = complex(_paired_ratio(p, mu[:half], nu[:half], np.asarray(probe)))
    return abs(full - halfval)


# ---------------------------------------------------------------------------
# Construction of phi data from two interlacing spectra

@dataclass(frozen=True)
class PhiConstruction:
    """Evaluators for candidate initial data: phi(z, anchor) = alpha(z),
    phi(z, anchor-1) = beta(z), determined up to +-exp(poly of degree <= p)."""

    genus_p: int
    mu: np.ndarray
    nu: np.ndarray
    a_anchor: float
    h_coeffs: tuple[float, ...]   # correction polynomial, ascending, no constant

    def alpha(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for nu_j in self.nu:
            out = out * elementary_factor(self.genus_p, nu_j, z)
        return out if out.ndim else complex(out)

    def beta_tilde(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for mu_j in self.mu:
            out = out * elementary_factor(self.genus_p, mu_j, z)
        return out if out.ndim else complex(out)

    def h(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for k, c in enumerate(self.h_coeffs, start=1):
            out = out + c * z ** k
        return out if out.ndim else complex(out)

    def beta(self, z):
        val = -self.a_anchor * np.exp(self.h(np.asarray(z, dtype=complex))) \
            * self.beta_tilde(z)
        val = np.asarray(val)
        return val if val.ndim else complex(val)


def construct_phi_from_spectra(spectra: InterlacedSpectra, p: int,
                               a_anchor: float,
                               tail_rtol: float = 0.05) -> PhiConstruction:
    """Initial data (alpha, beta) for a solution with the prescribed zero sets.

    alpha has zeros exactly nu, beta zeros exactly mu; propagating from
    (beta, alpha) at sites (anchor-1, anchor) reproduces the original phi up
    to a constant times exp(polynomial of degree <= p).  The correction
    exponent h sums (nu_j^-k - mu_j^-k) pairwise; a non-Cauchy tail raises
    with the offending k.
    """
    h_coeffs = []
    for k in range(1, p + 1):
        terms = _paired_inverse_power_sum(spectra.mu, spectra.nu, k)
        if terms is None:
            raise JacobiWeylError(f"inverse-power sum for k={k} hits a zero modulus")
        total, tail = terms
        if abs(tail) > tail_rtol * max(abs(total), 1.0):
            raise JacobiWeylError(f"tail of the k={k} correction sum has not converged")
        h_coeffs.append(total / k)
    return PhiConstruction(genus_p=p, mu=spectra.mu, nu=spectra.nu,
                           a_anchor=float(a_anchor), h_coeffs=tuple(h_coeffs))


def _paired_inverse_power_sum(mu, nu, k):
    npairs = min(len(mu), len(nu))
    if any(x == 0 for x in list(mu[:npairs]) + list(nu[:npairs])):
        return None
    terms = [1.0 / nu[j] ** k - 1.0 / mu[j] ** k for j in range(npairs)]
    total = float(np.sum(terms))
    tail = float(np.sum(terms[npairs // 2:])) if npairs >= 8 else 0.0
    return total, tail


# ---------------------------------------------------------------------------
# Disc disjointness criterion

@dataclass(frozen=True)
class DiscReport:
    ok: bool
    violations: tuple
    excluded: tuple
    first_violation: tuple | None


def disc_disjoint_check(spectra: InterlacedSpectra, r: float) -> DiscReport:
    """Are all but finitely many discs |z - x| < |x|^(-r) pairwise disjoint?

    Points with |x| <= 1 are excluded from the criterion and reported.  With a
    finite list "all but finitely many" is decided by the tail rule: the
    verdict is False iff a violation occurs among the upper half of the
    points ordered by modulus (or any two points coincide exactly).
    """
    pts = np.sort(np.concatenate([spectra.mu, spectra.nu]))
    if np.any(np.diff(pts) == 0.0):
        j = int(np.argmin(np.diff(pts)))
        pair = (float(pts[j]), float(pts[j + 1]))
        return DiscReport(ok=False, violations=(pair,), excluded=(),
                          first_violation=pair)
    keep = np.abs(pts) > 1.0
    excluded = tuple(float(x) for x in pts[~keep])
    pts = pts[keep]
    radii = np.abs(pts) ** (-r)
    violations = []
    for j in range(pts.size - 1):
        gap = pts[j + 1] - pts[j]
        if gap < radii[j] + radii[j + 1]:
            violations.append((float(pts[j]), float(pts[j + 1])))
    if not violations:
        return DiscReport(ok=True, violations=(), excluded=excluded,
                          first_violation=None)
    moduli = np.sort(np.abs(pts))
    cutoff = moduli[pts.size // 2] if pts.size else 0.0
    tail_violation = any(min(abs(x0), abs(x1)) >= cutoff for x0, x1 in violations)
    violations.sort(key=lambda pair: min(abs(pair[0]), abs(pair[1])))
    return DiscReport(ok=not tail_violation, violations=tuple(violations),
                      excluded=excluded, first_violation=violations[0])


# ---------------------------------------------------------------------------
# Numerical growth order

def growth_order_estimate(evaluator, radii, n_angles: int = 8) -> float:
    """Growth order from log log max_{|z|=r} |f(z)| against log r."""
    radii = np.asarray(radii, dtype=float)
    angles = np.linspace(0.0, math.pi, n_angles, endpoint=False) + 0.05
    logmax = []
    for rr in radii:
        zs = rr * np.exp(1j * angles)
        vals = np.abs(np.asarray(evaluator(zs)))
        vals = np.concatenate([vals, np.abs(np.atleast_1d(evaluator(np.array([-rr + 0j, rr + 0j]))))])
        logmax.append(math.log(max(float(np.max(vals)), 1e-300)))
    logmax = np.asarray(logmax)
    usable = logmax > 1.0
    if np.count_nonzero(usable) < 3:
        raise JacobiWeylError("radius range too small for an order estimate")
    slope, _ = np.polyfit(np.log(radii[usable]), np.log(logmax[usable]), 1)
    return float(slope)
