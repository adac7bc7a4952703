"""Weyl solutions, M-functions, Green's function, inversion, and gauge maps.

Orientation.  With the fundamental pair normalized as in `lattice`
(W(theta, phi) = +1), the Weyl function is evaluated as

    M(z) = W(theta(z), u_plus(z)) / W(phi(z), u_plus(z))
         = theta(z, n_R) / phi(z, n_R),

and the Weyl solution as psi = M phi - theta.  This is the sign convention
under which every identity checked here holds simultaneously on a Dirichlet
window: M is Herglotz with poles at the eigenvalues and residue weights
1/gamma^2, psi is proportional to u_plus, G(z, n, m) = phi(z, min) psi(z, max)
equals the resolvent matrix element exactly, and zG(z, n, n) -> -1 on rays.
(The same objects with theta replaced by -theta satisfy the textbook-form
ratio with a leading minus sign; only the orientation differs.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InversionError, JacobiWeylError, PoleError
from .lattice import (SolutionSample, phi_fundamental, phi_table,
                      phi_zeros, solve_recurrence, theta_fundamental,
                      theta_table, uplus_table, wronskian)
from .quadrature import adaptive_integral
from .spectra import SpectralMeasure, spectral_measure

DEFAULT_EPS_SEQUENCE = tuple(10.0 ** (-k) for k in range(1, 7))


# ---------------------------------------------------------------------------
# Weyl function representations

def _polyval_ascending(coeffs, z):
    acc = np.zeros_like(np.asarray(z, dtype=complex))
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


@dataclass(frozen=True)
class WeylFunction:
    """Evaluable M(z): pole/residue data, or a sampler closure.

    Pole form:  M(z) = sum_k w_k / (lambda_k - z) + entire(z), weights w_k > 0.
    The residue of M at lambda_k (coefficient of 1/(z - lambda_k)) is -w_k.
    Satisfies M(conj z) = conj M(z); the pure pole form is Herglotz.
    """

    poles: np.ndarray | None = None
    weights: np.ndarray | None = None
    entire: tuple[float, ...] = ()
    sampler: Callable | None = None
    label: str = ""

    def __post_init__(self):
        if (self.poles is None) == (self.sampler is None):
            raise JacobiWeylError("provide exactly one representation")
        if self.poles is not None:
            p = np.asarray(self.poles, dtype=float)
            w = np.asarray(self.weights, dtype=float)
            if np.any(w <= 0):
                raise JacobiWeylError("pole weights must be positive")
            object.__setattr__(self, "poles", p)
            object.__setattr__(self, "weights", w)

    @property
    def kind(self) -> str:
        return "pole-residue" if self.poles is not None else "sampler"

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        zz = np.atleast_1d(z)
        if self.sampler is not None:
            out = np.asarray(self.sampler(zz), dtype=complex)
        else:
            out = np.sum(self.weights / (self.poles - zz[..., None]), axis=-1)
            if self.entire:
                out = out + _polyval_ascending(self.entire, zz)
        return complex(out[0]) if scalar else out

    def gauge(self, g_coeffs=(), f_coeffs=()) -> "WeylFunction":
        """e^{-2g} M + e^{-g} f; exact pole form survives constant g."""
        g_coeffs = tuple(float(c) for c in g_coeffs)
        f_coeffs = tuple(float(c) for c in f_coeffs)
        if self.poles is not None and len(g_coeffs) <= 1:
            g0 = g_coeffs[0] if g_coeffs else 0.0
            s = math.exp(-2.0 * g0)
            entire = tuple(s * c for c in self.entire)
            f_part = tuple(math.exp(-g0) * c for c in f_coeffs)
            m = max(len(entire), len(f_part))
            merged = tuple((entire[i] if i < len(entire) else 0.0)
                           + (f_part[i] if i < len(f_part) else 0.0)
                           for i in range(m))
            return WeylFunction(poles=self.poles, weights=self.weights * s,
                                entire=merged, label=self.label)
        base = self

        def sampler(z):
            g = _polyval_ascending(g_coeffs, z) if g_coeffs else 0.0
            f = _polyval_ascending(f_coeffs, z) if f_coeffs else 0.0
            return np.exp(-2.0 * g) * base(z) + np.exp(-g) * f

        return WeylFunction(sampler=sampler, label=self.label)


# ---------------------------------------------------------------------------
# Weyl solutions and M evaluation

def u_plus(coeffs, window, z, degenerate_rtol: float = 1e-10) -> SolutionSample:
    """Right-Dirichlet solution: u(n_R) = 0, u(n_R - 1) = 1, grown backward.

    If z sits on an eigenvalue of the window, u_plus is proportional to phi;
    the sample is still returned, flagged degenerate.
    """
    sample = solve_recurrence(coeffs, z, window.n_right - 1, 1.0, 0.0, window)
    # degenerate iff phi also vanishes at n_R, i.e. u_plus(n_L) = 0 up to scale
    left = abs(sample.values[0])
    scale = float(np.max(np.abs(sample.values)))
    degen = bool(left <= degenerate_rtol * max(scale, 1e-300))
    if degen:
        return SolutionSample(z=sample.z, window=window, values=sample.values,
                              degenerate=True)
    return sample


def m_half_line(coeffs, window, z, side: str = "left", n: int | None = None,
                pole_rtol: float = 1e-12):
    """Half-line m-function at a site.

    left:  m_minus(z, n) = -phi(z, n-1) / (a(n-1) phi(z, n))
    right: m_plus(z, n)  = -u_plus(z, n+1) / (a(n) u_plus(z, n))
    """
    if n is None:
        n = window.n_right - 1
    if side == "left":
        phi = phi_fundamental(coeffs, window, z)
        num = phi.value(n - 1)
        den = coeffs.a(n - 1) * phi.value(n)
        ref = coeffs.a(n - 1) * abs(num)   # local: a pole means |m| blows up
    elif side == "right":
        up = u_plus(coeffs, window, z)
        num = up.value(n + 1)
        den = coeffs.a(n) * up.value(n)
        ref = coeffs.a(n) * abs(num)
    else:
        raise JacobiWeylError("side must be 'left' or 'right'")
    if abs(den) <= pole_rtol * max(ref, 1e-300):
        zeros = phi_zeros(coeffs, window, n) if side == "left" else None
        nearest = None
        if zeros is not None and zeros.size:
            nearest = float(zeros[np.argmin(np.abs(zeros - np.real(z)))])
        raise PoleError(f"m_{side} has a pole at z={z}", nearest=nearest)
    return -num / den


def singular_m(coeffs, window, z):
    """M(z) from the Wronskians of (theta, phi) against u_plus (see module doc)."""
    th = theta_fundamental(coeffs, window, z)
    ph = phi_fundamental(coeffs, window, z)
    up = u_plus(coeffs, window, z)
    den = wronskian(coeffs, ph, up, window.n_right - 1)
    ref = coeffs.a(window.n_right - 1) * float(np.max(np.abs(ph.values)))
    if abs(den) <= 1e-13 * max(ref, 1e-300):
        raise PoleError(f"z={z} is an eigenvalue of the window")
    num = wronskian(coeffs, th, up, window.n_right - 1)
    return num / den


def weyl_m_sampler(coeffs, window) -> WeylFunction:
    """Sampler-backed WeylFunction evaluating the Wronskian ratio on grids."""

    def sampler(zs):
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        th = theta_table(coeffs, window, zs)
        ph = phi_table(coeffs, window, zs)
        up = uplus_table(coeffs, window, zs)
        a_edge = coeffs.a(window.n_right - 1)
        den = a_edge * (ph[:, -2] * up[:, -1] - ph[:, -1] * up[:, -2])
        num = a_edge * (th[:, -2] * up[:, -1] - th[:, -1] * up[:, -2])
        ref = a_edge * np.max(np.abs(ph), axis=1)
        if np.any(np.abs(den) <= 1e-13 * np.maximum(ref, 1e-300)):
            bad = zs[np.abs(den) <= 1e-13 * np.maximum(ref, 1e-300)][0]
            raise PoleError(f"z={bad} is an eigenvalue of the window")
        return num / den

    return WeylFunction(sampler=sampler, label="wronskian-sampler")


def pole_residue_form(coeffs, window) -> WeylFunction:
    """Discrete M: poles at the window eigenvalues, weights 1/gamma^2."""
    rho = spectral_measure(coeffs, window)
    return WeylFunction(poles=rho.lambdas, weights=rho.weights,
                        label="pole-residue")


def weyl_psi(coeffs, window, z) -> SolutionSample:
    """psi = M phi - theta, with G(z, n, m) = phi(z, min) psi(z, max).

    Evaluated through the exact proportionality psi = u_plus / W(phi, u_plus):
    forming M phi - theta directly cancels catastrophically at large |z|
    (psi ~ -1/(z phi) is tiny against its two terms), while the backward
    solution and the edge Wronskian are both stably computed.
    """
    ph = phi_fundamental(coeffs, window, z)
    up = u_plus(coeffs, window, z)
    den = wronskian(coeffs, ph, up, window.n_right - 1)
    ref = coeffs.a(window.n_right - 1) * float(np.max(np.abs(ph.values)))
    if abs(den) <= 1e-13 * max(ref, 1e-300):
        raise PoleError(f"z={z} is an eigenvalue of the window")
    return SolutionSample(z=z, window=window, values=up.values / den)


def green_function(coeffs, window, z, n: int, m: int):
    """Resolvent entry G(z, n, m) of the interior matrix, via phi and psi."""
    lo, hi = (n, m) if n <= m else (m, n)
    psi = weyl_psi(coeffs, window, z)
    phi = phi_fundamental(coeffs, window, z)
    return phi.value(lo) * psi.value(hi)


def m_theta_phi_defect(coeffs, window, n: int, t: float) -> float:
    """|M(it) - theta(it,n)/phi(it,n)| * t * |phi(it,n)|^2.

    Bounded in t for every fixed n: the ratio theta/phi approximates M to
    order 1/(z phi^2) along the imaginary axis (orientation per module doc).
    Direct subtraction cancels catastrophically for large t, so the identity
    M = theta(., n_R)/phi(., n_R) is used to rewrite the difference as

        chi_n(z, n_R) / (phi(z, n_R) phi(z, n)),

    where chi_n(z, m) = theta(z, m) phi(z, n) - theta(z, n) phi(z, m) is the
    solution with data chi_n(n) = 0, chi_n(n+1) = -1/a(n); every factor is
    then a plain forward recurrence with no cancellation.
    """
    z = 1j * t
    # phi on the left section, up to site n+1 (moderate magnitudes)
    phi_n, phi_n1 = 0.0 + 0j, 1.0 + 0j
    if n > window.n_left + 1:
        prev, cur = 0.0 + 0j, 1.0 + 0j
        for m in range(window.n_left + 1, n + 1):
            prev, cur = cur, ((z - coeffs.b(m)) * cur
                              - coeffs.a(m - 1) * prev) / coeffs.a(m)
        phi_n, phi_n1 = prev, cur
    else:
        # n = n_L + 1: phi(n) = 1, phi(n+1) from one step
        phi_n = 1.0 + 0j
        phi_n1 = (z - coeffs.b(n)) / coeffs.a(n)
    # joint forward propagation of (chi_n, phi) from (n, n+1) with shared scale
    chi_prev, chi_cur = 0.0 + 0j, -1.0 / coeffs.a(n)
    ph_prev, ph_cur = phi_n, phi_n1
    for m in range(n + 1, window.n_right):
        an, am, bm = coeffs.a(m), coeffs.a(m - 1), coeffs.b(m)
        chi_prev, chi_cur = chi_cur, ((z - bm) * chi_cur - am * chi_prev) / an
        ph_prev, ph_cur = ph_cur, ((z - bm) * ph_cur - am * ph_prev) / an
        big = max(abs(chi_cur), abs(ph_cur))
        if big > 1e120:
            chi_prev /= big
            chi_cur /= big
            ph_prev /= big
            ph_cur /= big
    return t * abs(chi_cur) / abs(ph_cur) * abs(phi_n)


# ---------------------------------------------------------------------------
# Stieltjes inversion

def _interval_mass_at_eps(m_fun, x0, x1, eps, quad_tol):
    if isinstance(m_fun, WeylFunction) and m_fun.poles is not None:
        lam, w = m_fun.poles, m_fun.weights
        val = np.sum(w * (np.arctan((x1 - lam) / eps) - np.arctan((x0 - lam) / eps)))
        return float(val) / math.pi

    def integrand(xs):
        return np.imag(m_fun(xs + 1j * eps))

    return adaptive_integral(integrand, x0, x1, tol=quad_tol) / math.pi


def stieltjes_inversion(m_fun, x0: float, x1: float,
                        eps_sequence=DEFAULT_EPS_SEQUENCE,
                        rtol: float = 1e-6, quad_tol: float = 1e-10) -> float:
    """Half-sum interval mass (open/closed average) by shrinking epsilon.

    Integrates Im M(x + i eps)/pi over [x0, x1] for the decreasing epsilon
    sequence and removes the leading O(eps) error by Richardson extrapolation.
    Raises InversionError (with the partial values) if the extrapolants fail
    to settle.
    """
    if not x0 < x1:
        raise JacobiWeylError("need x0 < x1")
    eps = sorted(set(float(e) for e in eps_sequence), reverse=True)
    if len(eps) < 3:
        raise JacobiWeylError("epsilon sequence needs at least 3 values")
    raw = [_interval_mass_at_eps(m_fun, x0, x1, e, quad_tol) for e in eps]
    extrap = []
    for (e0, i0), (e1, i1) in zip(zip(eps, raw), zip(eps[1:], raw[1:])):
        extrap.append((i1 * e0 - i0 * e1) / (e0 - e1))
    last, prev = extrap[-1], extrap[-2]
    if abs(last - prev) > max(rtol * abs(last), 1e-8):
        raise InversionError("inversion did not settle over the epsilon sequence",
                             partials={"eps": eps, "raw": raw, "extrapolated": extrap})
    return float(last)


# ---------------------------------------------------------------------------
# Gauge transforms and renormalization

@dataclass(frozen=True)
class GaugeTransform:
    """Real polynomial pair (g, f), coefficients ascending in z."""

    g_coeffs: tuple[float, ...] = ()
    f_coeffs: tuple[float, ...] = ()

    def g(self, z):
        if not self.g_coeffs:
            return np.zeros_like(np.asarray(z, dtype=complex))
        return _polyval_ascending(self.g_coeffs, z)

    def f(self, z):
        if not self.f_coeffs:
            return np.zeros_like(np.asarray(z, dtype=complex))
        return _polyval_ascending(self.f_coeffs, z)

    @property
    def constant_g(self) -> bool:
        return len(self.g_coeffs) <= 1


def gauge_apply(tr: GaugeTransform, theta: SolutionSample, phi: SolutionSample,
                m_fun: WeylFunction, rho: SpectralMeasure):
    """(theta~, phi~, M~, rho~) under theta~ = e^{-g} theta - f phi, phi~ = e^g phi.

    W(theta~, phi~) = W(theta, phi); measure weights pick up e^{-2g(lambda)}.
    """
    if theta.z != phi.z or theta.window != phi.window:
        raise JacobiWeylError("theta and phi samples must share z and window")
    z = theta.z
    g_z = complex(np.asarray(tr.g(z), dtype=complex))
    f_z = complex(np.asarray(tr.f(z), dtype=complex))
    theta_t = SolutionSample(z=z, window=theta.window,
                             values=np.exp(-g_z) * theta.values - f_z * phi.values)
    phi_t = SolutionSample(z=z, window=phi.window,
                           values=np.exp(g_z) * phi.values)
    m_t = m_fun.gauge(tr.g_coeffs, tr.f_coeffs)
    factors = np.exp(-2.0 * np.real(np.asarray(tr.g(rho.lambdas), dtype=complex)))
    rho_t = rho.rescaled(factors)
    return theta_t, phi_t, m_t, rho_t


def herglotz_normalize(rho: SpectralMeasure, g_coeffs=()) -> WeylFunction:
    """Herglotz pole form from a measure: sum e^{-2g(lam_k)} w_k / (lam_k - z)."""
    g_coeffs = tuple(float(c) for c in g_coeffs)
    if g_coeffs:
        factors = np.exp(-2.0 * np.real(_polyval_ascending(g_coeffs, rho.lambdas)))
    else:
        factors = np.ones_like(rho.weights)
    return WeylFunction(poles=rho.lambdas, weights=rho.weights * factors,
                        label="herglotz-normalized")


# ---------------------------------------------------------------------------
# Integral representation residual

def ghat_preset(name, genus_p: int = 0):
    """Positive entire weights for the integral representation."""
    if callable(name):
        return name
    if name in (None, "one", 1):
        return lambda z: np.ones_like(np.asarray(z, dtype=complex))
    if name == "exp-even":
        power = 2 * math.ceil((genus_p + 1) / 2)
        return lambda z: np.exp(np.asarray(z, dtype=complex) ** power)
    raise JacobiWeylError(f"unknown ghat preset {name!r}")


@dataclass(frozen=True)
class EntirePartResult:
    z_grid: np.ndarray
    values: np.ndarray
    skipped: np.ndarray   # boolean mask: grid point fell on an atom

    def reality_defect(self) -> float:
        """max |Im E| over usable real grid points."""
        ok = ~self.skipped & (np.abs(np.imag(self.z_grid)) < 1e-14)
        if not np.any(ok):
            return 0.0
        return float(np.max(np.abs(np.imag(self.values[ok]))))

    def spread(self) -> float:
        """max deviation from the mean over usable points (constant-E check)."""
        ok = ~self.skipped
        vals = self.values[ok]
        if vals.size == 0:
            return 0.0
        return float(np.max(np.abs(vals - np.mean(vals))))


def integral_representation_residual(m_fun, rho: SpectralMeasure, ghat,
                                     z_grid, atom_tol: float = 1e-9,
                                     genus_p: int = 0) -> EntirePartResult:
    """E(z) = M(z) - ghat(z) * sum_k (1/(lam_k - z) - lam_k/(1+lam_k^2)) w_k/ghat(lam_k)."""
    gh = ghat_preset(ghat, genus_p)
    z_grid = np.atleast_1d(np.asarray(z_grid, dtype=complex))
    lam, w = rho.lambdas, rho.weights
    gl = np.real(np.asarray(gh(lam.astype(complex)), dtype=complex))
    vals = np.empty(z_grid.shape, dtype=complex)
    skipped = np.zeros(z_grid.shape, dtype=bool)
    for i, z in enumerate(z_grid):
        if np.min(np.abs(z - lam)) < atom_tol:
            skipped[i] = True
            vals[i] = np.nan
            continue
        core = np.sum((1.0 / (lam - z) - lam / (1.0 + lam ** 2)) * w / gl)
        vals[i] = m_fun(z) - complex(np.asarray(gh(z), dtype=complex)) * core
    return EntirePartResult(z_grid=z_grid, values=vals, skipped=skipped)


# ---------------------------------------------------------------------------
# Support classification

def free_halfline_m(z):
    """Closed-form Weyl function of the free half-line operator.

    Herglotz branch of (-z + sqrt(z^2 - 4))/2 (branch cut [-2, 2]); used as a
    known-answer validator for the grid classifier.
    """
    z = np.asarray(z, dtype=complex)
    root = np.sqrt(z - 2.0) * np.sqrt(z + 2.0)
    return (-z + root) / 2.0


@dataclass(frozen=True)
class SupportTag:
    lam: float
    tag: str
    im_values: tuple[float, ...]
    eps_im_values: tuple[float, ...]


def classify_support(m_eval, lam_grid, eps_sequence=DEFAULT_EPS_SEQUENCE,
                     atom_tol: float = 1e-3, ac_tol: float = 1e-3) -> list[SupportTag]:
    """Tag grid points by the boundary behavior of Im M(lambda + i eps).

    pp:   eps * Im M stabilizes at a positive value (point mass)
    ac:   Im M stabilizes at a finite positive value
    s:    Im M grows without settling while eps * Im M -> 0
    none: Im M -> 0
    """
    eps = np.sort(np.asarray(list(eps_sequence), dtype=float))[::-1]
    tags = []
    for lam in np.atleast_1d(np.asarray(lam_grid, dtype=float)):
        y = np.array([float(np.imag(m_eval(lam + 1j * e))) for e in eps])
        p = eps * y
        tag = "inconclusive"
        p_stable = abs(p[-1] - p[-2]) <= 0.25 * abs(p[-1]) + 1e-15
        y_stable = abs(y[-1] - y[-2]) <= 0.25 * abs(y[-1]) + 1e-15
        if p[-1] > atom_tol and p_stable:
            tag = "pp"
        elif y[-1] > ac_tol and y_stable and p[-1] <= atom_tol:
            tag = "ac"
        elif y[-1] > 3.0 * y[max(len(y) - 3, 0)] and y[-1] > ac_tol and p[-1] <= atom_tol:
            tag = "s"
        elif abs(y[-1]) <= ac_tol:
            tag = "none"
        tags.append(SupportTag(lam=float(lam), tag=tag,
                               im_values=tuple(y), eps_im_values=tuple(p)))
    return tags
