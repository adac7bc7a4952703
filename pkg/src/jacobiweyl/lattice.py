"""Lattice windows, the difference expression, Wronskians, and recurrence solving.

A window [n_L, n_R] carries Dirichlet conditions (value 0) at both ends; the
operator itself acts on the interior sites n_L+1 .. n_R-1.  The fundamental
system is normalized by

    phi(z, n_L) = 0,        phi(z, n_L + 1) = 1,
    theta(z, n_L) = 1/a(n_L),  theta(z, n_L + 1) = 0,

which gives W(theta, phi) = 1 at every site and makes phi(., n) a polynomial
of degree n - n_L - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _core
from .coeffs import CoefficientModel
from .errors import WindowError

_RESCALE_LIMIT = 1e120


@dataclass(frozen=True)
class LatticeWindow:
    """Truncation window with Dirichlet conditions at both endpoints."""

    n_left: int
    n_right: int

    BOUNDARY = "dirichlet"

    def __post_init__(self):
        if self.n_right - self.n_left < 2:
            raise WindowError("window needs at least 3 sites (one interior site)")

    @property
    def n_sites(self) -> int:
        return self.n_right - self.n_left + 1

    @property
    def n_interior(self) -> int:
        return self.n_right - self.n_left - 1

    def sites(self) -> np.ndarray:
        return np.arange(self.n_left, self.n_right + 1)

    def interior(self) -> np.ndarray:
        return np.arange(self.n_left + 1, self.n_right)

    def contains(self, n: int) -> bool:
        return self.n_left <= n <= self.n_right

    def index(self, n: int) -> int:
        if not self.contains(n):
            raise WindowError(f"site {n} outside window [{self.n_left}, {self.n_right}]")
        return n - self.n_left


@dataclass(frozen=True)
class SolutionSample:
    """Values of a solution of tau u = z u over a window at fixed z.

    When `log_scale` is present the true value at site n is
    values[i] * exp(log_scale[i]); samples produced jointly share the same
    scale so ratios of their raw values are exact.
    """

    z: complex
    window: LatticeWindow
    values: np.ndarray
    degenerate: bool = False
    log_scale: np.ndarray | None = None

    def value(self, n: int):
        return self.values[self.window.index(n)]

    def log_abs(self, n: int) -> float:
        """log |u(n)|, valid also for rescaled samples."""
        i = self.window.index(n)
        mag = abs(self.values[i])
        base = math.log(mag) if mag > 0 else -math.inf
        if self.log_scale is not None:
            base += self.log_scale[i]
        return base

    def residual(self, coeffs: CoefficientModel) -> float:
        """Max recurrence defect over interior sites (unscaled samples only)."""
        if self.log_scale is not None:
            raise ValueError("residual() expects an unscaled sample")
        w = self.window
        worst = 0.0
        for n in w.interior():
            lhs = apply_tau(coeffs, self, n)
            worst = max(worst, abs(lhs - self.z * self.value(n)))
        return worst


def _seq_value(f, n: int):
    if isinstance(f, SolutionSample):
        return f.value(n)
    if callable(f):
        return f(n)
    return f[n]


def coefficient_arrays(coeffs: CoefficientModel, window: LatticeWindow):
    """(a over bonds n_L..n_R-1, b over sites n_L..n_R with unread ends zeroed)."""
    a = coeffs.a_array(window.n_left, window.n_right - 1)
    b = np.zeros(window.n_sites)
    for n in window.interior():
        b[window.index(n)] = coeffs.b(n)
    return a, b


def apply_tau(coeffs: CoefficientModel, f, n: int):
    """(tau f)(n) = a(n) f(n+1) + a(n-1) f(n-1) + b(n) f(n)."""
    return (coeffs.a(n) * _seq_value(f, n + 1)
            + coeffs.a(n - 1) * _seq_value(f, n - 1)
            + coeffs.b(n) * _seq_value(f, n))


def wronskian(coeffs: CoefficientModel, f, g, n: int):
    """Modified Wronskian W(f,g)(n) = a(n) (f(n) g(n+1) - f(n+1) g(n))."""
    return coeffs.a(n) * (_seq_value(f, n) * _seq_value(g, n + 1)
                          - _seq_value(f, n + 1) * _seq_value(g, n))


def solve_recurrence(coeffs: CoefficientModel, z, n0: int, u0, u1,
                     window: LatticeWindow) -> SolutionSample:
    """Propagate tau u = z u across the window from u(n0), u(n0+1)."""
    if not (window.contains(n0) and window.contains(n0 + 1)):
        raise WindowError(f"initial sites {n0}, {n0 + 1} not inside the window")
    dtype = np.result_type(np.asarray(z), np.asarray(u0), np.asarray(u1), np.float64)
    u = np.zeros(window.n_sites, dtype=dtype)
    i0 = window.index(n0)
    u[i0] = u0
    u[i0 + 1] = u1
    for n in range(n0 + 1, window.n_right):
        i = window.index(n)
        u[i + 1] = ((z - coeffs.b(n)) * u[i] - coeffs.a(n - 1) * u[i - 1]) / coeffs.a(n)
    for n in range(n0, window.n_left, -1):
        i = window.index(n)
        u[i - 1] = ((z - coeffs.b(n)) * u[i] - coeffs.a(n) * u[i + 1]) / coeffs.a(n - 1)
    return SolutionSample(z=z, window=window, values=u)


def phi_fundamental(coeffs: CoefficientModel, window: LatticeWindow, z) -> SolutionSample:
    """Left-Dirichlet entire solution: phi(z, n_L) = 0, phi(z, n_L+1) = 1."""
    return solve_recurrence(coeffs, z, window.n_left, 0.0, 1.0, window)


def theta_fundamental(coeffs: CoefficientModel, window: LatticeWindow, z) -> SolutionSample:
    """Companion solution with theta(z, n_L) = 1/a(n_L), theta(z, n_L+1) = 0."""
    return solve_recurrence(coeffs, z, window.n_left,
                            1.0 / coeffs.a(window.n_left), 0.0, window)


# -- batched tables (hot path, dispatched to the kernel backend) ------------

def phi_table(coeffs, window, zs) -> np.ndarray:
    """phi values, shape (len(zs), n_sites)."""
    a, b = coefficient_arrays(coeffs, window)
    return _core.propagate_grid(a, b, np.atleast_1d(zs), 0.0, 1.0, forward=True)


def theta_table(coeffs, window, zs) -> np.ndarray:
    a, b = coefficient_arrays(coeffs, window)
    return _core.propagate_grid(a, b, np.atleast_1d(zs), 1.0 / a[0], 0.0, forward=True)


def uplus_table(coeffs, window, zs) -> np.ndarray:
    """Right-Dirichlet solution values: u(n_R) = 0, u(n_R - 1) = 1."""
    a, b = coefficient_arrays(coeffs, window)
    return _core.propagate_grid(a, b, np.atleast_1d(zs), 0.0, 1.0, forward=False)


# -- jointly rescaled propagation (overflow-safe ratios) ---------------------

def fundamental_pair_scaled(coeffs, window, z):
    """(theta, phi) propagated together with a shared per-site rescaling.

    Because both samples carry the same log_scale, theta/phi ratios of the raw
    values are exact even when |z| is large enough for the true values to
    overflow a double.
    """
    ns = window.n_sites
    th = np.zeros(ns, dtype=complex)
    ph = np.zeros(ns, dtype=complex)
    logs = np.zeros(ns)
    th[0] = 1.0 / coeffs.a(window.n_left)
    ph[1] = 1.0
    running = 0.0
    for n in range(window.n_left + 1, window.n_right):
        i = window.index(n)
        an, am, bn = coeffs.a(n), coeffs.a(n - 1), coeffs.b(n)
        th[i + 1] = ((z - bn) * th[i] - am * th[i - 1]) / an
        ph[i + 1] = ((z - bn) * ph[i] - am * ph[i - 1]) / an
        logs[i + 1] = running
        big = max(abs(th[i + 1]), abs(ph[i + 1]), abs(th[i]), abs(ph[i]))
        if big > _RESCALE_LIMIT:
            th[i:i + 2] /= big
            ph[i:i + 2] /= big
            running += math.log(big)
            logs[i] = running
            logs[i + 1] = running
    theta = SolutionSample(z=z, window=window, values=th, log_scale=logs)
    phi = SolutionSample(z=z, window=window, values=ph, log_scale=logs)
    return theta, phi


# -- polynomial views --------------------------------------------------------

def phi_polynomials(coeffs, window, exact: bool = False) -> list:
    """Coefficients (ascending in z) of phi(., n) for every site of the window.

    With exact=True the recurrence runs in Fraction arithmetic on the exact
    dyadic values of the stored coefficients; otherwise float64.
    """
    return _recurrence_polynomials(coeffs, window, left_dirichlet=True, exact=exact)


def theta_polynomials(coeffs, window, exact: bool = False) -> list:
    return _recurrence_polynomials(coeffs, window, left_dirichlet=False, exact=exact)


def _recurrence_polynomials(coeffs, window, left_dirichlet, exact):
    def conv(x):
        return Fraction(x) if exact else float(x)

    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    if left_dirichlet:
        polys = [[zero], [one]]
    else:
        polys = [[one / conv(coeffs.a(window.n_left))], [zero]]
    for n in range(window.n_left + 1, window.n_right):
        an, am, bn = conv(coeffs.a(n)), conv(coeffs.a(n - 1)), conv(coeffs.b(n))
        cur, prev = polys[-1], polys[-2]
        nxt = [zero] * (len(cur) + 1)
        for k, c in enumerate(cur):
            nxt[k + 1] += c          # z * cur
            nxt[k] -= bn * c
        for k, c in enumerate(prev):
            nxt[k] -= am * c
        polys.append([c / an for c in nxt])
    return polys


def poly_eval(coeffs_ascending, z):
    """Horner evaluation of an ascending coefficient list at complex z."""
    acc = 0j if isinstance(z, complex) else 0.0
    for c in reversed(coeffs_ascending):
        acc = acc * z + float(c)
    return acc


# -- zeros of phi(., site) via the classical sign-count bisection ------------

def _phi_sign_count(coeffs, window, site, x: float) -> int:
    """Number of zeros of phi(., site) strictly below x.

    Counted as sign agreements between consecutive members of the sequence
    phi(x, n_L+1), ..., phi(x, site), with a zero value taking the sign
    opposite to its predecessor.  The pair is rescaled each step so only signs
    survive.
    """
    prev = 0.0      # phi(x, n_L)
    cur = 1.0       # phi(x, n_L + 1)
    count = 0
    sign_prev = 1
    for n in range(window.n_left + 1, site):
        nxt = ((x - coeffs.b(n)) * cur - coeffs.a(n - 1) * prev) / coeffs.a(n)
        prev, cur = cur, nxt
        big = max(abs(prev), abs(cur))
        if big > 1e100:
            prev /= big
            cur /= big
        if cur > 0:
            sign_cur = 1
        elif cur < 0:
            sign_cur = -1
        else:
            sign_cur = -sign_prev
        if sign_cur == sign_prev:
            count += 1
        sign_prev = sign_cur
    return count


def spectral_bounds(coeffs, window) -> tuple[float, float]:
    """Gershgorin-type enclosure of all interior eigenvalues."""
    lo = math.inf
    hi = -math.inf
    for n in window.interior():
        radius = coeffs.a(n - 1) + coeffs.a(n)
        lo = min(lo, coeffs.b(n) - radius)
        hi = max(hi, coeffs.b(n) + radius)
    return lo - 1e-8, hi + 1e-8


def phi_zeros(coeffs, window, site: int | None = None, tol: float = 1e-13) -> np.ndarray:
    """All zeros of phi(., site) by bisection on the sign-count function.

    This is the polynomial-root route; it is algorithmically independent of
    the QL eigensolver in `spectra` and is used to cross-check it.
    """
    if site is None:
        site = window.n_right
    nz = site - window.n_left - 1
    if nz <= 0:
        return np.array([])
    lo, hi = spectral_bounds(coeffs, window)
    scale = max(abs(lo), abs(hi), 1.0)

    def count(x):
        return _phi_sign_count(coeffs, window, site, x)

    roots = []
    stack = [(lo, hi, 0, nz)]
    while stack:
        x0, x1, c0, c1 = stack.pop()
        k = c1 - c0
        if k == 0:
            continue
        if x1 - x0 <= tol * scale:
            roots.extend([(x0 + x1) / 2.0] * k)
            continue
        xm = 0.5 * (x0 + x1)
        cm = count(xm)
        stack.append((x0, xm, c0, cm))
        stack.append((xm, x1, cm, c1))
    return np.sort(np.array(roots))


def refine_phi_zero(coeffs, window, site: int, lam: float, steps: int = 3) -> float:
    """Newton-polish a zero of phi(., site) using the derivative recurrence."""
    for _ in range(steps):
        p_prev, p_cur = 0.0, 1.0
        d_prev, d_cur = 0.0, 0.0
        for n in range(window.n_left + 1, site):
            an, am, bn = coeffs.a(n), coeffs.a(n - 1), coeffs.b(n)
            p_nxt = ((lam - bn) * p_cur - am * p_prev) / an
            d_nxt = ((lam - bn) * d_cur + p_cur - am * d_prev) / an
            p_prev, p_cur = p_cur, p_nxt
            d_prev, d_cur = d_cur, d_nxt
        if d_cur == 0.0:
            break
        step = p_cur / d_cur
        lam -= step
        if abs(step) < 1e-16 * max(1.0, abs(lam)):
            break
    return lam
