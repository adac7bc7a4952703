"""Eigenvalues of truncated operators, spectral measures, and growth estimates.

The interior matrix of a window [n_L, n_R] is symmetric tridiagonal with
diagonal b(n_L+1..n_R-1) and off-diagonal a(n_L+1..n_R-2); its eigenvalues
are exactly the zeros of phi(., n_R).  The spectral measure attaches to each
eigenvalue lambda_k the weight 1/gamma_k^2 with gamma_k^2 = sum_m phi(lambda_k, m)^2
over the interior sites; under the left-Dirichlet normalization of phi the
weights sum to one.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _core
from .coeffs import CoefficientModel
from .errors import InterlacingError, JacobiWeylError, WindowError
from .lattice import LatticeWindow

NORMALIZATION = "phi-left-dirichlet"


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    residuals: np.ndarray

    @property
    def size(self) -> int:
        return self.eigenvalues.size


def interior_tridiagonal(coeffs: CoefficientModel, window: LatticeWindow):
    """(diagonal, off-diagonal) of the interior-site matrix."""
    interior = window.interior()
    d = np.array([coeffs.b(n) for n in interior])
    e = np.array([coeffs.a(n) for n in interior[:-1]])
    return d, e


def eigen_tridiagonal(coeffs, window, vectors: bool = False,
                      max_sweeps: int = 50) -> SpectrumResult:
    """Eigen decomposition of the interior matrix (from-scratch QL iteration)."""
    d, e = interior_tridiagonal(coeffs, window)
    w, v = _core.tridiag_eigen(d, e, want_vectors=vectors, max_sweeps=max_sweeps)
    if np.any(np.diff(w) <= 0):
        raise JacobiWeylError("tridiagonal spectrum must be simple; got a repeat")
    if v is not None:
        # canonical sign: largest-magnitude component positive
        for k in range(v.shape[1]):
            j = int(np.argmax(np.abs(v[:, k])))
            if v[j, k] < 0:
                v[:, k] = -v[:, k]
        res = _residuals(d, e, w, v)
    else:
        scale = np.max(np.abs(d)) + 2.0 * (np.max(np.abs(e)) if e.size else 0.0)
        res = np.full(w.shape, np.finfo(float).eps * max(scale, 1.0))
    return SpectrumResult(eigenvalues=w, eigenvectors=v, residuals=res)


def _residuals(d, e, w, v):
    n = d.size
    res = np.empty(n)
    for k in range(n):
        vk = v[:, k]
        hv = d * vk
        if n > 1:
            hv[:-1] += e * vk[1:]
            hv[1:] += e * vk[:-1]
        res[k] = np.max(np.abs(hv - w[k] * vk))
    return res


def restriction_spectra(coeffs, window, n: int, tol: float = 1e-10):
    """Zeros of phi(., n) and phi(., n+1): spectra of the left restrictions.

    Returned as (mu, nu) with len(nu) = len(mu) + 1; nu strictly interlaces mu.
    mu is empty (legal) when n = n_L + 1.
    """
    if not (window.n_left + 1 <= n < window.n_right):
        raise WindowError(f"site {n} not interior to the window")
    mu = sub_window_eigenvalues(coeffs, window, n)
    nu = sub_window_eigenvalues(coeffs, window, n + 1)
    check_interlacing(mu, nu, tol=tol)
    return mu, nu


def sub_window_eigenvalues(coeffs, window, site):
    """Eigenvalues of the sub-matrix on sites n_L+1 .. site-1 (zeros of phi(., site))."""
    if site - window.n_left - 1 <= 0:
        return np.array([])
    sub = LatticeWindow(window.n_left, site)
    d, e = interior_tridiagonal(coeffs, sub)
    w, _ = _core.tridiag_eigen(d, e, want_vectors=False)
    return w


def check_interlacing(mu, nu, tol: float = 1e-10):
    """Require nu[0] < mu[0] < nu[1] < mu[1] < ... after sorting.

    A crossing larger than tol*scale is a violation; tinier misorderings are
    forgiven as eigensolver noise (true restriction spectra interlace
    strictly, but the gaps can be arbitrarily small)."""
    mu = np.asarray(mu, dtype=float)
    nu = np.asarray(nu, dtype=float)
    if nu.size not in (mu.size, mu.size + 1):
        raise InterlacingError(f"incompatible list lengths {mu.size} / {nu.size}")
    if mu.size == 0:
        return
    scale = max(1.0, float(np.abs(mu).max()), float(np.abs(nu).max()))
    margin = tol * scale
    for j in range(mu.size):
        if nu[j] - mu[j] > margin:
            raise InterlacingError(f"nu[{j}]={nu[j]} does not lie below mu[{j}]={mu[j]}")
        if j + 1 < nu.size and mu[j] - nu[j + 1] > margin:
            raise InterlacingError(f"mu[{j}]={mu[j]} does not lie below nu[{j + 1}]={nu[j + 1]}")


def _two_sided_phi(coeffs, window, lam: float):
    """phi(lam, .) assembled from forward and backward sweeps.

    Forward recurrence alone loses the right-edge zero for localized
    eigenvectors (noise rides the growing solution past the peak), so the
    left-normalized branch L and the right-Dirichlet branch R are matched at
    the site where |L R| peaks.  Returns (phi values, wronskian of L and R at
    the matching site, its lambda-derivative, the wronskian term scale).
    """
    nl, nr = window.n_left, window.n_right
    ns = window.n_sites
    L = np.zeros(ns)
    Lp = np.zeros(ns)
    L[1] = 1.0
    for n in range(nl + 1, nr):
        i = n - nl
        an, am, bn = coeffs.a(n), coeffs.a(n - 1), coeffs.b(n)
        L[i + 1] = ((lam - bn) * L[i] - am * L[i - 1]) / an
        Lp[i + 1] = ((lam - bn) * Lp[i] + L[i] - am * Lp[i - 1]) / an
    R = np.zeros(ns)
    Rp = np.zeros(ns)
    R[ns - 2] = 1.0
    for n in range(nr - 1, nl, -1):
        i = n - nl
        an, am, bn = coeffs.a(n), coeffs.a(n - 1), coeffs.b(n)
        R[i - 1] = ((lam - bn) * R[i] - an * R[i + 1]) / am
        Rp[i - 1] = ((lam - bn) * Rp[i] + R[i] - an * Rp[i + 1]) / am
    # match where both branches are healthy over the pair (m, m+1); the pair
    # sums keep the scale away from zero at eigenvector nodes
    strength = (np.abs(L[:ns - 1]) + np.abs(L[1:])) \
        * (np.abs(R[:ns - 1]) + np.abs(R[1:]))
    m = int(np.argmax(strength[1:ns - 1])) + 1
    a_m = coeffs.a(nl + m)
    wron = a_m * (L[m] * R[m + 1] - L[m + 1] * R[m])
    dwron = a_m * (Lp[m] * R[m + 1] + L[m] * Rp[m + 1]
                   - Lp[m + 1] * R[m] - L[m + 1] * Rp[m])
    scale = a_m * (abs(L[m]) + abs(L[m + 1])) * (abs(R[m]) + abs(R[m + 1]))
    # the branch ratio must come from the stronger site of the pair: at an
    # eigenvector node both branches are pure rounding noise and their
    # quotient is garbage
    j = m if abs(L[m] * R[m]) >= abs(L[m + 1] * R[m + 1]) else m + 1
    phi = L.copy()
    if R[j] != 0.0:
        kappa = L[j] / R[j]
        phi[j:] = kappa * R[j:]
    return phi, wron, dwron, scale


def refine_eigenvalue(coeffs, window, lam: float, steps: int = 3) -> float:
    """Newton-polish an eigenvalue on the matched-branch Wronskian."""
    for _ in range(steps):
        _, wron, dwron, _ = _two_sided_phi(coeffs, window, lam)
        if dwron == 0.0:
            break
        step = wron / dwron
        lam -= step
        if abs(step) < 1e-16 * max(1.0, abs(lam)):
            break
    return lam


def norming_constants(coeffs, window, eigenvalues, tol: float = 1e-8) -> np.ndarray:
    """gamma^2 = sum over interior sites of phi(lambda, m)^2 at each eigenvalue.

    Values are validated through the matched-branch Wronskian: a point that
    is not an eigenvalue of the window (within tol, relative to the Wronskian
    term size) is rejected.
    """
    lam = np.atleast_1d(np.asarray(eigenvalues, dtype=float))
    out = np.empty(lam.size)
    for k, x in enumerate(lam):
        phi, wron, _, scale = _two_sided_phi(coeffs, window, float(x))
        if abs(wron) > tol * max(scale, 1e-300):
            raise JacobiWeylError(
                f"{x} is not an eigenvalue of the window "
                f"(relative Wronskian defect {abs(wron) / scale:.3e})")
        out[k] = float(np.sum(phi[1:-1] ** 2))
    return out


@dataclass(frozen=True)
class SpectralMeasure:
    """Finite atomic measure sum_k w_k * delta(lambda_k)."""

    lambdas: np.ndarray
    weights: np.ndarray
    normalization: str = NORMALIZATION
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if lam.shape != w.shape:
            raise JacobiWeylError("atom arrays must align")
        if np.any(np.diff(lam) <= 0):
            raise JacobiWeylError("atoms must be sorted strictly ascending")
        if np.any(w <= 0):
            raise JacobiWeylError("weights must be positive")
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "weights", w)

    @property
    def natoms(self) -> int:
        return self.lambdas.size

    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    def moment(self, order: int) -> float:
        return float(np.sum(self.weights * self.lambdas ** order))

    def rescaled(self, factors) -> "SpectralMeasure":
        return SpectralMeasure(self.lambdas, self.weights * np.asarray(factors),
                               normalization=self.normalization,
                               meta=dict(self.meta))

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "atoms": [{"lambda": lam, "weight": w}
                      for lam, w in zip(self.lambdas, self.weights)],
            "normalization": self.normalization,
        }
        if self.meta:
            doc["meta"] = self.meta
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SpectralMeasure":
        doc = json.loads(text)
        atoms = doc["atoms"]
        lam = np.array([float(p["lambda"]) for p in atoms])
        w = np.array([float(p["weight"]) for p in atoms])
        return cls(lam, w, normalization=doc.get("normalization", NORMALIZATION),
                   meta=doc.get("meta", {}))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["lambda", "weight"])
        for lam, w in zip(self.lambdas, self.weights):
            writer.writerow([format(lam, ".17g"), format(w, ".17g")])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SpectralMeasure":
        rows = list(csv.reader(io.StringIO(text)))
        body = [r for r in rows[1:] if r]
        lam = np.array([float(r[0]) for r in body])
        w = np.array([float(r[1]) for r in body])
        return cls(lam, w)


def eigenfunction_table(coeffs, window, lambdas) -> np.ndarray:
    """phi(lambda_k, .) over all window sites, one row per eigenvalue.

    Rows are assembled two-sidedly (see _two_sided_phi): at an eigenvalue the
    forward recurrence alone cannot represent the decaying tail of a
    localized eigenvector.
    """
    lam = np.atleast_1d(np.asarray(lambdas, dtype=float))
    rows = [_two_sided_phi(coeffs, window, float(x))[0] for x in lam]
    return np.vstack(rows)


def spectral_measure(coeffs, window, polish: bool = True) -> SpectralMeasure:
    """Atomic spectral measure of the window operator: weights 1/gamma^2."""
    spec = eigen_tridiagonal(coeffs, window)
    lam = spec.eigenvalues
    if polish:
        lam = np.array([refine_eigenvalue(coeffs, window, x) for x in lam])
    gamma2 = norming_constants(coeffs, window, lam)
    return SpectralMeasure(lam, 1.0 / gamma2,
                           meta={"window": [window.n_left, window.n_right]})


# -- convergence exponent / genus estimation --------------------------------

@dataclass(frozen=True)
class ExponentEstimate:
    value: float
    uncertainty: float
    flags: tuple[str, ...]


@dataclass(frozen=True)
class GenusEstimate:
    value: int
    flags: tuple[str, ...]


def convergence_exponent(moduli, complete: bool = False) -> ExponentEstimate:
    """Estimate inf{ s : sum 1/(1+|mu|^s) < inf } from a sorted modulus list.

    The estimator regresses log N(r) against log r for the counting function
    N(r) = #{ |mu_j| <= r } over the upper 80% of the list; it assumes the
    input is a truncation of an infinite sequence.  Pass complete=True for a
    genuinely finite set (then s = 0 exactly).
    """
    r = np.sort(np.asarray(moduli, dtype=float))
    if np.any(r <= 0):
        raise JacobiWeylError("moduli must be positive")
    if complete:
        return ExponentEstimate(0.0, 0.0, ("finite-set",))
    if r.size < 10:
        raise JacobiWeylError("need at least 10 moduli to estimate the exponent")
    j0 = r.size // 5
    x = np.log(r[j0:])
    y = np.log(np.arange(j0 + 1, r.size + 1, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    denom = np.sum((x - x.mean()) ** 2)
    stderr = math.sqrt(max(np.sum(resid ** 2), 0.0) / max(x.size - 2, 1) / denom)
    flags = ["estimate"]
    decades = (x.max() - x.min()) / math.log(10.0)
    if decades < 1.0:
        flags.append("narrow-range")
    return ExponentEstimate(float(slope), max(2.0 * stderr, 0.02), tuple(flags))


def genus(moduli, complete: bool = False, rel_tail_tol: float = 0.02,
          p_max: int = 12) -> GenusEstimate:
    """Smallest integer p with sum 1/(1+|mu|^(p+1)) < inf, by partial-sum tails.

    Convergence is declared when the second half of the list contributes less
    than rel_tail_tol of the total (documented cutoff).
    """
    r = np.sort(np.asarray(moduli, dtype=float))
    if np.any(r <= 0):
        raise JacobiWeylError("moduli must be positive")
    if complete:
        return GenusEstimate(0, ("finite-set",))
    if r.size < 10:
        raise JacobiWeylError("need at least 10 moduli to estimate the genus")
    half = r.size // 2
    for p in range(p_max + 1):
        terms = 1.0 / (1.0 + r ** (p + 1))
        total = float(np.sum(terms))
        tail = float(np.sum(terms[half:]))
        ratio = tail / max(total, 1.0)
        if ratio <= rel_tail_tol:
            flags = ["estimate"]
            if ratio > 0.5 * rel_tail_tol:
                flags.append("near-cutoff")
            return GenusEstimate(p, tuple(flags))
    return GenusEstimate(p_max, ("estimate", "cutoff-exhausted"))


# -- discreteness probe ------------------------------------------------------

@dataclass(frozen=True)
class DiscretenessReport:
    verdict: str
    evidence: dict


def discreteness_probe(coeffs, side: str = "left",
                       sizes=(8, 16, 32, 64), anchor: int = 0,
                       n_track: int = 4) -> DiscretenessReport:
    """Heuristic verdict on whether the half-line restriction looks discrete.

    Grows Dirichlet windows toward the chosen side and watches (a) stability
    of the lowest eigenvalues and (b) the minimal gap in the bulk.  The output
    is evidence, never a proof.
    """
    if side not in ("left", "right"):
        raise JacobiWeylError("side must be 'left' or 'right'")
    lo, hi = coeffs.support()
    if lo is not None and hi is not None:
        return DiscretenessReport("discrete-likely",
                                  {"reason": "finite coefficient window"})
    spectra = []
    for size in sizes:
        if side == "left":
            window = LatticeWindow(anchor - size - 1, anchor)
        else:
            window = LatticeWindow(anchor, anchor + size + 1)
        d, e = interior_tridiagonal(coeffs, window)
        w, _ = _core.tridiag_eigen(d, e)
        spectra.append(w)
    low_shift = []
    for w0, w1 in zip(spectra[:-1], spectra[1:]):
        k = min(n_track, w0.size, w1.size)
        low_shift.append(float(np.max(np.abs(w0[:k] - w1[:k]))))
    min_gaps = [float(np.min(np.diff(w))) if w.size > 1 else math.inf
                for w in spectra]
    evidence = {"low_eigenvalue_shift": low_shift, "min_gap": min_gaps,
                "sizes": list(sizes)}
    scale = max(1.0, float(np.max(np.abs(spectra[-1]))))
    if low_shift[-1] < 1e-6 * scale:
        return DiscretenessReport("discrete-likely", evidence)
    if min_gaps[-1] < 0.6 * min_gaps[0] and min_gaps[-1] < 0.1 * scale:
        return DiscretenessReport("continuous-likely", evidence)
    return DiscretenessReport("inconclusive", evidence)
