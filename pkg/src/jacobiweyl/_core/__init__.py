"""Kernel dispatch: compiled extension when importable, numpy fallback otherwise.

Set JACOBIWEYL_BACKEND=python to force the fallback (used by the benchmark and
by tests that compare the two backends).
"""

from __future__ import annotations

import os

import numpy as np

from ..errors import EigenConvergenceError
from . import fallback as _fallback

_impl = _fallback
BACKEND = "python"

if os.environ.get("JACOBIWEYL_BACKEND", "").lower() not in ("python", "fallback"):
    try:
        from . import _corekernels as _compiled

        _impl = _compiled
        BACKEND = "compiled"
    except ImportError:
        pass


def backend_name() -> str:
    return BACKEND


def propagate_grid(a, b, zs, u0, u1, forward=True):
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    zs = np.ascontiguousarray(zs)
    if np.iscomplexobj(zs):
        zs = zs.astype(np.complex128, copy=False)
    else:
        zs = zs.astype(np.float64, copy=False)
    return _impl.propagate_grid(a, b, zs, float(u0), float(u1), forward)


def tridiag_eigen(d, e, want_vectors=False, max_sweeps=50):
    w, v, fail = _impl.tridiag_eigen(d, e, want_vectors, max_sweeps)
    if fail >= 0:
        raise EigenConvergenceError(index=int(fail), sweeps=max_sweeps)
    return w, v
