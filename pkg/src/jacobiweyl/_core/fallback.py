"""Pure numpy implementations of the hot kernels.

The compiled extension (`_corekernels`) provides the same two entry points;
whichever is available is selected in `jacobiweyl._core`.  Both raise nothing:
the eigensolver reports failure through its third return value so the wrapper
can attach a proper exception.
"""

from __future__ import annotations

import math

import numpy as np


def propagate_grid(a, b, zs, u0, u1, forward=True):
    """Solve the three-term recurrence for every spectral parameter in `zs`.

    `a[i]`, `b[i]` are the coefficients at window offset i (b[0] and b[-1] are
    never read).  Forward propagation seeds u[0]=u0, u[1]=u1; backward seeds
    u[-1]=u0, u[-2]=u1.  Returns an array of shape (len(zs), len(b)).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    zs = np.asarray(zs)
    ns = b.shape[0]
    dtype = np.complex128 if np.iscomplexobj(zs) else np.float64
    out = np.empty((zs.shape[0], ns), dtype=dtype)
    if forward:
        out[:, 0] = u0
        out[:, 1] = u1
        for i in range(1, ns - 1):
            out[:, i + 1] = ((zs - b[i]) * out[:, i] - a[i - 1] * out[:, i - 1]) / a[i]
    else:
        out[:, ns - 1] = u0
        out[:, ns - 2] = u1
        for i in range(ns - 2, 0, -1):
            out[:, i - 1] = ((zs - b[i]) * out[:, i] - a[i] * out[:, i + 1]) / a[i - 1]
    return out


def tridiag_eigen(d_in, e_in, want_vectors=False, max_sweeps=50):
    """Implicit-shift QL iteration for a symmetric tridiagonal matrix.

    Returns (eigenvalues ascending, eigenvector matrix or None, fail_index);
    fail_index is -1 on success, otherwise the eigenvalue index that did not
    converge within `max_sweeps` sweeps.
    """
    d = np.array(d_in, dtype=np.float64, copy=True)
    n = d.shape[0]
    e = np.zeros(n, dtype=np.float64)
    if n > 1:
        e[: n - 1] = np.asarray(e_in, dtype=np.float64)
    v = np.eye(n) if want_vectors else None
    eps = np.finfo(np.float64).eps

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                return d, v, l
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                bb = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * bb
                p = s * r
                d[i + 1] = g + p
                g = c * r - bb
                if v is not None:
                    col_i = v[:, i].copy()
                    col_j = v[:, i + 1].copy()
                    v[:, i + 1] = s * col_i + c * col_j
                    v[:, i] = c * col_i - s * col_j
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0

    order = np.argsort(d, kind="stable")
    d = d[order]
    if v is not None:
        v = v[:, order]
    return d, v, -1
