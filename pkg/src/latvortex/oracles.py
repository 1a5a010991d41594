"""Dense reference solvers for small boxes.

These deliberately avoid :class:`~latvortex.lattice.Domain` and the
matrix-free operators: vertices are enumerated with ``itertools.product``
and the Dirichlet Laplacian is assembled entry by entry from coordinates.
They exist to cross-check the production path.
"""

from __future__ import annotations

import math
from itertools import product

import numpy as np


def box_vertices(center, half_width):
    return sorted(product(*[range(c - half_width, c + half_width + 1) for c in center]))


def dense_dirichlet_laplacian(vertices) -> np.ndarray:
    """``(Lap u)(x) = sum_{y~x} (u(y) - u(x))`` with ``u = 0`` off ``vertices``."""
    index = {v: i for i, v in enumerate(vertices)}
    n = len(vertices[0])
    A = np.zeros((len(vertices), len(vertices)))
    for v, i in index.items():
        A[i, i] = -2.0 * n
        for axis in range(n):
            for step in (-1, 1):
                w = list(v)
                w[axis] += step
                j = index.get(tuple(w))
                if j is not None:
                    A[i, j] += 1.0
    return A


def dense_screened_solve(vertices, K, rhs) -> np.ndarray:
    """Gaussian elimination for ``(Lap - K) u = rhs``."""
    L = dense_dirichlet_laplacian(vertices)
    return np.linalg.solve(L - K * np.eye(len(vertices)), np.asarray(rhs, dtype=float))


def dense_source(vertices, vortices) -> np.ndarray:
    index = {v: i for i, v in enumerate(vertices)}
    g = np.zeros(len(vertices))
    for p, mult in vortices:
        g[index[tuple(p)]] += 4.0 * math.pi * mult
    return g


def dense_newton(vertices, lam, vortices, model="cs", u0=None, tol=1e-13, max_iter=200) -> np.ndarray:
    """Damped Newton on the dense system ``Lap u - N(u) - g = 0``.

    ``model`` is ``"cs"`` for ``N(u) = lam e^u (e^u - 1)`` or ``"ah"`` for
    ``N(u) = lam (e^u - 1)``.
    """
    L = dense_dirichlet_laplacian(vertices)
    g = dense_source(vertices, vortices)

    if model == "cs":
        def N(u):
            return lam * np.exp(u) * (np.exp(u) - 1.0)

        def dN(u):
            return lam * (2.0 * np.exp(2.0 * u) - np.exp(u))
    elif model == "ah":
        def N(u):
            return lam * (np.exp(u) - 1.0)

        def dN(u):
            return lam * np.exp(u)
    else:
        raise ValueError(model)

    u = np.zeros(len(vertices)) if u0 is None else np.array(u0, dtype=float)
    F = L @ u - N(u) - g
    for _ in range(max_iter):
        if np.max(np.abs(F)) < tol:
            return u
        J = L - np.diag(dN(u))
        step = np.linalg.solve(J, -F)
        t = 1.0
        while t > 1e-12:
            trial = u + t * step
            F_trial = L @ trial - N(trial) - g
            if np.linalg.norm(F_trial) < (1 - 1e-4 * t) * np.linalg.norm(F):
                break
            t /= 2
        u, F = trial, F_trial
    raise RuntimeError(f"dense Newton did not converge (residual {np.max(np.abs(F)):.3e})")
