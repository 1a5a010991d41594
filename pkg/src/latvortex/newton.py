"""Damped Newton iteration for the Dirichlet problem on a finite domain.

Used as a second route to solutions: maximality probes for Chern-Simons
and the uniqueness probe for Abelian Higgs. Independent of the monotone
iteration apart from sharing the domain tables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exceptions import NonConvergenceError
from .lattice import Domain
from .models import nonlinearity, nonlinearity_derivative


def dirichlet_laplacian_matrix(domain: Domain) -> sp.csr_matrix:
    """Sparse ``Lap`` on interior unknowns with zero boundary values."""
    n_int = len(domain.vertices)
    table = domain.interior_neighbor_table
    rows = np.repeat(np.arange(n_int), table.shape[1])
    cols = table.reshape(-1)
    keep = cols < n_int
    off = sp.csr_matrix((np.ones(keep.sum()), (rows[keep], cols[keep])), shape=(n_int, n_int))
    return (off - 2 * domain.dim * sp.identity(n_int, format="csr")).tocsr()


def residual_array(domain: Domain, model: str, lam: float, g: np.ndarray, u: np.ndarray) -> np.ndarray:
    """``Lap u - N(u) - g`` at interior vertices (zero boundary)."""
    padded = np.append(u, 0.0)
    lap = padded[domain.interior_neighbor_table].sum(axis=1) - 2 * domain.dim * u
    return lap - nonlinearity(model, lam, u) - g


@dataclass
class NewtonResult:
    u: np.ndarray
    iterations: int
    residual_sup: float


def damped_newton(domain, model, lam, g, u0, *, tol=1e-12, max_iter=200) -> NewtonResult:
    """Newton with backtracking on ``||R||_2`` until ``||R||_inf <= tol``."""
    L = dirichlet_laplacian_matrix(domain)
    u = np.array(u0, dtype=float)
    R = residual_array(domain, model, lam, g, u)
    for it in range(max_iter + 1):
        rsup = float(np.max(np.abs(R))) if R.size else 0.0
        if rsup <= tol:
            return NewtonResult(u=u, iterations=it, residual_sup=rsup)
        if it == max_iter:
            break
        J = L - sp.diags(nonlinearity_derivative(model, lam, u))
        step = -spla.spsolve(J.tocsc(), R)
        rnorm = np.linalg.norm(R)
        t = 1.0
        while True:
            trial = u + t * step
            R_trial = residual_array(domain, model, lam, g, trial)
            if np.linalg.norm(R_trial) <= (1.0 - 1e-4 * t) * rnorm or t < 1e-10:
                break
            t *= 0.5
        u, R = trial, R_trial
    raise NonConvergenceError(
        f"damped Newton did not converge in {max_iter} iterations (residual {rsup:.3e})", residual=rsup
    )
