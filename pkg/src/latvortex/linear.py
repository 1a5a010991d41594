"""Screened Poisson problem ``(Lap - K) u = rhs`` with zero Dirichlet data.

The operator ``A = K I - Lap_Dir`` is symmetric positive definite with
constant diagonal ``2n + K``, so plain conjugate gradients converge at a rate
set by ``(2n + K) / K``. Everything is matrix free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import LatticeField
from .exceptions import ConsistencyError, InvalidInputError, SolverFailure
from .lattice import Domain


def _dot(a: np.ndarray, b: np.ndarray) -> float:
    # numpy's pairwise summation: deterministic, independent of BLAS threading
    return float(np.sum(a * b))


def _as_interior(domain: Domain, rhs) -> np.ndarray:
    if isinstance(rhs, LatticeField):
        if rhs.domain != domain:
            raise InvalidInputError("rhs is defined on a different domain")
        arr = rhs.interior
    elif isinstance(rhs, dict):
        arr = LatticeField.from_mapping(domain, rhs).interior
    else:
        arr = np.asarray(rhs, dtype=float).reshape(-1)
    if arr.shape[0] != len(domain.vertices):
        raise InvalidInputError(f"rhs has {arr.shape[0]} entries, domain has {len(domain.vertices)}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("rhs must be finite")
    return arr


@dataclass(frozen=True)
class ScreenedSystem:
    """``(Lap - K) u = rhs`` on ``domain`` with ``u = 0`` on the boundary."""

    domain: Domain
    K: float
    rhs: object

    def __post_init__(self):
        if not (np.isfinite(self.K) and self.K > 0):
            raise InvalidInputError(f"screening constant K must be positive, got {self.K!r}")


def apply_operator_array(domain: Domain, K: float, u: np.ndarray) -> np.ndarray:
    """``(2n + K) u(x) - sum_{y~x, y in Omega} u(y)`` on interior arrays."""
    padded = np.append(u, 0.0)
    return (2 * domain.dim + K) * u - padded[domain.interior_neighbor_table].sum(axis=1)


def apply_operator(domain: Domain, K: float, u) -> LatticeField:
    arr = _as_interior(domain, u)
    return LatticeField.from_interior(domain, apply_operator_array(domain, K, arr))


@dataclass
class CGResult:
    x: np.ndarray
    iterations: int
    residual: float
    threshold: float


def conjugate_gradient(domain, K, b, x0=None, *, threshold, max_iter, jacobi=False) -> CGResult:
    """Solve ``A x = b`` until ``||b - A x||_2 <= threshold``."""
    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=float)
    r = b - apply_operator_array(domain, K, x) if x0 is not None else b.copy()
    inv_diag = 1.0 / (2 * domain.dim + K) if jacobi else 1.0
    z = r * inv_diag
    p = z.copy()
    rz = _dot(r, z)
    rnorm = float(np.sqrt(_dot(r, r)))
    it = 0
    while rnorm > threshold:
        if it >= max_iter:
            raise SolverFailure(
                f"conjugate gradients did not reach residual {threshold:.3e} in {max_iter} iterations "
                f"(final {rnorm:.3e})",
                residual=rnorm,
            )
        Ap = apply_operator_array(domain, K, p)
        alpha = rz / _dot(p, Ap)
        x += alpha * p
        r -= alpha * Ap
        z = r * inv_diag
        rz_new = _dot(r, z)
        p = z + (rz_new / rz) * p
        rz = rz_new
        rnorm = float(np.sqrt(_dot(r, r)))
        it += 1
    return CGResult(x=x, iterations=it, residual=rnorm, threshold=threshold)


def screened_solve_array(
    domain: Domain,
    K: float,
    rhs: np.ndarray,
    tol_linear: float = 1e-10,
    max_cg_iter: int = 10_000,
    *,
    x0: np.ndarray | None = None,
    sup_error: float | None = None,
    jacobi: bool = False,
) -> CGResult:
    """Array-level solve of ``(Lap - K) u = rhs``.

    ``sup_error`` additionally caps the residual at ``K * sup_error``; since
    the smallest eigenvalue of ``K I - Lap_Dir`` exceeds ``K``, the sup-norm
    error of the returned ``x`` is then at most ``sup_error``.
    """
    if not (np.isfinite(K) and K > 0):
        raise InvalidInputError(f"screening constant K must be positive, got {K!r}")
    if tol_linear <= 0 or max_cg_iter < 1:
        raise InvalidInputError("tol_linear and max_cg_iter must be positive")
    b = -rhs
    threshold = tol_linear * max(1.0, float(np.sqrt(_dot(b, b))))
    if sup_error is not None:
        threshold = min(threshold, K * sup_error)
    res = conjugate_gradient(domain, K, b, x0, threshold=threshold, max_iter=max_cg_iter, jacobi=jacobi)
    if rhs.size and rhs.min() >= 0.0:
        leak = threshold / K
        if res.x.max() > leak:
            raise ConsistencyError(
                f"nonnegative rhs produced a positive solution value {res.x.max():.3e} > {leak:.3e}",
                violation=float(res.x.max()),
            )
    return res


def solve_screened(
    system: ScreenedSystem,
    tol_linear: float = 1e-10,
    max_cg_iter: int = 10_000,
    *,
    x0=None,
    jacobi: bool = False,
) -> LatticeField:
    """Solve the screened system; the result carries the zero Dirichlet boundary."""
    dom = system.domain
    rhs = _as_interior(dom, system.rhs)
    x0_arr = None if x0 is None else _as_interior(dom, x0)
    res = screened_solve_array(dom, system.K, rhs, tol_linear, max_cg_iter, x0=x0_arr, jacobi=jacobi)
    return LatticeField.from_interior(dom, res.x)
