"""Estimator-style front end.

``fit(X, y)`` takes vortex positions ``X`` of shape ``(M, n)`` and optional
multiplicities ``y``; ``predict(V)`` evaluates the null-extended solution at
arbitrary lattice points ``V`` of shape ``(m, n)``. Hyperparameters follow
the usual ``get_params`` / ``set_params`` conventions, so the solvers can be
cloned and swept like any other estimator.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .abelian_higgs import solve_ah
from .chern_simons import solve_cs_on_domain
from .diagnostics import fit_decay_rate
from .exceptions import InvalidInputError
from .lattice import box_domain
from .models import SolverParams, VortexConfig


def _check_points(X, *, name="X", ensure_min_samples=1) -> np.ndarray:
    arr = check_array(X, dtype=None, ensure_min_samples=ensure_min_samples, ensure_min_features=2,
                      input_name=name)
    as_int = np.rint(arr).astype(np.int64)
    if not np.array_equal(as_int, arr):
        raise InvalidInputError(f"{name} must contain integer lattice coordinates")
    return as_int


class _VortexSolverBase(BaseEstimator):
    def _vortex_config(self, X, y) -> VortexConfig:
        pts = _check_points(X, ensure_min_samples=0)
        if y is None:
            mult = np.ones(len(pts), dtype=np.int64)
        else:
            mult = np.asarray(y).reshape(-1)
            if mult.shape[0] != pts.shape[0]:
                raise InvalidInputError("y must give one multiplicity per vortex")
        return VortexConfig(pts.shape[1], self.lam, tuple((tuple(p), int(m)) for p, m in zip(pts.tolist(), mult)))

    def _domain(self, dim):
        center = (0,) * dim if self.center is None else tuple(self.center)
        return box_domain(center, self.half_width)

    def predict(self, X) -> np.ndarray:
        """Solution values at the lattice points ``X``; zero outside the box."""
        check_is_fitted(self, "solution_")
        pts = _check_points(X)
        if pts.shape[1] != self.n_features_in_:
            raise InvalidInputError(f"X has {pts.shape[1]} coordinates, fitted on {self.n_features_in_}")
        index = self.domain_.vertex_index
        interior = self.solution_.u.interior
        return np.array([interior[index[p]] if p in index else 0.0 for p in map(tuple, pts.tolist())])

    def decay_fit(self, annulus=None, value_floor=1e-12, **kwargs):
        check_is_fitted(self, "solution_")
        return fit_decay_rate(self.solution_.u, self.config_, annulus=annulus, value_floor=value_floor, **kwargs)


class ChernSimonsSolver(_VortexSolverBase):
    """Maximal Dirichlet solution of the lattice Chern-Simons vortex equation on a cube.

    Parameters
    ----------
    lam : float
        Coupling constant (> 0).
    half_width : int
        The solve runs on ``box(center, half_width)``.
    center : tuple of int, optional
        Cube center; the origin by default.
    K : float, optional
        Screening constant of the iteration; must exceed ``2 * lam``. Defaults to ``2 * lam + 1``.
    tol_outer, tol_linear : float
        Outer sup-norm step tolerance and linear-solve tolerance.
    max_outer_iter, max_cg_iter : int

    Attributes
    ----------
    config_ : VortexConfig
    domain_ : Domain
    solution_ : DomainSolution
    n_features_in_ : int
        Lattice dimension seen during ``fit``.
    """

    def __init__(self, lam=1.0, half_width=20, center=None, K=None, tol_outer=1e-9, tol_linear=1e-11,
                 max_outer_iter=10_000, max_cg_iter=10_000):
        self.lam = lam
        self.half_width = half_width
        self.center = center
        self.K = K
        self.tol_outer = tol_outer
        self.tol_linear = tol_linear
        self.max_outer_iter = max_outer_iter
        self.max_cg_iter = max_cg_iter

    def _params(self, K) -> SolverParams:
        return SolverParams(K=K, tol_outer=self.tol_outer, tol_linear=self.tol_linear,
                            max_outer_iter=self.max_outer_iter, max_cg_iter=self.max_cg_iter)

    def fit(self, X, y=None):
        config = self._vortex_config(X, y)
        domain = self._domain(config.dim)
        self.solution_ = solve_cs_on_domain(config, domain, self._params(self.K))
        self.config_ = config
        self.domain_ = domain
        self.n_features_in_ = config.dim
        return self


class AbelianHiggsSolver(ChernSimonsSolver):
    """Abelian Higgs Dirichlet solution, bracketed by 0 and the Chern-Simons solution.

    Takes the same parameters as :class:`ChernSimonsSolver`, with ``K``
    applying to the Abelian Higgs iteration (default ``lam + 1``) and
    ``K_cs`` to the Chern-Simons subsolution (default ``2 * lam + 1``).

    Attributes
    ----------
    cs_solution_ : DomainSolution
        The lower barrier.
    """

    def __init__(self, lam=1.0, half_width=20, center=None, K=None, K_cs=None, tol_outer=1e-9,
                 tol_linear=1e-11, max_outer_iter=10_000, max_cg_iter=10_000):
        super().__init__(lam=lam, half_width=half_width, center=center, K=K, tol_outer=tol_outer,
                         tol_linear=tol_linear, max_outer_iter=max_outer_iter, max_cg_iter=max_cg_iter)
        self.K_cs = K_cs

    def fit(self, X, y=None):
        config = self._vortex_config(X, y)
        domain = self._domain(config.dim)
        cs = solve_cs_on_domain(config, domain, self._params(self.K_cs))
        self.solution_ = solve_ah(config, domain, self._params(self.K), cs)
        self.cs_solution_ = cs
        self.config_ = config
        self.domain_ = domain
        self.n_features_in_ = config.dim
        return self
