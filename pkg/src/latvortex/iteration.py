"""Monotone iteration ``(Lap - K) u_k = N(u_{k-1}) + g - K u_{k-1}`` on a finite domain.

Both models share this loop; they differ only in the nonlinearity ``N``,
the admissible range of ``K`` and, for Abelian Higgs, an extra lower barrier.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .calculus import LatticeField
from .exceptions import ConsistencyError, InvalidInputError, NonConvergenceError
from .lattice import Domain
from .linear import screened_solve_array
from .models import CHERN_SIMONS, bulk_term, canonical_model, nonlinearity
from .newton import residual_array


def dirichlet_energy_array(domain: Domain, u: np.ndarray) -> float:
    """``D(u)`` for an interior array with zero boundary values."""
    padded = np.append(u, 0.0)
    table = domain.interior_neighbor_table
    diff = padded[table] - u[:, None]
    weights = np.where(table < len(u), 0.5, 1.0)
    return float(np.sum(weights * diff * diff))


def potential(model: str, lam: float, u: np.ndarray) -> np.ndarray:
    """Pointwise potential whose derivative is the nonlinearity."""
    if canonical_model(model) == CHERN_SIMONS:
        return 0.5 * lam * np.expm1(u) ** 2
    return lam * (np.expm1(u) - u)


def energy_array(domain: Domain, model: str, lam: float, g: np.ndarray, u: np.ndarray) -> float:
    return 0.5 * dirichlet_energy_array(domain, u) + float(np.sum(potential(model, lam, u) + g * u))


def flux_gap_array(domain: Domain, model: str, lam: float, total_mass: float, u: np.ndarray) -> float:
    """``|sum_boundary du/dn + lam * sum_Omega bulk(u) - C|`` for zero boundary data."""
    table = domain.boundary_neighbor_table
    padded = np.append(u, 0.0)
    # du/dn(x) = sum over interior neighbours of (0 - u(y))
    flux = -np.sum(np.where(table >= 0, padded[table], 0.0))
    return abs(float(flux) + lam * float(np.sum(bulk_term(model, u))) - total_mass)


@dataclass
class DomainSolution:
    """Converged field on one domain plus its iteration record.

    ``energy_trace[k]`` and ``step_l2sq_trace[k-1]`` refer to ``u_k`` with
    ``u_0 = 0``; ``sup_diff_trace[k-1] = ||u_k - u_{k-1}||_inf``.
    """

    model: str
    domain: Domain
    u: LatticeField
    K: float
    lam: float
    total_mass: float
    iterations: int
    sup_diff_trace: list[float]
    energy_trace: list[float]
    step_l2sq_trace: list[float]
    max_increase_trace: list[float]
    residual_sup: float
    flux_gap: float
    tol_outer: float
    tol_linear: float
    iterates: list[np.ndarray] | None = field(default=None, repr=False)

    @property
    def slack(self) -> float:
        return 10.0 * self.tol_linear

    @property
    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(self.u.interior**2)))

    @property
    def tail_sum(self) -> float:
        """``sum_Omega e^u (1 - e^u)``."""
        eu = np.exp(self.u.interior)
        return float(np.sum(eu * (1.0 - eu)))

    def energy_gap_margins(self) -> np.ndarray:
        """``F(u_{k-1}) - F(u_k) - (K/2) ||u_{k-1} - u_k||^2`` for each step."""
        F = np.asarray(self.energy_trace)
        return F[:-1] - F[1:] - 0.5 * self.K * np.asarray(self.step_l2sq_trace)

    def to_record(self) -> dict:
        return {
            "model": self.model,
            "vertices": len(self.domain.vertices),
            "half_width": self.domain.half_width,
            "K": self.K,
            "iterations": self.iterations,
            "sup_diff_trace": list(self.sup_diff_trace),
            "energy_trace": list(self.energy_trace),
            "residual_sup": self.residual_sup,
            "flux_gap": self.flux_gap,
            "l2_norm": self.l2_norm,
            "min_u": float(self.u.values.min()),
            "max_u": float(self.u.values.max()),
        }


def monotone_step(
    domain: Domain,
    model: str,
    lam: float,
    K: float,
    g: np.ndarray,
    u_prev: np.ndarray,
    tol_linear: float,
    max_cg_iter: int,
    *,
    lower: np.ndarray | None = None,
    lower_slack: float | None = None,
    jacobi: bool = False,
) -> np.ndarray:
    """One screened solve, with the order properties asserted on the result."""
    slack = 10.0 * tol_linear
    rhs = nonlinearity(model, lam, u_prev) + g - K * u_prev
    res = screened_solve_array(
        domain, K, rhs, tol_linear, max_cg_iter, x0=u_prev, sup_error=tol_linear, jacobi=jacobi
    )
    u = res.x
    if u.size:
        rise = float(np.max(u - u_prev))
        if rise > slack:
            raise ConsistencyError(
                f"monotone descent violated by {rise:.3e} (> slack {slack:.1e}); K may be too small",
                violation=rise,
            )
        if float(u.max()) > slack:
            raise ConsistencyError(f"iterate became positive ({u.max():.3e})", violation=float(u.max()))
        if lower is not None:
            lslack = slack if lower_slack is None else lower_slack
            dip = float(np.max(lower - u))
            if dip > lslack:
                raise ConsistencyError(
                    f"iterate dropped below the subsolution by {dip:.3e} (> slack {lslack:.1e})", violation=dip
                )
    return u


def run_monotone_iteration(
    domain: Domain,
    model: str,
    lam: float,
    K: float,
    g: np.ndarray,
    total_mass: float,
    params,
    *,
    lower: np.ndarray | None = None,
    lower_slack: float | None = None,
    keep_iterates: bool = False,
) -> DomainSolution:
    model = canonical_model(model)
    n_int = len(domain.vertices)
    u = np.zeros(n_int)
    sup_diffs, steps, rises = [], [], []
    energies = [energy_array(domain, model, lam, g, u)]
    iterates = [u.copy()] if keep_iterates else None
    k = 0
    while True:
        if k >= params.max_outer_iter:
            partial = DomainSolution(
                model, domain, LatticeField.from_interior(domain, u), K, lam, total_mass, k,
                sup_diffs, energies, steps, rises, float("nan"), float("nan"),
                params.tol_outer, params.tol_linear, iterates,
            )
            raise NonConvergenceError(
                f"{model} iteration did not reach sup-step {params.tol_outer:g} in {k} iterations "
                f"(last step {sup_diffs[-1]:.3e})",
                trace=list(sup_diffs),
                partial=partial,
            )
        u_new = monotone_step(
            domain, model, lam, K, g, u, params.tol_linear, params.max_cg_iter,
            lower=lower, lower_slack=lower_slack, jacobi=params.jacobi,
        )
        diff = u_new - u
        k += 1
        sup_diffs.append(float(np.max(np.abs(diff))) if n_int else 0.0)
        steps.append(float(np.sum(diff * diff)))
        rises.append(float(np.max(diff)) if n_int else 0.0)
        energies.append(energy_array(domain, model, lam, g, u_new))
        u = u_new
        if keep_iterates:
            iterates.append(u.copy())
        if sup_diffs[-1] < params.tol_outer:
            break

    residual = residual_array(domain, model, lam, g, u)
    residual_sup = float(np.max(np.abs(residual))) if n_int else 0.0
    sol = DomainSolution(
        model=model,
        domain=domain,
        u=LatticeField.from_interior(domain, u),
        K=K,
        lam=lam,
        total_mass=total_mass,
        iterations=k,
        sup_diff_trace=sup_diffs,
        energy_trace=energies,
        step_l2sq_trace=steps,
        max_increase_trace=rises,
        residual_sup=residual_sup,
        flux_gap=flux_gap_array(domain, model, lam, total_mass, u),
        tol_outer=params.tol_outer,
        tol_linear=params.tol_linear,
        iterates=iterates,
    )
    bound = 10.0 * params.tol_outer * (2 * domain.dim + K + lam)
    if residual_sup >= bound:
        raise NonConvergenceError(
            f"stopped with PDE residual {residual_sup:.3e} >= {bound:.3e}", residual=residual_sup,
            trace=list(sup_diffs), partial=sol,
        )
    return sol


def as_interior_array(domain: Domain, u) -> np.ndarray:
    if isinstance(u, LatticeField):
        if u.domain != domain:
            raise InvalidInputError("field is defined on a different domain")
        return u.interior.copy()
    arr = np.asarray(u, dtype=float).reshape(-1)
    if arr.shape[0] == len(domain.closure):
        return arr[domain.interior_in_closure]
    if arr.shape[0] != len(domain.vertices):
        raise InvalidInputError("array length matches neither the interior nor the closure")
    return arr
