"""Self-dual Chern-Simons vortices: monotone iteration, exhaustion and checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .calculus import LatticeField, dirichlet_form, laplacian_values
from .exceptions import ConsistencyError, InvalidInputError, LatVortexError, PreconditionError
from .iteration import DomainSolution, as_interior_array, monotone_step, run_monotone_iteration
from .lattice import Domain, box_domain, is_connected
from .models import (
    CHERN_SIMONS,
    SolverParams,
    VortexConfig,
    nonlinearity,
    vortex_source,
    vortex_source_array,
)
from .newton import damped_newton

__all__ = [
    "vortex_source",
    "cs_iterate",
    "solve_cs_on_domain",
    "solve_cs_exhaustion",
    "ExhaustionResult",
    "check_comparison",
    "ComparisonResult",
    "energy_functional",
    "probe_maximality",
]


def _check_domain(config: VortexConfig, domain: Domain, *, connected: bool = True) -> None:
    if domain.dim != config.dim:
        raise InvalidInputError(f"domain dimension {domain.dim} differs from config dimension {config.dim}")
    if connected and not is_connected(domain.vertices):
        raise InvalidInputError("solver domains must be connected")


def cs_iterate(u_prev, config: VortexConfig, params: SolverParams, domain: Domain) -> LatticeField:
    """One step of the Chern-Simons monotone scheme from ``u_prev`` (which must be <= 0)."""
    K = params.resolve_K(config.lam, CHERN_SIMONS)
    u = as_interior_array(domain, u_prev)
    if u.size and u.max() > params.slack:
        raise InvalidInputError(f"u_prev must be nonpositive, max is {u.max():.3e}")
    g = vortex_source_array(config, domain)
    new = monotone_step(domain, CHERN_SIMONS, config.lam, K, g, u, params.tol_linear, params.max_cg_iter,
                        jacobi=params.jacobi)
    return LatticeField.from_interior(domain, new)


def solve_cs_on_domain(
    config: VortexConfig, domain: Domain, params: SolverParams | None = None, *, keep_iterates: bool = False
) -> DomainSolution:
    """Iterate from ``u_0 = 0`` until the sup-norm step drops below ``tol_outer``."""
    params = SolverParams() if params is None else params
    _check_domain(config, domain)
    K = params.resolve_K(config.lam, CHERN_SIMONS)
    g = vortex_source_array(config, domain)
    return run_monotone_iteration(
        domain, CHERN_SIMONS, config.lam, K, g, config.total_mass, params, keep_iterates=keep_iterates
    )


def energy_functional(u: LatticeField, config: VortexConfig, domain: Domain | None = None) -> float:
    """``F(u) = D(u)/2 + sum_Omega [lam/2 (e^u - 1)^2 + g u]``."""
    dom = u.domain if domain is None else domain
    if dom != u.domain:
        raise InvalidInputError("field is defined on a different domain")
    g = vortex_source_array(config, dom)
    x = u.interior
    return 0.5 * dirichlet_form(u, u) + float(np.sum(0.5 * config.lam * np.expm1(x) ** 2 + g * x))


@dataclass
class ComparisonResult:
    holds: bool
    max_violation: float
    worst_vertex: tuple | None


def subsolution_defect(V: LatticeField, config: VortexConfig, model: str = CHERN_SIMONS) -> np.ndarray:
    """``Lap V - N(V) - g`` on the interior; nonnegative for a subsolution."""
    g = vortex_source_array(config, V.domain)
    return laplacian_values(V) - nonlinearity(model, config.lam, V.interior) - g


def check_comparison(
    V: LatticeField,
    solution: DomainSolution,
    config: VortexConfig,
    *,
    tol: float = 1e-7,
    slack: float = 1e-7,
) -> ComparisonResult:
    """Check that a subsolution ``V`` lies below the computed solution.

    ``V`` must satisfy ``Lap V >= lam e^V (e^V - 1) + g`` on the interior and
    ``V <= 0`` on the boundary, each up to ``tol``; otherwise
    :class:`PreconditionError` names the worst vertex.
    """
    dom = solution.domain
    if V.domain != dom:
        raise InvalidInputError("V must be defined on the solution's domain")
    defect = subsolution_defect(V, config)
    if defect.size and defect.min() < -tol:
        i = int(np.argmin(defect))
        raise PreconditionError(
            f"V is not a subsolution at {dom.vertices[i]} (defect {defect[i]:.3e})",
            vertex=dom.vertices[i], violation=float(-defect[i]),
        )
    bvals = V.boundary_values
    if bvals.size and bvals.max() > tol:
        j = int(np.argmax(bvals))
        raise PreconditionError(
            f"V is positive on the boundary at {dom.boundary[j]}", vertex=dom.boundary[j], violation=float(bvals[j])
        )
    excess = V.values - solution.u.values
    j = int(np.argmax(excess))
    worst = float(excess[j])
    return ComparisonResult(holds=worst <= slack, max_violation=max(worst, 0.0), worst_vertex=dom.closure[j])


@dataclass
class ExhaustionResult:
    """Solutions on nested boxes and the cross-domain checks between them."""

    config: VortexConfig
    schedule: tuple[int, ...]
    solutions: list[DomainSolution]
    sup_diffs_on_smallest: list[float] = field(default_factory=list)
    monotonicity_violations: list[float] = field(default_factory=list)
    slack: float = 0.0

    @property
    def l2_norms(self) -> list[float]:
        return [s.l2_norm for s in self.solutions]

    @property
    def tail_sums(self) -> list[float]:
        return [s.tail_sum for s in self.solutions]

    @property
    def tail_bound(self) -> float:
        """``C / lam``."""
        return self.config.total_mass / self.config.lam

    def to_record(self) -> dict:
        return {
            "schedule": list(self.schedule),
            "sup_diffs_on_smallest": list(self.sup_diffs_on_smallest),
            "monotonicity_violations": list(self.monotonicity_violations),
            "slack": self.slack,
            "l2_norms": self.l2_norms,
            "tail_sums": self.tail_sums,
            "tail_bound": self.tail_bound,
        }


def solve_cs_exhaustion(
    config: VortexConfig,
    schedule: Sequence[int],
    params: SolverParams | None = None,
    *,
    center: Sequence[int] | None = None,
    slack: float | None = None,
) -> ExhaustionResult:
    """Solve on nested cubes ``box(center, L)`` for each ``L`` in ``schedule``.

    Asserts ``u_{i+1} <= u_i + slack`` on the closure of each smaller box.
    ``slack`` defaults to ``10 * (tol_outer + tol_linear)``: each solution
    sits above the exact discrete solution by a few outer tolerances.
    """
    params = SolverParams() if params is None else params
    schedule = tuple(int(L) for L in schedule)
    if len(schedule) < 2:
        raise InvalidInputError("an exhaustion schedule needs at least two half-widths")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise InvalidInputError(f"schedule must be strictly increasing, got {schedule}")
    center = (0,) * config.dim if center is None else tuple(center)
    slack = 10.0 * (params.tol_outer + params.tol_linear) if slack is None else slack
    result = ExhaustionResult(config=config, schedule=schedule, solutions=[], slack=slack)
    smallest = None
    for L in schedule:
        dom = box_domain(center, L)
        try:
            sol = solve_cs_on_domain(config, dom, params)
        except LatVortexError as exc:
            exc.partial = result
            raise
        result.solutions.append(sol)
        if smallest is None:
            smallest = sol
            prev = sol
            continue
        rise = float(np.max(sol.u.restrict(prev.domain).values - prev.u.values))
        result.monotonicity_violations.append(max(rise, 0.0))
        if rise > slack:
            raise ConsistencyError(
                f"domain monotonicity violated between boxes {prev.domain.half_width} and {L} by {rise:.3e}",
                violation=rise, partial=result,
            )
        a = prev.u.restrict(smallest.domain).interior
        b = sol.u.restrict(smallest.domain).interior
        result.sup_diffs_on_smallest.append(float(np.max(np.abs(a - b))))
        prev = sol
    return result


def probe_maximality(
    solution: DomainSolution,
    config: VortexConfig,
    *,
    n_starts: int = 4,
    scale: float = 1.0,
    seed: int = 0,
    tol: float = 1e-11,
) -> tuple[float, list[np.ndarray]]:
    """Run damped Newton from random perturbations of the solution.

    Returns the largest excess ``max(f - u)`` over every limit ``f`` found,
    together with the limits. Maximality predicts the excess is <= 0 up to
    solver noise. Starts that fail to converge are skipped.
    """
    rng = np.random.default_rng(seed)
    dom = solution.domain
    g = vortex_source_array(config, dom)
    u = solution.u.interior
    limits = []
    worst = -np.inf
    for _ in range(n_starts):
        start = np.minimum(u + scale * rng.standard_normal(u.shape), 0.0) - scale * rng.random(u.shape)
        try:
            res = damped_newton(dom, CHERN_SIMONS, config.lam, g, start, tol=tol)
        except LatVortexError:
            continue
        limits.append(res.u)
        worst = max(worst, float(np.max(res.u - u)))
    return worst, limits
