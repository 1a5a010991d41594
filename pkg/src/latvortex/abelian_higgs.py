"""Abelian Higgs vortices by monotone iteration between two barriers.

The upper barrier is ``0`` (a supersolution because ``g >= 0``); the lower
barrier is the Chern-Simons solution on the same domain, a subsolution
because ``e^u (e^u - 1) >= e^u - 1`` whenever ``u <= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import LatticeField, laplacian_values
from .chern_simons import solve_cs_on_domain
from .exceptions import ConsistencyError, InvalidInputError
from .iteration import DomainSolution, as_interior_array, monotone_step, run_monotone_iteration
from .lattice import Domain, Vertex, is_connected
from .models import ABELIAN_HIGGS, CHERN_SIMONS, SolverParams, VortexConfig, nonlinearity, vortex_source_array
from .newton import damped_newton


@dataclass
class BarrierCheck:
    holds: bool
    worst_vertex: Vertex | None
    worst_margin: float


def _barrier_margin(w: LatticeField, config: VortexConfig) -> np.ndarray:
    # Lap w - lam (e^w - 1) - g: <= 0 for a supersolution, >= 0 for a subsolution
    g = vortex_source_array(config, w.domain)
    return laplacian_values(w) - nonlinearity(ABELIAN_HIGGS, config.lam, w.interior) - g


def check_supersolution(w: LatticeField, config: VortexConfig, domain: Domain | None = None, *, slack=1e-9):
    """Is ``Lap w <= lam (e^w - 1) + g`` at every interior vertex (up to ``slack``)?"""
    if domain is not None and domain != w.domain:
        raise InvalidInputError("field is defined on a different domain")
    margin = _barrier_margin(w, config)
    if not margin.size:
        return BarrierCheck(True, None, 0.0)
    i = int(np.argmax(margin))
    return BarrierCheck(bool(margin[i] <= slack), w.domain.vertices[i], float(margin[i]))


def check_subsolution(w: LatticeField, config: VortexConfig, domain: Domain | None = None, *, slack=1e-9):
    """Is ``Lap w >= lam (e^w - 1) + g`` at every interior vertex (up to ``slack``)?"""
    if domain is not None and domain != w.domain:
        raise InvalidInputError("field is defined on a different domain")
    margin = _barrier_margin(w, config)
    if not margin.size:
        return BarrierCheck(True, None, 0.0)
    i = int(np.argmin(margin))
    return BarrierCheck(bool(margin[i] >= -slack), w.domain.vertices[i], float(margin[i]))


@dataclass
class SandwichState:
    """``lower <= current <= upper`` pointwise along the iteration."""

    lower: LatticeField
    upper: LatticeField
    current: LatticeField

    def violation(self) -> float:
        below = np.max(self.lower.values - self.current.values)
        above = np.max(self.current.values - self.upper.values)
        return float(max(below, above, 0.0))


def _sandwich_slack(params: SolverParams, cs_solution: DomainSolution) -> float:
    # the computed CS field sits above the exact one by a few of its outer tolerances
    return 10.0 * params.tol_linear + 10.0 * cs_solution.tol_outer


def ah_iterate(u_prev, config: VortexConfig, params: SolverParams, domain: Domain, lower=None) -> LatticeField:
    """One step of the Abelian Higgs scheme from ``u_prev``; ``lower`` is the subsolution barrier."""
    K = params.resolve_K(config.lam, ABELIAN_HIGGS)
    u = as_interior_array(domain, u_prev)
    if u.size and u.max() > params.slack:
        raise InvalidInputError(f"u_prev must be nonpositive, max is {u.max():.3e}")
    low = lslack = None
    if isinstance(lower, DomainSolution):
        lslack = _sandwich_slack(params, lower)
        lower = lower.u
    if lower is not None:
        low = as_interior_array(domain, lower)
        lslack = params.slack if lslack is None else lslack
        if np.max(low - u) > lslack:
            raise InvalidInputError("u_prev lies below the lower barrier")
    g = vortex_source_array(config, domain)
    new = monotone_step(domain, ABELIAN_HIGGS, config.lam, K, g, u, params.tol_linear, params.max_cg_iter,
                        lower=low, lower_slack=lslack, jacobi=params.jacobi)
    return LatticeField.from_interior(domain, new)


def solve_ah(
    config: VortexConfig,
    domain: Domain,
    params: SolverParams | None = None,
    cs_solution: DomainSolution | None = None,
    *,
    cs_params: SolverParams | None = None,
    keep_iterates: bool = False,
) -> DomainSolution:
    """Solve the Abelian Higgs Dirichlet problem, sandwiched below 0 and above the CS solution.

    ``cs_solution`` is computed with ``cs_params`` when not supplied.
    """
    params = SolverParams() if params is None else params
    if domain.dim != config.dim:
        raise InvalidInputError("domain and config dimensions differ")
    if not is_connected(domain.vertices):
        raise InvalidInputError("solver domains must be connected")
    K = params.resolve_K(config.lam, ABELIAN_HIGGS)
    if cs_solution is None:
        cs_params = SolverParams(tol_outer=params.tol_outer, tol_linear=params.tol_linear,
                                 max_outer_iter=params.max_outer_iter, max_cg_iter=params.max_cg_iter) \
            if cs_params is None else cs_params
        cs_solution = solve_cs_on_domain(config, domain, cs_params)
    elif cs_solution.domain != domain or cs_solution.model != CHERN_SIMONS:
        raise InvalidInputError("cs_solution must be a Chern-Simons solution on the same domain")
    g = vortex_source_array(config, domain)
    return run_monotone_iteration(
        domain, ABELIAN_HIGGS, config.lam, K, g, config.total_mass, params,
        lower=cs_solution.u.interior, lower_slack=_sandwich_slack(params, cs_solution),
        keep_iterates=keep_iterates,
    )


def sandwich_violation(ah_solution: DomainSolution, cs_solution: DomainSolution) -> float:
    """Largest amount by which ``u <= u' <= 0`` fails (0 when it holds)."""
    if ah_solution.domain != cs_solution.domain:
        raise InvalidInputError("solutions live on different domains")
    up = ah_solution.u.values
    low = cs_solution.u.values
    return float(max(np.max(low - up), np.max(up), 0.0))


def uniqueness_probe(
    ah_solution: DomainSolution,
    config: VortexConfig,
    starts=None,
    *,
    tol: float = 1e-12,
) -> list[float]:
    """Re-solve by damped Newton from each start; return the sup distance to ``u'`` for each.

    ``starts`` defaults to ``[0.5 * u']``; callers usually add the
    Chern-Simons solution as a second start.
    """
    dom = ah_solution.domain
    g = vortex_source_array(config, dom)
    target = ah_solution.u.interior
    starts = [0.5 * target] if starts is None else [as_interior_array(dom, s) for s in starts]
    out = []
    for s in starts:
        res = damped_newton(dom, ABELIAN_HIGGS, config.lam, g, s, tol=tol)
        out.append(float(np.max(np.abs(res.u - target))))
    return out


def assert_sandwich(ah_solution: DomainSolution, cs_solution: DomainSolution, slack: float) -> None:
    v = sandwich_violation(ah_solution, cs_solution)
    if v > slack:
        raise ConsistencyError(f"sandwich u <= u' <= 0 violated by {v:.3e}", violation=v)
