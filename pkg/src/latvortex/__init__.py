"""Lattice Chern-Simons and Abelian Higgs vortices: solvers and diagnostics."""

from __future__ import annotations

from .abelian_higgs import ah_iterate, sandwich_violation, solve_ah, uniqueness_probe
from .calculus import (
    LatticeField,
    dirichlet_energy,
    dirichlet_form,
    extend_by_zero,
    green_identity_gap,
    laplacian,
    normal_derivative,
)
from .chern_simons import (
    check_comparison,
    cs_iterate,
    energy_functional,
    probe_maximality,
    solve_cs_exhaustion,
    solve_cs_on_domain,
)
from .diagnostics import (
    barrier_check,
    fit_decay_rate,
    flux_identity_gap,
    gns_ratio,
    isoperimetric_ratio,
    max_principle_probe,
)
from .estimators import AbelianHiggsSolver, ChernSimonsSolver
from .exceptions import (
    ConsistencyError,
    InvalidInputError,
    LatVortexError,
    NonConvergenceError,
    OutOfDomainError,
    PreconditionError,
    SolverFailure,
)
from .iteration import DomainSolution
from .lattice import Domain, box_domain, compute_boundary, l1_distance, neighbors
from .linear import ScreenedSystem, solve_screened
from .models import ABELIAN_HIGGS, CHERN_SIMONS, SolverParams, VortexConfig

__version__ = "0.1.0"

__all__ = [
    "ABELIAN_HIGGS", "CHERN_SIMONS", "AbelianHiggsSolver", "ChernSimonsSolver", "ConsistencyError",
    "Domain", "DomainSolution", "InvalidInputError", "LatVortexError", "LatticeField", "NonConvergenceError",
    "OutOfDomainError", "PreconditionError", "ScreenedSystem", "SolverFailure", "SolverParams", "VortexConfig",
    "ah_iterate", "barrier_check", "box_domain", "check_comparison", "compute_boundary", "cs_iterate",
    "dirichlet_energy", "dirichlet_form", "energy_functional", "extend_by_zero", "fit_decay_rate",
    "flux_identity_gap", "gns_ratio", "green_identity_gap", "isoperimetric_ratio", "l1_distance", "laplacian",
    "max_principle_probe", "neighbors", "normal_derivative", "probe_maximality", "sandwich_violation",
    "solve_ah", "solve_cs_exhaustion", "solve_cs_on_domain", "solve_screened", "uniqueness_probe",
]
