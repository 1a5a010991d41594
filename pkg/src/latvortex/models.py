"""Vortex data, solver parameters and the two nonlinearities.

Chern-Simons:   Lap u = lam * e^u (e^u - 1) + g
Abelian Higgs:  Lap u = lam * (e^u - 1) + g

with ``g = 4*pi * sum_j n_j * delta_{p_j}`` and total vortex mass
``C = 4*pi * sum_j n_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidInputError
from .lattice import Domain, Vertex, as_vertex

FOUR_PI = 4.0 * math.pi

CHERN_SIMONS = "chern_simons"
ABELIAN_HIGGS = "abelian_higgs"
_MODEL_ALIASES = {"cs": CHERN_SIMONS, CHERN_SIMONS: CHERN_SIMONS, "ah": ABELIAN_HIGGS, ABELIAN_HIGGS: ABELIAN_HIGGS}


def canonical_model(model: str) -> str:
    try:
        return _MODEL_ALIASES[model.lower()]
    except (KeyError, AttributeError):
        raise InvalidInputError(f"unknown model {model!r}; expected 'cs' or 'ah'") from None


@dataclass(frozen=True)
class VortexConfig:
    """Dimension, coupling and vortex points with multiplicities."""

    dim: int
    lam: float
    vortices: tuple[tuple[Vertex, int], ...] = ()

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise InvalidInputError(f"dim must be an integer >= 2, got {self.dim!r}")
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise InvalidInputError(f"lambda must be positive, got {self.lam!r}")
        cleaned = []
        seen = set()
        for item in self.vortices:
            try:
                point, mult = item
            except (TypeError, ValueError):
                raise InvalidInputError(f"vortex entries are (point, multiplicity) pairs, got {item!r}") from None
            p = as_vertex(point, self.dim)
            if int(mult) != mult or mult < 1:
                raise InvalidInputError(f"multiplicity of vortex {p} must be a positive integer, got {mult!r}")
            if p in seen:
                raise InvalidInputError(f"vortex points must be distinct; {p} repeated")
            seen.add(p)
            cleaned.append((p, int(mult)))
        object.__setattr__(self, "vortices", tuple(cleaned))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "dim", int(self.dim))

    @classmethod
    def single(cls, dim: int = 2, lam: float = 1.0, point=None, multiplicity: int = 1) -> "VortexConfig":
        point = (0,) * dim if point is None else point
        return cls(dim, lam, ((tuple(point), multiplicity),))

    @property
    def total_mass(self) -> float:
        """``C = 4*pi * sum_j n_j``."""
        return FOUR_PI * sum(m for _, m in self.vortices)

    @property
    def decay_rate(self) -> float:
        """``m = ln(1 + lam / 2n)``."""
        return math.log1p(self.lam / (2 * self.dim))


def vortex_source_array(config: VortexConfig, domain: Domain) -> np.ndarray:
    if domain.dim != config.dim:
        raise InvalidInputError(f"domain dimension {domain.dim} differs from config dimension {config.dim}")
    g = np.zeros(len(domain.vertices))
    idx = domain.vertex_index
    for p, mult in config.vortices:
        if p not in idx:
            raise InvalidInputError(f"vortex {p} lies outside the domain interior")
        g[idx[p]] = FOUR_PI * mult
    return g


def vortex_source(config: VortexConfig, domain: Domain):
    """Source field: ``4*pi*n_j`` at each vortex point, zero elsewhere."""
    from .calculus import LatticeField

    return LatticeField.from_interior(domain, vortex_source_array(config, domain))


@dataclass(frozen=True)
class SolverParams:
    """Knobs of the monotone iteration.

    ``K=None`` resolves to the model default: ``2*lam + 1`` for Chern-Simons,
    ``lam + 1`` for Abelian Higgs.
    """

    K: float | None = None
    tol_outer: float = 1e-9
    tol_linear: float = 1e-11
    max_outer_iter: int = 10_000
    max_cg_iter: int = 10_000
    jacobi: bool = field(default=False)

    def __post_init__(self):
        if self.K is not None and not (np.isfinite(self.K) and self.K > 0):
            raise InvalidInputError(f"K must be positive, got {self.K!r}")
        if not (self.tol_outer > 0 and self.tol_linear > 0):
            raise InvalidInputError("tolerances must be positive")
        if self.tol_linear * 100 > self.tol_outer * (1 + 1e-12):
            raise InvalidInputError(
                f"tol_linear={self.tol_linear:g} must be at least 100 times tighter than tol_outer={self.tol_outer:g}"
            )
        if self.max_outer_iter < 1 or self.max_cg_iter < 1:
            raise InvalidInputError("iteration limits must be positive")

    @property
    def slack(self) -> float:
        """Allowed numerical excess in the monotonicity and sign checks."""
        return 10.0 * self.tol_linear

    def resolve_K(self, lam: float, model: str) -> float:
        model = canonical_model(model)
        if model == CHERN_SIMONS:
            K = 2 * lam + 1 if self.K is None else self.K
            if not K > 2 * lam:
                raise InvalidInputError(f"Chern-Simons iteration needs K > 2*lambda = {2 * lam:g}, got K={K:g}")
        else:
            K = lam + 1 if self.K is None else self.K
            if not K > lam:
                raise InvalidInputError(f"Abelian Higgs iteration needs K > lambda = {lam:g}, got K={K:g}")
        return float(K)


def nonlinearity(model: str, lam: float, u: np.ndarray) -> np.ndarray:
    model = canonical_model(model)
    eu = np.exp(u)
    if model == CHERN_SIMONS:
        return lam * eu * (eu - 1.0)
    return lam * (eu - 1.0)


def nonlinearity_derivative(model: str, lam: float, u: np.ndarray) -> np.ndarray:
    model = canonical_model(model)
    eu = np.exp(u)
    if model == CHERN_SIMONS:
        return lam * (2.0 * eu * eu - eu)
    return lam * eu


def bulk_term(model: str, u: np.ndarray) -> np.ndarray:
    """Per-vertex summand in the flux identity: ``e^u (1 - e^u)`` or ``1 - e^u``."""
    model = canonical_model(model)
    eu = np.exp(u)
    return eu * (1.0 - eu) if model == CHERN_SIMONS else 1.0 - eu
