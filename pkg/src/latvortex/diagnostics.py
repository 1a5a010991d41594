"""Quantitative checks of the analytic conclusions on computed fields.

Flux identity, exponential decay fits, the exponential barrier used in the
decay argument, and empirical probes of the maximum principle, the
isoperimetric inequality and the discrete Gagliardo-Nirenberg-Sobolev bound.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy import stats

from .calculus import LatticeField, laplacian_values, normal_derivative_values
from .exceptions import DiagnosticError, InvalidInputError
from .lattice import Domain, Vertex, as_vertex, compute_boundary, neighbors
from .models import VortexConfig, bulk_term, canonical_model


def flux_identity_gap(u: LatticeField, config: VortexConfig, domain: Domain | None = None, model: str = "cs") -> float:
    """``|sum_boundary du/dn + lam * sum_Omega bulk(u) - C|``.

    ``bulk`` is ``e^u (1 - e^u)`` for Chern-Simons and ``1 - e^u`` for Abelian Higgs.
    """
    if domain is not None and domain != u.domain:
        raise InvalidInputError("field is defined on a different domain")
    model = canonical_model(model)
    flux = float(np.sum(normal_derivative_values(u)))
    bulk = float(np.sum(bulk_term(model, u.interior)))
    return abs(flux + config.lam * bulk - config.total_mass)


@dataclass
class DecayFit:
    """Least-squares line ``log|u| ~ intercept - slope * d``."""

    m_theory: float
    slope: float
    intercept: float
    sample_count: int
    r_squared: float
    annulus: tuple[float, float]
    epsilon_implied: float
    reduction: str

    def passes(self, epsilon_accept: float = 0.2, r2_min: float = 0.0) -> bool:
        return self.slope >= self.m_theory * (1.0 - epsilon_accept) and self.r_squared >= r2_min

    def to_record(self) -> dict:
        rec = asdict(self)
        rec["annulus"] = list(self.annulus)
        return rec


def default_annulus(domain: Domain, fractions=(0.25, 0.75)) -> tuple[float, float]:
    if domain.half_width is None:
        raise InvalidInputError("default annulus needs a box domain; pass annulus explicitly")
    return (domain.half_width * fractions[0], domain.half_width * fractions[1])


def fit_decay_rate(
    u: LatticeField,
    config: VortexConfig,
    domain: Domain | None = None,
    annulus: tuple[float, float] | None = None,
    value_floor: float = 1e-12,
    *,
    reduction: str = "envelope",
    center: Sequence[int] | None = None,
    min_samples: int = 10,
    min_layers: int = 2,
) -> DecayFit:
    """Fit the exponential decay rate of ``|u|`` against ``d(x) = |x - center|_1``.

    Parameters
    ----------
    annulus : (d_min, d_max), optional
        Distance window; defaults to a quarter to three quarters of the box half-width.
    value_floor : float
        Vertices with ``|u| <= value_floor`` are dropped.
    reduction : {"envelope", "pointwise"}
        ``"envelope"`` fits ``max |u|`` over each distance shell (the quantity an
        ``O(e^{-c d})`` bound controls); ``"pointwise"`` fits every vertex.
        On Z^n the decay is direction dependent, so the pointwise cloud has a
        spread at each ``d`` and a correspondingly low ``r_squared``.
    min_layers : int
        Every vertex in the window must be more than this many layers from the boundary.
    """
    dom = u.domain if domain is None else domain
    if dom != u.domain:
        raise InvalidInputError("field is defined on a different domain")
    if reduction not in ("envelope", "pointwise"):
        raise InvalidInputError(f"unknown reduction {reduction!r}")
    d_min, d_max = default_annulus(dom) if annulus is None else annulus
    if not 0 <= d_min < d_max:
        raise InvalidInputError(f"invalid annulus {annulus!r}")
    c = (0,) * dom.dim if center is None else as_vertex(center, dom.dim)
    d = np.abs(dom.coords - np.asarray(c)).sum(axis=1)
    in_window = (d >= d_min) & (d <= d_max)
    if _shell_count(dom.dim, d_min, d_max) != int(in_window.sum()):
        raise DiagnosticError("annulus is not contained in the domain interior; use a larger box")
    if in_window.any() and dom.boundary_distance[in_window].min() <= min_layers:
        raise DiagnosticError(f"annulus comes within {min_layers} layers of the boundary; use a larger box")
    vals = np.abs(u.interior)
    usable = in_window & (vals > value_floor)
    if reduction == "envelope":
        shells = np.unique(d[usable])
        xs = shells.astype(float)
        ys = np.array([np.log(vals[usable & (d == t)].max()) for t in shells])
    else:
        xs = d[usable].astype(float)
        ys = np.log(vals[usable])
    if xs.size < min_samples:
        raise DiagnosticError(f"only {xs.size} usable samples in the annulus (need {min_samples}); use a larger box")
    if np.ptp(xs) == 0:
        raise DiagnosticError("all samples share one distance; widen the annulus")
    fit = stats.linregress(xs, ys)
    m = config.decay_rate
    slope = -float(fit.slope)
    return DecayFit(
        m_theory=m,
        slope=slope,
        intercept=float(fit.intercept),
        sample_count=int(xs.size),
        r_squared=float(fit.rvalue**2),
        annulus=(float(d_min), float(d_max)),
        epsilon_implied=1.0 - slope / m,
        reduction=reduction,
    )


def _shell_count(dim: int, d_min: float, d_max: float) -> int:
    """Number of lattice points with ``d_min <= |x|_1 <= d_max``."""
    lo, hi = math.ceil(d_min), math.floor(d_max)
    return sum(_sphere_size(dim, r) for r in range(lo, hi + 1))


def _sphere_size(dim: int, r: int) -> int:
    # points with |x|_1 = r: sum_k 2^k C(dim,k) C(r-1,k-1)
    if r == 0:
        return 1
    return sum(2**k * math.comb(dim, k) * math.comb(r - 1, k - 1) for k in range(1, min(dim, r) + 1))


@dataclass
class BarrierReport:
    """Outcome of evaluating ``Lap h - c3 h`` for ``h = -exp(-m (1 - eps) d)``."""

    epsilon: float
    c3: float
    min_margin: float
    min_relative_margin: float
    worst_vertex: Vertex
    samples: int

    @property
    def holds(self) -> bool:
        return self.min_margin >= 0.0


def barrier_check(config: VortexConfig, epsilon: float, radius_range: tuple[int, int] = (1, 40)) -> BarrierReport:
    """Evaluate the barrier inequality ``Lap h >= c3 h`` on every vertex with ``d(x)`` in range.

    Both ``h`` and the margin are invariant under coordinate sign flips and
    permutations, so only sorted nonnegative coordinate tuples are visited.
    """
    if not 0 < epsilon < 1:
        raise InvalidInputError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    r_lo, r_hi = int(radius_range[0]), int(radius_range[1])
    if r_lo < 1 or r_hi < r_lo:
        raise InvalidInputError(f"radius_range must be integers 1 <= lo <= hi, got {radius_range!r}")
    n, lam = config.dim, config.lam
    s = config.decay_rate * (1.0 - epsilon)
    c3 = 2 * n * ((1 + lam / (2 * n)) ** (1 - epsilon) - 1)
    pts = np.array(list(_sorted_orthant_points(n, r_lo, r_hi)), dtype=np.int64)
    t = pts.sum(axis=1).astype(float)
    h = -np.exp(-s * t)
    # each coordinate contributes h(x+e_i) + h(x-e_i) - 2 h(x); x - e_i is farther when x_i = 0
    zero = pts == 0
    plus = -np.exp(-s * (t + 1))
    minus_far = -np.exp(-s * (t - 1))
    per_coord = np.where(zero, 2 * plus[:, None], (plus + minus_far)[:, None]) - 2 * h[:, None]
    lap = per_coord.sum(axis=1)
    margin = lap - c3 * h
    rel = margin / np.abs(h)
    i = int(np.argmin(margin))
    return BarrierReport(
        epsilon=float(epsilon),
        c3=float(c3),
        min_margin=float(margin[i]),
        min_relative_margin=float(rel.min()),
        worst_vertex=tuple(int(v) for v in pts[i]),
        samples=int(len(pts)),
    )


def _sorted_orthant_points(n: int, r_lo: int, r_hi: int):
    """Nonincreasing nonnegative integer n-tuples with coordinate sum in ``[r_lo, r_hi]``."""

    def rec(prefix, remaining_dims, max_part, budget):
        if remaining_dims == 0:
            yield tuple(prefix)
            return
        for part in range(min(max_part, budget), -1, -1):
            yield from rec(prefix + [part], remaining_dims - 1, part, budget - part)

    for r in range(r_lo, r_hi + 1):
        for p in rec([], n, r, r):
            if sum(p) == r:
                yield p


def _as_support_map(v) -> dict[Vertex, float]:
    if isinstance(v, LatticeField):
        items = zip(v.domain.closure, v.values)
    elif isinstance(v, Mapping):
        items = v.items()
    else:
        raise InvalidInputError("expected a LatticeField or a {vertex: value} mapping")
    return {tuple(int(c) for c in x): float(val) for x, val in items if val != 0.0}


def gns_ratio(v, n: int) -> float:
    """``||v||_4 / (||v||_{D^{1,2}}^{1/2} ||v||_2^{1/2})`` for a finitely supported ``v``.

    ``||v||_{D^{1,2}}^2`` sums ``|v(y) - v(x)|^2`` over ordered neighbour
    pairs, so every edge is counted twice.
    """
    vals = _as_support_map(v)
    if not vals:
        raise InvalidInputError("the GNS ratio is undefined for the zero field")
    arr = np.array(list(vals.values()))
    l4 = float(np.sum(arr**4)) ** 0.25
    l2 = float(np.sqrt(np.sum(arr**2)))
    d12_sq = 0.0
    for x, vx in vals.items():
        if len(x) != n:
            raise InvalidInputError(f"vertex {x} does not have dimension {n}")
        for y in neighbors(x):
            vy = vals.get(y)
            if vy is None:
                # edge leaving the support: seen once from x, once more from y
                d12_sq += 2.0 * vx * vx
            else:
                d12_sq += (vy - vx) ** 2
    return l4 / (d12_sq**0.25 * l2**0.5)


def isoperimetric_ratio(vertices: Iterable[Sequence[int]], n: int) -> float:
    """``|boundary| / |Omega|^{(n-1)/n}``, exact when ``|Omega|`` is a perfect n-th power."""
    vset = {as_vertex(x, n) for x in vertices}
    if not vset:
        raise InvalidInputError("isoperimetric ratio of the empty set is undefined")
    size = len(vset)
    bsize = len(compute_boundary(vset))
    root = round(size ** (1.0 / n))
    for cand in (root - 1, root, root + 1):
        if cand > 0 and cand**n == size:
            return bsize / cand ** (n - 1)
    return bsize / size ** ((n - 1) / n)


def random_connected_cluster(size: int, n: int, rng: np.random.Generator) -> set[Vertex]:
    """Grow a connected cluster from the origin by attaching uniformly chosen boundary vertices."""
    if size < 1:
        raise InvalidInputError("cluster size must be positive")
    cluster = {(0,) * n}
    frontier = sorted(set(neighbors((0,) * n)))
    while len(cluster) < size:
        y = frontier[int(rng.integers(len(frontier)))]
        cluster.add(y)
        fset = set(frontier)
        fset.discard(y)
        fset.update(z for z in neighbors(y) if z not in cluster)
        frontier = sorted(fset)
    return cluster


def random_sparse_field(n: int, rng: np.random.Generator, *, max_support: int = 12, radius: int = 4) -> dict:
    """Random values on a random finite set inside ``[-radius, radius]^n``."""
    k = int(rng.integers(1, max_support + 1))
    pts = rng.integers(-radius, radius + 1, size=(k, n))
    vals = rng.standard_normal(k)
    out = {tuple(int(c) for c in p): float(x) for p, x in zip(pts, vals)}
    if all(v == 0.0 for v in out.values()):
        out[(0,) * n] = 1.0
    return out


class ProbeOutcome(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not_applicable"


def max_principle_probe(f: LatticeField, v: LatticeField, domain: Domain | None = None, *, atol: float = 1e-12):
    """Check ``v <= 0`` given ``f > 0``, ``(Lap - f) v >= 0`` on the interior and ``v <= 0`` on the boundary.

    Hypotheses are tested with tolerance ``atol``; when they fail the result
    is ``NOT_APPLICABLE`` rather than a pass.
    """
    dom = v.domain if domain is None else domain
    if f.domain != dom or v.domain != dom:
        raise InvalidInputError("f and v must share the domain")
    if np.any(f.values <= 0):
        return ProbeOutcome.NOT_APPLICABLE
    lhs = laplacian_values(v) - f.interior * v.interior
    if np.any(lhs < -atol) or np.any(v.boundary_values > atol):
        return ProbeOutcome.NOT_APPLICABLE
    return ProbeOutcome.PASS if np.all(v.values <= atol) else ProbeOutcome.FAIL


def solve_variable_screened(domain: Domain, f: np.ndarray, rhs: np.ndarray, boundary: np.ndarray) -> LatticeField:
    """Solve ``(Lap - f) v = rhs`` on the interior with ``v = boundary`` on the boundary.

    ``f`` and ``rhs`` are interior arrays, ``boundary`` is in boundary order.
    """
    n_int = len(domain.vertices)
    table = domain.neighbor_table
    closure_to_interior = np.full(len(domain.closure), -1, dtype=np.int64)
    closure_to_interior[domain.interior_in_closure] = np.arange(n_int)
    closure_to_boundary = np.full(len(domain.closure), -1, dtype=np.int64)
    closure_to_boundary[domain.boundary_in_closure] = np.arange(len(domain.boundary))
    rows, cols = [], []
    b = np.array(rhs, dtype=float)
    for i in range(n_int):
        for c in table[i]:
            j = closure_to_interior[c]
            if j >= 0:
                rows.append(i)
                cols.append(j)
            else:
                b[i] -= boundary[closure_to_boundary[c]]
    A = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n_int, n_int))
    A = A - sp.diags(2 * domain.dim + np.asarray(f, dtype=float))
    v = spla.spsolve(A.tocsc(), b)
    return LatticeField.from_interior(domain, v, boundary)


def max_principle_trials(domain: Domain, trials: int, rng: np.random.Generator) -> dict[ProbeOutcome, int]:
    """Randomised constructions satisfying the hypotheses, each fed to :func:`max_principle_probe`."""
    counts = {o: 0 for o in ProbeOutcome}
    n_int, n_bd = len(domain.vertices), len(domain.boundary)
    for _ in range(trials):
        f_closure = rng.uniform(0.05, 5.0, size=len(domain.closure))
        rhs = rng.uniform(0.0, 2.0, size=n_int) * (rng.random(n_int) < 0.7)
        bd = -rng.uniform(0.0, 1.0, size=n_bd) * (rng.random(n_bd) < 0.5)
        f = LatticeField(domain, f_closure)
        v = solve_variable_screened(domain, f.interior, rhs, bd)
        counts[max_principle_probe(f, v, atol=1e-10)] += 1
    return counts
