"""Lattice fields and discrete differential operators.

All reductions go through ``numpy.sum`` over arrays laid out in the domain's
lexicographic order, so results are reproducible bit for bit.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .exceptions import InvalidInputError, OutOfDomainError
from .lattice import Domain, Vertex, as_vertex


class LatticeField:
    """Real values on the closure of a domain.

    Parameters
    ----------
    domain : Domain
    values : array-like of shape (len(domain.closure),)
        Values in ``domain.closure`` order.

    Solver unknowns live on the interior only; :meth:`from_interior` builds
    the closure field with the zero Dirichlet boundary filled in.
    """

    __slots__ = ("domain", "values")

    def __init__(self, domain: Domain, values):
        arr = np.array(values, dtype=float).reshape(-1)
        if arr.shape[0] != len(domain.closure):
            raise InvalidInputError(
                f"field has {arr.shape[0]} values, domain closure has {len(domain.closure)}"
            )
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("field values must be finite")
        arr.setflags(write=False)
        self.domain = domain
        self.values = arr

    @classmethod
    def from_interior(cls, domain: Domain, interior, boundary=None) -> "LatticeField":
        interior = np.asarray(interior, dtype=float).reshape(-1)
        if interior.shape[0] != len(domain.vertices):
            raise InvalidInputError(
                f"interior array has {interior.shape[0]} values, domain has {len(domain.vertices)}"
            )
        vals = np.zeros(len(domain.closure))
        vals[domain.interior_in_closure] = interior
        if boundary is not None:
            vals[domain.boundary_in_closure] = np.asarray(boundary, dtype=float).reshape(-1)
        return cls(domain, vals)

    @classmethod
    def from_mapping(cls, domain: Domain, mapping: Mapping[Sequence[int], float]) -> "LatticeField":
        """Field from ``{vertex: value}``; unspecified closure vertices are zero."""
        vals = np.zeros(len(domain.closure))
        idx = domain.closure_index
        for v, val in mapping.items():
            key = as_vertex(v, domain.dim)
            if key not in idx:
                raise OutOfDomainError(f"vertex {key} is not in the closure of the domain")
            vals[idx[key]] = val
        return cls(domain, vals)

    @classmethod
    def from_function(cls, domain: Domain, func) -> "LatticeField":
        return cls(domain, [func(v) for v in domain.closure])

    @classmethod
    def zeros(cls, domain: Domain) -> "LatticeField":
        return cls(domain, np.zeros(len(domain.closure)))

    @property
    def interior(self) -> np.ndarray:
        return self.values[self.domain.interior_in_closure]

    @property
    def boundary_values(self) -> np.ndarray:
        return self.values[self.domain.boundary_in_closure]

    def __getitem__(self, x) -> float:
        key = as_vertex(x, self.domain.dim)
        try:
            return float(self.values[self.domain.closure_index[key]])
        except KeyError:
            raise OutOfDomainError(f"vertex {key} is not in the closure of the domain") from None

    def to_dict(self) -> dict[Vertex, float]:
        return {v: float(u) for v, u in zip(self.domain.closure, self.values)}

    def support(self) -> frozenset[Vertex]:
        return frozenset(v for v, u in zip(self.domain.closure, self.values) if u != 0.0)

    def restrict(self, domain: Domain) -> "LatticeField":
        """Values on the closure of a smaller domain."""
        if not (domain.dim == self.domain.dim and set(domain.closure) <= set(self.domain.closure)):
            raise InvalidInputError("target closure is not contained in the field's closure")
        idx = self.domain.closure_index
        return LatticeField(domain, self.values[[idx[v] for v in domain.closure]])

    def _combine(self, other, op):
        if isinstance(other, LatticeField):
            _check_same(self, other)
            other = other.values
        return LatticeField(self.domain, op(self.values, other))

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, other):
        return self._combine(other, np.multiply)

    __rmul__ = __mul__
    __radd__ = __add__

    def __neg__(self):
        return LatticeField(self.domain, -self.values)

    def __repr__(self):
        return f"LatticeField({self.domain!r}, min={self.values.min():.6g}, max={self.values.max():.6g})"


def _check_same(*fields: LatticeField) -> Domain:
    dom = fields[0].domain
    for f in fields[1:]:
        if f.domain is not dom and f.domain != dom:
            raise InvalidInputError("fields are defined on different domains")
    return dom


def extend_by_zero(field: LatticeField, target: Domain) -> LatticeField:
    """Null extension: agree with ``field`` on its interior, zero elsewhere on the target closure."""
    src = field.domain
    if src.dim != target.dim or not set(src.closure) <= set(target.closure):
        raise InvalidInputError("source closure must be contained in the target closure")
    vals = np.zeros(len(target.closure))
    idx = target.closure_index
    vals[[idx[v] for v in src.vertices]] = field.interior
    return LatticeField(target, vals)


def laplacian_values(field: LatticeField) -> np.ndarray:
    """``sum_{y~x} (u(y) - u(x))`` at every interior vertex, in interior order."""
    dom = field.domain
    vals = field.values
    return vals[dom.neighbor_table].sum(axis=1) - 2 * dom.dim * vals[dom.interior_in_closure]


def laplacian(field: LatticeField, x: Sequence[int]) -> float:
    dom = field.domain
    key = as_vertex(x, dom.dim)
    i = dom.vertex_index.get(key)
    if i is None:
        raise OutOfDomainError(f"Laplacian needs all neighbours; {key} is not an interior vertex")
    vals = field.values
    return float(vals[dom.neighbor_table[i]].sum() - 2 * dom.dim * vals[dom.interior_in_closure[i]])


def _edge_weights(dom: Domain) -> np.ndarray:
    # interior-interior edges are seen from both ends, hence the half weight
    n_int = len(dom.vertices)
    return np.where(dom.interior_neighbor_table < n_int, 0.5, 1.0)


def dirichlet_form(f: LatticeField, g: LatticeField, domain: Domain | None = None) -> float:
    """Bilinear Dirichlet form: half-weighted interior edges plus boundary edges."""
    dom = _check_same(f, g)
    if domain is not None and domain != dom:
        raise InvalidInputError("fields are not defined on the given domain")
    ii = dom.interior_in_closure
    nb = dom.neighbor_table
    df = f.values[nb] - f.values[ii][:, None]
    dg = g.values[nb] - g.values[ii][:, None]
    return float(np.sum(_edge_weights(dom) * df * dg))


def dirichlet_energy(f: LatticeField) -> float:
    return dirichlet_form(f, f)


def normal_derivative_values(f: LatticeField) -> np.ndarray:
    """``sum_{y in interior, y~x} (f(x) - f(y))`` at every boundary vertex."""
    dom = f.domain
    table = dom.boundary_neighbor_table
    interior = np.append(f.interior, 0.0)
    mask = table >= 0
    fx = f.boundary_values[:, None]
    return np.sum(np.where(mask, fx - interior[table], 0.0), axis=1)


def normal_derivative(f: LatticeField, domain: Domain, x: Sequence[int]) -> float:
    dom = f.domain
    if domain is not None and domain != dom:
        raise InvalidInputError("field is not defined on the given domain")
    key = as_vertex(x, dom.dim)
    if key not in dom.boundary_set:
        raise InvalidInputError(f"{key} is not a boundary vertex")
    row = dom.boundary_neighbor_table[dom.boundary.index(key)]
    inner = row[row >= 0]
    return float(np.sum(f[key] - f.interior[inner]))


def green_identity_gap(f: LatticeField, g: LatticeField, domain: Domain | None = None) -> tuple[float, float]:
    """Discrepancy in the summation-by-parts identity for the Dirichlet form.

    Returns ``(gap, lhs)`` where ``lhs = D(f, g)`` and ``gap`` is the absolute
    difference from ``-sum_Omega f * Lap g + sum_boundary f * dg/dn``.
    """
    dom = _check_same(f, g)
    if domain is not None and domain != dom:
        raise InvalidInputError("fields are not defined on the given domain")
    lhs = dirichlet_form(f, g)
    rhs = -np.sum(f.interior * laplacian_values(g)) + np.sum(f.boundary_values * normal_derivative_values(g))
    return abs(lhs - float(rhs)), lhs
