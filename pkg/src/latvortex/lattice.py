"""Geometry of the integer lattice: vertices, distances and finite domains.

Vertices are plain tuples of Python ints. A :class:`Domain` is an immutable
finite vertex set together with its vertex boundary; it also precomputes the
index tables used by the vectorised operators in :mod:`latvortex.calculus`
and :mod:`latvortex.linear`.
"""

from __future__ import annotations

from collections import deque
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence, Tuple

import numpy as np

from .exceptions import InvalidInputError

Vertex = Tuple[int, ...]


def as_vertex(x: Sequence[int], dim: int | None = None) -> Vertex:
    """Coerce ``x`` to a vertex tuple, optionally checking its dimension."""
    try:
        coords = tuple(int(c) for c in x)
    except TypeError as exc:
        raise InvalidInputError(f"vertex must be a sequence of integers, got {x!r}") from exc
    for c, raw in zip(coords, x):
        if c != raw:
            raise InvalidInputError(f"vertex coordinates must be integers, got {x!r}")
    if dim is not None and len(coords) != dim:
        raise InvalidInputError(f"vertex {coords} has dimension {len(coords)}, expected {dim}")
    return coords


def l1_distance(x: Sequence[int], y: Sequence[int]) -> int:
    """Return the lattice (graph) distance ``sum_i |x_i - y_i|``."""
    if len(x) != len(y):
        raise InvalidInputError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return sum(abs(int(a) - int(b)) for a, b in zip(x, y))


def neighbors(x: Sequence[int], dim: int | None = None) -> list[Vertex]:
    """The ``2n`` lattice neighbours of ``x``.

    Ordered by coordinate index, the minus step before the plus step.
    """
    v = as_vertex(x, dim)
    if len(v) < 2 and dim is None:
        raise InvalidInputError("lattice dimension must be at least 2")
    out = []
    for i in range(len(v)):
        for step in (-1, 1):
            y = list(v)
            y[i] += step
            out.append(tuple(y))
    return out


def _offsets(dim: int) -> np.ndarray:
    offs = np.zeros((2 * dim, dim), dtype=np.int64)
    for i in range(dim):
        offs[2 * i, i] = -1
        offs[2 * i + 1, i] = 1
    return offs


def compute_boundary(vertices: Iterable[Vertex]) -> frozenset[Vertex]:
    """Vertex boundary: points outside the set adjacent to some member."""
    vset = set(vertices)
    out = set()
    for x in vset:
        for y in neighbors(x):
            if y not in vset:
                out.add(y)
    return frozenset(out)


class Domain:
    """A finite vertex set of Z^n with its boundary and closure.

    Parameters
    ----------
    vertices : iterable of integer sequences
        The interior vertex set. Must be nonempty.
    dim : int, optional
        Ambient dimension; inferred from the vertices when omitted.

    Notes
    -----
    Interior, boundary and closure are each stored in lexicographic order.
    Fields on the closure are arrays indexed by ``closure`` order, solver
    unknowns are arrays indexed by ``vertices`` order.
    """

    def __init__(self, vertices: Iterable[Sequence[int]], dim: int | None = None):
        raw = list(vertices)
        if not raw:
            raise InvalidInputError("a domain needs at least one vertex")
        if dim is None:
            dim = len(raw[0])
        if dim < 2:
            raise InvalidInputError(f"lattice dimension must be at least 2, got {dim}")
        verts = sorted({as_vertex(v, dim) for v in raw})
        self.dim = dim
        self.vertices: tuple[Vertex, ...] = tuple(verts)
        self.boundary: tuple[Vertex, ...] = tuple(sorted(compute_boundary(verts)))
        self.closure: tuple[Vertex, ...] = tuple(sorted(verts + list(self.boundary)))
        # optional metadata for cubes, set by box_domain
        self.center: Vertex | None = None
        self.half_width: int | None = None

    def __repr__(self):
        if self.half_width is not None:
            return f"Domain(box center={self.center}, half_width={self.half_width})"
        return f"Domain(dim={self.dim}, |vertices|={len(self.vertices)})"

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, x):
        return tuple(x) in self.vertex_set

    def __eq__(self, other):
        return isinstance(other, Domain) and self.dim == other.dim and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.dim, self.vertices))

    @cached_property
    def vertex_set(self) -> frozenset[Vertex]:
        return frozenset(self.vertices)

    @cached_property
    def boundary_set(self) -> frozenset[Vertex]:
        return frozenset(self.boundary)

    @cached_property
    def closure_index(self) -> dict[Vertex, int]:
        return {v: i for i, v in enumerate(self.closure)}

    @cached_property
    def vertex_index(self) -> dict[Vertex, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def interior_in_closure(self) -> np.ndarray:
        """Position of each interior vertex inside the closure ordering."""
        idx = self.closure_index
        return np.array([idx[v] for v in self.vertices], dtype=np.int64)

    @cached_property
    def boundary_in_closure(self) -> np.ndarray:
        idx = self.closure_index
        return np.array([idx[v] for v in self.boundary], dtype=np.int64)

    @cached_property
    def coords(self) -> np.ndarray:
        """Interior coordinates as an ``(N, n)`` integer array."""
        return np.array(self.vertices, dtype=np.int64).reshape(len(self.vertices), self.dim)

    @cached_property
    def closure_coords(self) -> np.ndarray:
        return np.array(self.closure, dtype=np.int64).reshape(len(self.closure), self.dim)

    @cached_property
    def neighbor_table(self) -> np.ndarray:
        """``(N, 2n)`` closure indices of the neighbours of each interior vertex."""
        idx = self.closure_index
        offs = _offsets(self.dim)
        table = np.empty((len(self.vertices), 2 * self.dim), dtype=np.int64)
        for r, x in enumerate(self.coords):
            for c, y in enumerate(x + offs):
                table[r, c] = idx[tuple(int(t) for t in y)]
        return table

    @cached_property
    def interior_neighbor_table(self) -> np.ndarray:
        """Like :attr:`neighbor_table` but indexing interior order; boundary slots hold ``N``.

        ``N`` is one past the last interior index, so callers can gather from
        an interior array padded with a trailing zero.
        """
        n_int = len(self.vertices)
        closure_to_interior = np.full(len(self.closure), n_int, dtype=np.int64)
        closure_to_interior[self.interior_in_closure] = np.arange(n_int)
        return closure_to_interior[self.neighbor_table]

    @cached_property
    def boundary_neighbor_table(self) -> np.ndarray:
        """``(B, 2n)`` interior indices of the interior neighbours of each boundary vertex, ``-1`` otherwise."""
        vidx = self.vertex_index
        offs = _offsets(self.dim)
        coords = np.array(self.boundary, dtype=np.int64).reshape(len(self.boundary), self.dim)
        table = np.full((len(self.boundary), 2 * self.dim), -1, dtype=np.int64)
        for r, x in enumerate(coords):
            for c, y in enumerate(x + offs):
                table[r, c] = vidx.get(tuple(int(t) for t in y), -1)
        return table

    def l1_norms(self, center: Sequence[int] | None = None) -> np.ndarray:
        """Distance ``d(x)`` from ``center`` (default origin) for each closure vertex."""
        c = np.zeros(self.dim, dtype=np.int64) if center is None else np.asarray(as_vertex(center, self.dim))
        return np.abs(self.closure_coords - c).sum(axis=1)

    @cached_property
    def boundary_distance(self) -> np.ndarray:
        """Graph distance from each interior vertex to the boundary (1 on the inner boundary)."""
        n_int = len(self.vertices)
        dist = np.full(n_int, -1, dtype=np.int64)
        table = self.interior_neighbor_table
        queue = deque()
        for i in range(n_int):
            if np.any(table[i] == n_int):
                dist[i] = 1
                queue.append(i)
        while queue:
            i = queue.popleft()
            for j in table[i]:
                if j < n_int and dist[j] < 0:
                    dist[j] = dist[i] + 1
                    queue.append(j)
        return dist

    def contains_domain(self, other: "Domain") -> bool:
        return self.dim == other.dim and other.vertex_set <= self.vertex_set


def box_domain(center: Sequence[int], half_width: int) -> Domain:
    """Axis-aligned cube ``{x : max_i |x_i - c_i| <= half_width}``."""
    c = as_vertex(center)
    if int(half_width) != half_width or half_width < 1:
        raise InvalidInputError(f"half_width must be a positive integer, got {half_width!r}")
    half_width = int(half_width)
    ranges = [range(ci - half_width, ci + half_width + 1) for ci in c]
    dom = Domain(product(*ranges), dim=len(c))
    dom.center = c
    dom.half_width = half_width
    return dom


def inner_boundary(domain: Domain) -> frozenset[Vertex]:
    """Interior vertices adjacent to the boundary."""
    return frozenset(v for v in domain.vertices if any(y in domain.boundary_set for y in neighbors(v)))


def is_connected(vertices: Iterable[Sequence[int]]) -> bool:
    """Whether the induced subgraph of Z^n on ``vertices`` is connected."""
    vset = {tuple(int(c) for c in v) for v in vertices}
    if not vset:
        raise InvalidInputError("connectivity of the empty set is undefined")
    start = next(iter(vset))
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in neighbors(x):
            if y in vset and y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == len(vset)


def extend_by_zero(field, target: Domain):
    """Null extension of ``field`` to ``target``; see :func:`latvortex.calculus.extend_by_zero`."""
    from .calculus import extend_by_zero as _extend

    return _extend(field, target)
