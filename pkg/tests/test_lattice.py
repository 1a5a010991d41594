from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latvortex import InvalidInputError, LatticeField, box_domain, compute_boundary, l1_distance, neighbors
from latvortex.lattice import Domain, extend_by_zero, inner_boundary, is_connected

coords2 = st.tuples(st.integers(-50, 50), st.integers(-50, 50))


@pytest.mark.parametrize(
    "x, y, d",
    [((0, 0), (0, 0), 0), ((1, -2), (0, 0), 3), ((2, 3, -1), (-1, 3, 4), 8)],
)
def test_l1_distance_examples(x, y, d):
    assert l1_distance(x, y) == d


def test_l1_distance_rejects_mixed_dimensions():
    with pytest.raises(InvalidInputError):
        l1_distance((0, 0), (0, 0, 0))


@given(coords2, coords2)
def test_l1_distance_symmetric_and_definite(x, y):
    assert l1_distance(x, y) == l1_distance(y, x)
    assert (l1_distance(x, y) == 0) == (x == y)


def test_neighbors_order():
    assert neighbors((0, 0)) == [(-1, 0), (1, 0), (0, -1), (0, 1)]


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=5))
def test_neighbors_count_and_distance(x):
    nb = neighbors(tuple(x))
    assert len(nb) == 2 * len(x)
    assert all(l1_distance(x, y) == 1 for y in nb)


def test_neighbors_dimension_guard():
    with pytest.raises(InvalidInputError):
        neighbors((5,), dim=2)
    with pytest.raises(InvalidInputError):
        neighbors((5,))


def test_box_3x3_counts():
    dom = box_domain((0, 0), 1)
    assert len(dom.vertices) == 9
    # hand count: 3 per side, corners excluded
    assert len(dom.boundary) == 12
    assert set(dom.boundary) == {(-2, -1), (-2, 0), (-2, 1), (2, -1), (2, 0), (2, 1),
                                 (-1, -2), (0, -2), (1, -2), (-1, 2), (0, 2), (1, 2)}


@pytest.mark.parametrize("L", [1, 2, 5, 8])
def test_box_cardinality_and_nesting(L):
    dom = box_domain((3, -1), L)
    assert len(dom) == (2 * L + 1) ** 2
    assert set(dom.vertices) < set(box_domain((3, -1), L + 1).vertices)
    assert is_connected(dom.vertices)


def test_box_vertex_order_is_lexicographic():
    dom = box_domain((0, 0, 0), 2)
    assert list(dom.vertices) == sorted(dom.vertices)
    assert list(dom.closure) == sorted(dom.closure)


def test_domain_invariants_on_random_sets():
    import numpy as np

    rng = np.random.default_rng(4)
    for _ in range(20):
        pts = {tuple(int(c) for c in rng.integers(-4, 5, size=2)) for _ in range(15)}
        dom = Domain(pts)
        assert dom.boundary == tuple(sorted(compute_boundary(pts)))
        assert not set(dom.boundary) & set(dom.vertices)
        closure = set(dom.closure)
        assert all(y in closure for x in dom.vertices for y in neighbors(x))
        ib = inner_boundary(dom)
        assert ib <= set(dom.vertices)
        assert len(ib) <= len(dom.boundary) * 2 * dom.dim


def test_inner_boundary_examples():
    dom = box_domain((0, 0), 1)
    assert inner_boundary(dom) == frozenset(v for v in dom.vertices if v != (0, 0))
    assert inner_boundary(Domain([(4, 4)])) == {(4, 4)}
    big = box_domain((1, 2), 4)
    assert inner_boundary(big) == {v for v in big.vertices if max(abs(v[0] - 1), abs(v[1] - 2)) == 4}


def test_is_connected_examples():
    assert not is_connected({(0, 0), (2, 0)})
    assert is_connected({(0, 0), (1, 0), (1, 1)})
    with pytest.raises(InvalidInputError):
        is_connected(set())


def test_domain_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        Domain([])
    with pytest.raises(InvalidInputError):
        Domain([(0,)])
    with pytest.raises(InvalidInputError):
        Domain([(0, 0), (0, 0, 0)])


def test_extend_by_zero():
    small = box_domain((0, 0), 2)
    big = box_domain((0, 0), 4)
    z = extend_by_zero(LatticeField.zeros(small), big)
    assert not z.values.any()
    f = LatticeField.from_mapping(small, {(0, 0): -1.0, (1, 2): 2.5, (2, 2): 0.25})
    ext = extend_by_zero(f, big)
    assert ext.support() == f.support()
    assert ext[(4, 4)] == 0.0 and ext[(0, 5)] == 0.0
    assert (ext.restrict(small).values == f.values).all()
    with pytest.raises(InvalidInputError):
        extend_by_zero(ext, small)


@settings(max_examples=30)
@given(st.lists(st.floats(-5, 5), min_size=25, max_size=25))
def test_extend_then_restrict_is_identity(vals):
    import numpy as np

    small = box_domain((0, 0), 2)
    f = LatticeField.from_interior(small, np.array(vals))
    back = extend_by_zero(f, box_domain((0, 0), 3)).restrict(small)
    assert np.array_equal(back.values, f.values)
