from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latvortex import (
    InvalidInputError,
    LatticeField,
    OutOfDomainError,
    box_domain,
    dirichlet_form,
    green_identity_gap,
    laplacian,
    normal_derivative,
)
from latvortex.calculus import dirichlet_energy, laplacian_values, normal_derivative_values

BOX5 = box_domain((0, 0), 2)
BOX9 = box_domain((0, 0), 4)


def _random_field(dom, rng, zero_boundary=False):
    f = LatticeField(dom, rng.standard_normal(len(dom.closure)))
    return LatticeField.from_interior(dom, f.interior) if zero_boundary else f


def test_laplacian_constant_and_linear():
    dom = box_domain((0, 0), 3)
    c = LatticeField.from_function(dom, lambda x: 2.5)
    lin = LatticeField.from_function(dom, lambda x: float(x[0]))
    for x in dom.vertices:
        assert laplacian(c, x) == 0.0
        assert laplacian(lin, x) == 0.0


def test_laplacian_indicator():
    dom = box_domain((0, 0), 2)
    d0 = LatticeField.from_mapping(dom, {(0, 0): 1.0})
    assert laplacian(d0, (0, 0)) == -4.0
    assert laplacian(d0, (1, 0)) == 1.0


def test_laplacian_out_of_domain():
    d0 = LatticeField.zeros(BOX5)
    with pytest.raises(OutOfDomainError):
        laplacian(d0, (3, 0))


def test_laplacian_values_matches_pointwise():
    rng = np.random.default_rng(0)
    f = _random_field(BOX9, rng)
    vec = laplacian_values(f)
    assert np.allclose(vec, [laplacian(f, x) for x in BOX9.vertices], atol=1e-13)


def test_laplacian_linear():
    rng = np.random.default_rng(1)
    f, g = _random_field(BOX5, rng), _random_field(BOX5, rng)
    lhs = laplacian_values(f * 2.0 + g * (-3.0))
    assert np.allclose(lhs, 2.0 * laplacian_values(f) - 3.0 * laplacian_values(g), atol=1e-12)


def test_field_rejects_non_finite():
    vals = np.zeros(len(BOX5.closure))
    vals[3] = np.nan
    with pytest.raises(InvalidInputError):
        LatticeField(BOX5, vals)
    with pytest.raises(InvalidInputError):
        LatticeField(BOX5, np.zeros(3))


def test_dirichlet_form_examples():
    dom = box_domain((0, 0), 1)
    rng = np.random.default_rng(2)
    const = LatticeField.from_function(dom, lambda x: -7.0)
    assert dirichlet_form(const, _random_field(dom, rng)) == 0.0
    d0 = LatticeField.from_mapping(dom, {(0, 0): 1.0})
    assert dirichlet_form(d0, d0) == 4.0


def test_dirichlet_form_domain_mismatch():
    with pytest.raises(InvalidInputError):
        dirichlet_form(LatticeField.zeros(BOX5), LatticeField.zeros(BOX9))
    with pytest.raises(InvalidInputError):
        dirichlet_form(LatticeField.zeros(BOX5), LatticeField.zeros(BOX5), BOX9)


def test_dirichlet_form_bilinear_symmetric_nonnegative():
    rng = np.random.default_rng(3)
    f1, f2, g = (_random_field(BOX9, rng) for _ in range(3))
    a, b = 1.7, -0.4
    lhs = dirichlet_form(f1 * a + f2 * b, g)
    assert lhs == pytest.approx(a * dirichlet_form(f1, g) + b * dirichlet_form(f2, g), rel=1e-12, abs=1e-12)
    assert dirichlet_form(f1, g) == pytest.approx(dirichlet_form(g, f1), rel=1e-13)
    assert dirichlet_energy(f1) > 0


def test_dirichlet_form_zero_only_for_constants():
    rng = np.random.default_rng(5)
    for _ in range(10):
        f = _random_field(BOX5, rng)
        assert dirichlet_form(f, f) > 1e-6


def test_normal_derivative_examples():
    dom = box_domain((0, 0), 2)
    assert normal_derivative(LatticeField.zeros(dom), dom, (3, 0)) == 0.0
    # (3, 2) touches only the corner (2, 2) of the box
    f = LatticeField.from_mapping(dom, {(2, 2): -1.0})
    assert normal_derivative(f, dom, (3, 2)) == 1.0
    c = LatticeField.from_function(dom, lambda x: 4.0)
    assert not normal_derivative_values(c).any()


def test_normal_derivative_rejects_interior_point():
    with pytest.raises(InvalidInputError):
        normal_derivative(LatticeField.zeros(BOX5), BOX5, (0, 0))


def test_green_identity_integer_fields_exact():
    rng = np.random.default_rng(6)
    for _ in range(20):
        f = LatticeField(BOX5, rng.integers(-9, 10, len(BOX5.closure)).astype(float))
        g = LatticeField(BOX5, rng.integers(-9, 10, len(BOX5.closure)).astype(float))
        gap, _ = green_identity_gap(f, g)
        assert gap == 0.0


@pytest.mark.parametrize("zero_boundary", [False, True])
def test_green_identity_random_pairs(zero_boundary):
    rng = np.random.default_rng(7)
    for _ in range(100):
        f = _random_field(BOX9, rng, zero_boundary)
        g = _random_field(BOX9, rng)
        gap, lhs = green_identity_gap(f, g)
        assert gap < 1e-10 * (1 + abs(lhs))


def test_summation_identity():
    rng = np.random.default_rng(8)
    g = _random_field(BOX9, rng)
    assert np.sum(laplacian_values(g)) == pytest.approx(np.sum(normal_derivative_values(g)), abs=1e-11)


@settings(max_examples=25)
@given(st.lists(st.floats(-3, 3), min_size=25, max_size=25))
def test_energy_identity_for_zero_boundary(vals):
    f = LatticeField.from_interior(BOX5, np.array(vals))
    lhs = -float(np.sum(f.interior * laplacian_values(f)))
    assert lhs == pytest.approx(dirichlet_form(f, f), rel=1e-12, abs=1e-12)


def test_three_dimensional_green_identity():
    dom = box_domain((0, 0, 0), 2)
    rng = np.random.default_rng(9)
    f, g = _random_field(dom, rng), _random_field(dom, rng)
    gap, lhs = green_identity_gap(f, g)
    assert gap < 1e-10 * (1 + abs(lhs))
