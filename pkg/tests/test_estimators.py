from __future__ import annotations

import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from latvortex import AbelianHiggsSolver, ChernSimonsSolver, InvalidInputError


def test_fit_predict_single_vortex():
    est = ChernSimonsSolver(lam=1.0, half_width=6).fit([[0, 0]])
    u = est.predict([[0, 0], [1, 0], [6, 6], [7, 0], [100, 100]])
    assert u[0] < u[1] < 0
    assert u[3] == 0.0 and u[4] == 0.0
    assert est.n_features_in_ == 2
    assert est.solution_.flux_gap < 1e-6 * (1 + 4 * math.pi)


def test_multiplicities_via_y():
    a = ChernSimonsSolver(half_width=5).fit([[0, 0], [2, 1]], [2, 1])
    assert a.config_.total_mass == pytest.approx(12 * math.pi)
    with pytest.raises(InvalidInputError):
        ChernSimonsSolver(half_width=5).fit([[0, 0]], [1, 2])


def test_no_vortices_gives_zero():
    est = ChernSimonsSolver(half_width=4).fit(np.empty((0, 2)))
    assert not est.predict([[0, 0], [3, 3]]).any()


def test_rejects_non_integer_points():
    with pytest.raises(InvalidInputError):
        ChernSimonsSolver(half_width=3).fit([[0.5, 0]])


def test_predict_before_fit():
    with pytest.raises(NotFittedError):
        ChernSimonsSolver().predict([[0, 0]])


def test_predict_dimension_check():
    est = ChernSimonsSolver(half_width=3).fit([[0, 0]])
    with pytest.raises(InvalidInputError):
        est.predict([[0, 0, 0]])


def test_params_and_clone():
    est = AbelianHiggsSolver(lam=2.0, half_width=4, K=3.5)
    params = est.get_params()
    assert params["lam"] == 2.0 and params["K_cs"] is None
    twin = clone(est).set_params(half_width=3)
    assert twin.half_width == 3 and est.half_width == 4


def test_ah_sandwich():
    est = AbelianHiggsSolver(half_width=5).fit([[0, 0]])
    pts = [list(v) for v in est.domain_.vertices]
    up = est.predict(pts)
    low = est.cs_solution_.u.interior
    assert np.all(low <= up) and np.all(up <= 0)


def test_three_dimensional_fit():
    est = ChernSimonsSolver(lam=6.0, half_width=3).fit([[0, 0, 0]])
    assert est.predict([[0, 0, 0]])[0] < 0


def test_decay_fit_helper():
    est = ChernSimonsSolver(half_width=24).fit([[0, 0]])
    fit = est.decay_fit()
    assert fit.passes(0.2)


def test_bad_K_rejected():
    with pytest.raises(InvalidInputError):
        ChernSimonsSolver(K=2.0, half_width=2).fit([[0, 0]])
