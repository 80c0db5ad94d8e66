import json
import math

import numpy as np
import pytest

import ridgetv


def teacher():
    ang = np.array([0.3, 2.0, 4.1])
    dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    return ridgetv.Network(2, np.array([1.0, -0.8, 0.6]), dirs, np.array([0.2, -0.3, 0.1]))


def test_sigma():
    np.testing.assert_allclose(ridgetv.sigma(2, np.array([-1.0, 0.0, 2.5])), [0.0, 0.0, 2.5])
    assert ridgetv.sigma(3, 2.0) == pytest.approx(2.0)


def test_network_matches_numpy():
    net = teacher()
    X = np.random.default_rng(0).uniform(-1, 1, size=(20, 2))
    s = X @ net.directions.T - net.offsets
    want = (np.maximum(s, 0.0) * net.alpha).sum(axis=1)
    np.testing.assert_allclose(net(X), want, atol=1e-14)
    back = ridgetv.Network.from_json(net.to_json())
    np.testing.assert_array_equal(back.alpha, net.alpha)
    beta = 1.0 / (1.0 + net.offsets**2)
    assert net.path_norm() == pytest.approx(np.abs(net.alpha / beta).sum(), rel=1e-14)


def test_solve_fits_teacher():
    net = teacher()
    X = np.random.default_rng(1).uniform(-1, 1, size=(30, 2))
    y = net(X)
    fit, report = ridgetv.solve(X, y, lam=1e-4)
    assert report["converged"]
    assert report["representer_ok"]
    assert len(fit) <= 30
    assert math.sqrt(np.mean((fit(X) - y) ** 2)) < 0.05


def test_green_check_balances():
    net = ridgetv.Network(2, np.array([1.0]), np.array([[0.6, 0.8]]), np.array([0.1]))
    for _, lhs, rhs, _ in ridgetv.green_check(net, count=2):
        assert lhs == pytest.approx(rhs, rel=1e-2)


def test_fbp_round_trip():
    pts = np.array([[0.0, 0.0], [0.5, -0.3], [1.0, 1.0]])
    exact, rec = ridgetv.fbp_lizorkin(2, 2, 1.0, pts, h=0.1, h_t=0.1)
    assert np.abs(rec - exact).max() <= 2e-2 * np.abs(exact).max()


def test_errors():
    with pytest.raises(ValueError):
        ridgetv.Network(1, np.array([1.0]), np.array([[1.0, 0.0]]), np.array([0.0]))
    with pytest.raises(ridgetv.ValidationError):
        ridgetv.Network(2, np.array([1.0]), np.array([[1.0, 1.0]]), np.array([0.0]))


def test_verify_types_suite():
    summary = ridgetv.verify("types")
    assert summary["passed"]
    assert [c["id"] for c in summary["checks"]] == ["C7", "C8"]
    json.dumps(summary)
