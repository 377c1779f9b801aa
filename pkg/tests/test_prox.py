import warnings

import numpy as np
import pytest

from aaopt.prox import (
    BoxBounds,
    box_project,
    nonneg_project,
    prox_quadratic_ls,
    soft_threshold,
    weighted_soft_threshold,
)

from oracles import grid_minimize_1d, shrink_objective


def test_soft_threshold_basic():
    v = np.array([3.0, -0.5, 1.0])
    out = soft_threshold(v, 1.0)
    assert np.array_equal(out, np.array([2.0, 0.0, 0.0]))  # tie at |1.0| maps to 0


def test_soft_threshold_zero_threshold_is_identity():
    v = np.random.default_rng(0).standard_normal(20)
    assert np.array_equal(soft_threshold(v, 0.0), v)


def test_soft_threshold_negative_threshold_raises():
    with pytest.raises(ValueError):
        soft_threshold(np.ones(2), -0.1)


def test_weighted_matches_uniform_bitwise():
    rng = np.random.default_rng(1)
    for _ in range(100):
        v = rng.standard_normal(12) * 3
        s = float(rng.random() * 2)
        a = soft_threshold(v, s)
        b = weighted_soft_threshold(v, np.ones_like(v), s)
        assert np.array_equal(a, b)


def test_weighted_soft_threshold_three_branches():
    v = np.array([5.0, -5.0, 0.1])
    w = np.array([2.0, 2.0, 2.0])
    out = weighted_soft_threshold(v, w, 1.0)
    assert np.array_equal(out, np.array([3.0, -3.0, 0.0]))


def test_weighted_soft_threshold_zero_weight_passthrough():
    v = np.array([0.3, -0.7])
    out = weighted_soft_threshold(v, np.zeros(2), 5.0)
    assert np.array_equal(out, v)


def test_weighted_soft_threshold_rejects_negative_weights():
    with pytest.raises(ValueError):
        weighted_soft_threshold(np.ones(2), np.array([1.0, -1.0]), 1.0)


def test_weighted_soft_threshold_matches_grid_oracle():
    rng = np.random.default_rng(2)
    for _ in range(200):
        v = float(rng.uniform(-5, 5))
        w = float(rng.uniform(0, 3))
        s = float(rng.uniform(0, 2))
        got = weighted_soft_threshold(np.array([v]), np.array([w]), s)[0]
        lo = -abs(v) - 1.0
        hi = abs(v) + 1.0
        want = grid_minimize_1d(lambda t: shrink_objective(t, v, w, s), lo, hi)
        assert abs(got - want) <= 1e-8


def test_box_project():
    b = BoxBounds(np.array([0.0, -1.0]), np.array([1.0, 1.0]))
    out = box_project(np.array([2.0, -3.0]), b)
    assert np.array_equal(out, np.array([1.0, -1.0]))


def test_box_project_idempotent_and_nonexpansive():
    rng = np.random.default_rng(3)
    b = BoxBounds(-1.0, 2.0)
    for _ in range(1000):
        x = rng.standard_normal(6) * 4
        y = rng.standard_normal(6) * 4
        px, py = box_project(x, b), box_project(y, b)
        assert np.array_equal(box_project(px, b), px)
        assert np.linalg.norm(px - py) <= np.linalg.norm(x - y) + 1e-12


def test_bad_bounds_raise():
    with pytest.raises(ValueError):
        BoxBounds(np.array([1.0]), np.array([0.0]))


def test_nonneg_project():
    out = nonneg_project(np.array([-2.0, 0.0, 3.0]))
    assert np.array_equal(out, np.array([0.0, 0.0, 3.0]))


def test_soft_threshold_nonexpansive():
    rng = np.random.default_rng(4)
    for _ in range(1000):
        x = rng.standard_normal(5) * 3
        y = rng.standard_normal(5) * 3
        t = float(rng.random() * 2)
        assert (
            np.linalg.norm(soft_threshold(x, t) - soft_threshold(y, t))
            <= np.linalg.norm(x - y) + 1e-12
        )


def test_prox_quadratic_ls_zero_data_is_identity():
    z = np.array([1.0, -2.0, 0.5])
    out = prox_quadratic_ls(np.zeros((2, 3)), np.zeros(2), 0.0, 1.0, 1.0, z)
    assert np.allclose(out, z, atol=1e-12)


def test_prox_quadratic_ls_scalar_example():
    # min 0.5*(x-2)^2 + 0.5*x^2 has minimizer 1
    out = prox_quadratic_ls(np.eye(1), np.array([2.0]), 0.0, 1.0, 1.0, np.array([0.0]))
    assert out[0] == pytest.approx(1.0, abs=1e-12)


def test_prox_quadratic_ls_first_order_optimality():
    rng = np.random.default_rng(5)
    for _ in range(20):
        m, n = int(rng.integers(2, 15)), int(rng.integers(2, 12))
        A = rng.standard_normal((m, n))
        y = rng.standard_normal(m)
        z = rng.standard_normal(n)
        lam, beta = float(rng.random() * 0.1), float(rng.random() + 0.1)
        x = prox_quadratic_ls(A, y, lam, float(m), beta, z, tol=1e-12)
        grad = A.T @ (A @ x - y) / m + 2 * lam * x + (x - z) / beta
        assert np.linalg.norm(grad) <= 1e-12 * (1 + np.linalg.norm(z))


def test_prox_quadratic_ls_warns_on_cg_cap():
    rng = np.random.default_rng(6)
    A = rng.standard_normal((30, 30))
    y = rng.standard_normal(30)
    z = rng.standard_normal(30)
    with pytest.warns(RuntimeWarning):
        prox_quadratic_ls(A, y, 0.0, 1.0, 1e6, z, tol=1e-14, max_iter=2)
