import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gl3sub.smooth import bump, default_u, default_v, plateau


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
@pytest.mark.parametrize("w", [bump(1.0, 2.0), default_u()], ids=["bump", "plateau"])
def test_derivatives_match_differences_of_lower_order(w, k):
    lo, hi = w.support
    xs = np.linspace(lo, hi, 41)[1:-1]
    h = 1e-6
    fd = (w.derivative(xs + h, k - 1) - w.derivative(xs - h, k - 1)) / (2 * h)
    exact = w.derivative(xs, k)
    assert np.max(np.abs(exact - fd)) <= 1e-5 * np.max(np.abs(exact))


def test_plateau_values():
    u = default_u()
    assert u(np.array([0.4, 0.5]))[0] == 0.0
    assert np.allclose(u(np.linspace(1, 2, 11)), 1.0)
    assert u(np.array([0.75]))[0] == pytest.approx(0.5)
    assert u(np.array([2.6]))[0] == 0.0


def test_support_endpoints_vanish_with_derivatives():
    for w in (default_u(), default_v(), bump(-1, 1), plateau(0, 1, 2, 3)):
        lo, hi = w.support
        for k in range(5):
            assert np.all(np.abs(w.derivative(np.array([lo, hi]), k)) < 1e-200)


def test_bump_variation_is_twice_peak():
    assert bump(0, 1, height=3.0).variation() == pytest.approx(6.0, rel=1e-6)


def test_derivative_order_limit():
    with pytest.raises(ValueError):
        default_v().derivative(np.array([1.5]), 99)


@settings(max_examples=30, deadline=None)
@given(st.floats(1.01, 1.99))
def test_bump_symmetric(x):
    v = default_v()
    assert v(np.array([x]))[0] == pytest.approx(v(np.array([3 - x]))[0], rel=1e-12, abs=1e-300)
