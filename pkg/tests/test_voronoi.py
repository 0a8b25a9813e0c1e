import numpy as np
import pytest

from gl3sub.errors import ContourOutOfRange, InputError, NonCuspidalTable
from gl3sub.gl3.coefficients import d3_table, eisenstein_table
from gl3sub.gl3.hankel import HankelTransform, admissible_sigma, h_pm
from gl3sub.gl3.params import TRIVIAL, GL3Params
from gl3sub.gl3.voronoi import polar_correction, voronoi_check
from gl3sub.oscillatory.quadrature import gl_grid
from gl3sub.smooth import bump, log_normal

P = GL3Params.from_alpha([0, 0.3j, -0.3j])
H = log_normal(20.0)
EIS = eisenstein_table(P, 3000)


def test_log_normal_mellin_closed_form():
    u, w = gl_grid(np.log(H.support[0]), np.log(H.support[1]), 200)
    for s in (0.5 + 3j, -0.2 - 10j, 1.3 + 0.3j):
        quad = np.sum(H(np.exp(u)) * np.exp(s * u) * w)
        assert abs(quad - H.mellin(s)) < 1e-13 * abs(H.mellin(s.real))


@pytest.mark.parametrize("sign", [1, -1])
def test_hankel_contour_invariance(sign):
    y = np.geomspace(1e-3, 1e2, 11)
    ref, err = HankelTransform(H, sign, P, -0.5)(y, with_error=True)
    for sigma in (0.3, 1.5):
        v, e = HankelTransform(H, sign, P, sigma)(y, with_error=True)
        assert np.all(np.abs(v - ref) <= err + e + 1e-14)


def test_hankel_decays_in_y():
    y = np.geomspace(0.5, 20, 12)
    v = np.abs(HankelTransform(H, 1, P, 1.5)(y))
    assert np.all(np.diff(v) < 0)
    assert v[-1] < 1e-12 * v[0]


def test_hankel_numerical_mellin_agrees_with_closed_form():
    # a compactly supported weight has no closed form; compare both routes on the same weight
    plain = log_normal(20.0)
    numeric = log_normal(20.0)
    object.__setattr__(numeric, "mellin", None)
    y = np.array([0.05, 0.5, 2.0])
    a = HankelTransform(plain, -1, P, 0.5)(y)
    b = HankelTransform(numeric, -1, P, 0.5)(y)
    assert np.max(np.abs(a - b)) < 1e-12


def test_hankel_contour_guard():
    with pytest.raises(ContourOutOfRange):
        h_pm(1.0, H, 1, TRIVIAL, contour_sigma=admissible_sigma(TRIVIAL))


@pytest.mark.parametrize("q,a", [(1, 1), (3, 2), pytest.param(4, 3, marks=pytest.mark.slow),
                                 pytest.param(5, 2, marks=pytest.mark.slow)])
def test_voronoi_identity_on_eisenstein_data(q, a):
    r = voronoi_check(EIS, a, q, H, allow_eisenstein=True)
    assert r.residual <= r.budget
    assert r.budget <= 1e-3 * abs(r.lhs)


def test_voronoi_polar_term_is_needed():
    r = voronoi_check(EIS, 2, 3, H, allow_eisenstein=True)
    assert abs(r.lhs - (r.rhs - r.polar)) > 1e3 * r.budget


def test_polar_term_independent_of_twist():
    a = voronoi_check(EIS, 1, 5, H, allow_eisenstein=True).polar
    assert a == polar_correction(P, 5, H)


def test_voronoi_refuses_non_cuspidal():
    with pytest.raises(NonCuspidalTable):
        voronoi_check(d3_table(100), 1, 1, H)


def test_voronoi_rejects_shared_factor():
    with pytest.raises(InputError):
        voronoi_check(EIS, 2, 4, H, allow_eisenstein=True)


def test_polar_correction_guards():
    with pytest.raises(InputError):
        polar_correction(TRIVIAL, 2, H)
    with pytest.raises(InputError):
        polar_correction(P, 2, bump(10, 30))
