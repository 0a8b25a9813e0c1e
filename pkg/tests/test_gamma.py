import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gl3sub.errors import InputError, PoleEncountered
from gl3sub.gl3.gamma import gamma_ell, gamma_pm, stirling_phi, stirling_phi_prime
from gl3sub.gl3.params import TRIVIAL, GL3Params, langlands
from gl3sub.gl3.special import gamma, loggamma, zeta_em

TEMPERED = langlands(1 / 3 + 0.7j, 1 / 3 - 0.2j)
REAL = langlands(0.3, 0.45)


# special functions ------------------------------------------------------------

def test_loggamma_against_mpmath():
    rng = np.random.default_rng(0)
    z = np.concatenate([
        rng.uniform(-30, 30, 400) + 1j * rng.uniform(-1500, 1500, 400),
        rng.uniform(-20, 20, 400) + 1j * rng.uniform(-3, 3, 400),
    ])
    ref = np.array([complex(mp.exp(mp.loggamma(complex(v)) - loggamma(v))) for v in z])
    assert np.max(np.abs(ref - 1)) < 1e-11


def test_gamma_reflection_identity():
    assert gamma(0.25) * gamma(0.75) == pytest.approx(np.pi / np.sin(np.pi / 4), rel=1e-14)
    assert gamma(0.5) == pytest.approx(np.sqrt(np.pi), rel=1e-14)
    assert gamma(6.0) == pytest.approx(120.0, rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.floats(-20, 20), st.floats(-200, 200))
def test_gamma_recurrence(x, y):
    z = complex(x, y)
    if abs(z - round(x)) < 1e-3 and round(x) <= 0:
        return
    lhs = np.exp(loggamma(z + 1) - loggamma(z))
    assert abs(lhs - z) <= 1e-11 * abs(z)


def test_gamma_poles():
    with pytest.raises(PoleEncountered):
        loggamma(-3.0)
    with pytest.raises(PoleEncountered):
        loggamma(np.array([1.5, 0.0]))


@pytest.mark.parametrize("s", [0.5 + 5j, 0.5 + 20j, 2.0, -1.5 + 3j, 0.5 + 100j, 0.3 - 40j])
def test_zeta_em_against_mpmath(s):
    assert abs(zeta_em(s) - complex(mp.zeta(s))) < 1e-12 * max(1, abs(complex(mp.zeta(s))))


def test_zeta_em_pole():
    with pytest.raises(PoleEncountered):
        zeta_em(1)


# parameters -------------------------------------------------------------------

def test_trivial_parameters():
    assert np.allclose(TRIVIAL.alpha, 0)


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_parameter_identities(nu1, nu2):
    p = GL3Params(nu1, nu2)
    assert abs(p.alpha.sum()) < 1e-12
    assert p.dual().dual() == p
    assert np.allclose(p.dual().alpha, -p.alpha[::-1])
    back = GL3Params.from_alpha(p.alpha)
    assert abs(complex(back.nu1) - nu1) < 1e-12 and abs(complex(back.nu2) - nu2) < 1e-12


def test_from_alpha_rejects_nonzero_sum():
    with pytest.raises(InputError):
        GL3Params.from_alpha([1, 0, 0])


# gamma factors ----------------------------------------------------------------

def test_gamma_at_minus_half():
    assert abs(gamma_ell(-0.5, 0, TRIVIAL) - 0.5) < 1e-12
    assert abs(gamma_ell(-0.5, 1, TRIVIAL) - 0.5) < 1e-12
    assert abs(gamma_pm(-0.5, 1, TRIVIAL) - (0.5 - 0.5j)) < 1e-12
    assert abs(gamma_pm(-0.5, -1, TRIVIAL) - (0.5 + 0.5j)) < 1e-12


def test_gamma_ell_against_mpmath():
    rng = np.random.default_rng(3)
    for p in (TRIVIAL, TEMPERED, REAL):
        for _ in range(10):
            s = complex(rng.uniform(-0.9, 1), rng.uniform(-60, 60))
            for ell in (0, 1):
                ref = mp.power(mp.pi, -3 * s - 1.5) / 2
                for a in p.alpha:
                    ref *= mp.gamma((1 + s + a + ell) / 2) / mp.gamma((-s - a + ell) / 2)
                assert abs(gamma_ell(s, ell, p) / complex(ref) - 1) < 1e-11


def test_gamma_denominator_pole_gives_zero():
    # (-s - 0 + 0)/2 = -1 at s = 2
    assert gamma_ell(2.0, 0, TRIVIAL) == 0


def test_gamma_numerator_pole_raises():
    with pytest.raises(PoleEncountered):
        gamma_ell(-1.0, 0, TRIVIAL)


@settings(max_examples=40, deadline=None)
@given(st.floats(-0.9, 2), st.floats(-300, 300))
def test_schwarz_reflection(x, y):
    s = complex(x, y)
    for ell in (0, 1):
        a = gamma_ell(s, ell, REAL)
        b = gamma_ell(np.conj(s), ell, REAL)
        assert abs(np.conj(b) - a) <= 1e-11 * abs(a) + 1e-300


@pytest.mark.parametrize("p", [TRIVIAL, TEMPERED], ids=["trivial", "tempered"])
@pytest.mark.parametrize("sigma", [-0.5, 0.0, 0.5])
def test_gamma_growth_envelope(p, sigma):
    tau = np.linspace(-1e3, 1e3, 8001)
    for sign in (1, -1):
        ratio = np.abs(gamma_pm(sigma + 1j * tau, sign, p)) / (1 + np.abs(tau)) ** (3 * sigma + 1.5)
        assert ratio.max() < 2.0


@pytest.mark.parametrize("p", [TRIVIAL, TEMPERED], ids=["trivial", "tempered"])
def test_stirling_remainder_slowly_varying(p):
    tau = np.geomspace(10, 1e3, 300)
    for sign in (1, -1):
        for t in (tau, -tau):
            assert np.max(np.abs(stirling_phi_prime(t, sign, p)) * tau) < 1.0
            assert np.max(np.abs(stirling_phi(t, sign, p))) < 1.01


def test_stirling_phi_grid_stable():
    coarse = np.max(np.abs(stirling_phi(np.linspace(2, 1e3, 2001), -1, TEMPERED)))
    fine = np.max(np.abs(stirling_phi(np.linspace(2, 1e3, 8001), -1, TEMPERED)))
    assert abs(coarse - fine) < 1e-6


def test_stirling_carrier_pi_leaves_linear_phase():
    tau = np.geomspace(10, 1e3, 50)
    lit = np.abs(stirling_phi_prime(tau, -1, TRIVIAL, scale=np.pi)) * tau
    # 3 log 2 |Phi| tau grows linearly
    assert lit[-1] > 1000
    assert np.abs(stirling_phi_prime(1e3, -1, TRIVIAL, scale=np.pi)) == pytest.approx(3 * np.log(2), rel=0.01)


def test_stirling_phi_conjugation():
    tau = np.linspace(5, 500, 50)
    a = stirling_phi(tau, 1, REAL)
    b = stirling_phi(-tau, -1, REAL)
    assert np.max(np.abs(a - np.conj(b))) < 1e-10


def test_stirling_phi_domain():
    with pytest.raises(InputError):
        stirling_phi(1.0, 1, TRIVIAL)
