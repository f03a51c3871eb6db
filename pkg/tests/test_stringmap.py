import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from gapspec import medium, stringmap
from gapspec.errors import DomainError, RegimeError
from gapspec.medium import Branch, MediumParams

# frozen from the mpmath oracle (tests/oracles.py)
A_CANON = 0.72416238337258281044
B_CANON = 34.308095900378847961
PHI_1_099 = -6.9065397128850547602e-4
K_0_5 = 0.62981478758970614270
N_0_5 = 1.2596295751794122854


def test_frozen_values_match_oracle():
    assert float(oracles.a()) == pytest.approx(A_CANON, rel=1e-15)
    assert float(oracles.b()) == pytest.approx(B_CANON, rel=1e-12)
    assert float(oracles.phi("1.099")) == pytest.approx(PHI_1_099, rel=1e-15)
    assert float(oracles.k_real("0.5")) == pytest.approx(K_0_5, rel=1e-15)


def test_momentum_example(canon):
    assert stringmap.momentum_real(canon, 0.5) == pytest.approx(K_0_5, rel=1e-14)
    assert medium.refractive_index(canon, 0.5) == pytest.approx(N_0_5, rel=1e-14)


def test_rapidity_zero_at_shifted_atom():
    p = MediumParams(omega12=0.6)
    assert stringmap.rapidity_real(p, 0.6) == 0.0
    q = MediumParams(omega12=0.6, omega12_shifted=0.58)
    assert stringmap.rapidity_real(q, 0.58) == 0.0


def test_rapidity_vs_oracle(canon):
    for lam in ("0.3", "0.9", "1.5", "4.0"):
        ref = float(oracles.h_real(lam))
        assert stringmap.rapidity_real(canon, float(lam)) == pytest.approx(ref, rel=1e-13)


def test_real_maps_reject_gap(canon):
    with pytest.raises(DomainError):
        stringmap.rapidity_real(canon, 1.1)
    with pytest.raises(DomainError):
        stringmap.momentum_real(canon, 1.1)


def test_k_prime_positive_and_attraction_signs(canon):
    lo, hi = medium.branch_window(canon, Branch.LOWER)
    lower = np.linspace(lo, hi, 1000)
    lo, hi = medium.branch_window(canon, Branch.UPPER)
    upper = np.linspace(lo, hi, 1000)
    assert np.all(stringmap.momentum_derivative(canon, lower) > 0)
    assert np.all(stringmap.momentum_derivative(canon, upper) > 0)
    assert np.all(stringmap.rapidity_derivative(canon, lower) > 0)
    assert np.all(stringmap.rapidity_derivative(canon, upper) < 0)


def test_real_derivatives_vs_mpmath(canon):
    for lam in ("0.4", "0.95", "1.3", "3.0"):
        dh = float(mp.diff(oracles.h_real, mp.mpf(lam)))
        dk = float(mp.diff(oracles.k_real, mp.mpf(lam)))
        assert stringmap.rapidity_derivative(canon, float(lam)) == pytest.approx(dh, rel=1e-11)
        assert stringmap.momentum_derivative(canon, float(lam)) == pytest.approx(dk, rel=1e-12)


def test_continue_outside_first_order(canon):
    lam, eta = 0.7, 1e-4
    k, h = stringmap.continue_outside(canon, lam, eta)
    assert k == pytest.approx(complex(stringmap.momentum_real(canon, lam),
                                      eta * stringmap.momentum_derivative(canon, lam)))
    assert h.imag == pytest.approx(eta * stringmap.rapidity_derivative(canon, lam))
    with pytest.warns(UserWarning):
        stringmap.continue_outside(canon, 0.5, 0.1)


def test_linearize_canonical(canon):
    lin = stringmap.linearize(canon)
    assert lin.a == pytest.approx(A_CANON, rel=1e-14)
    assert lin.b == pytest.approx(B_CANON, rel=1e-12)
    # the rounded figure quoted alongside the model
    assert lin.a == pytest.approx(0.724, abs=5e-4)
    assert lin.center == 1.1
    assert stringmap.phi(canon, 1.1) == 0.0


def test_valid_radius_is_one_percent_boundary(canon):
    lin = stringmap.linearize(canon)
    r = lin.valid_radius
    assert 1e-4 < r < 1e-2
    for x in (r * 0.999, -r * 0.999, r * 0.5, -r * 0.1):
        ex = stringmap.phi(canon, 1.1 + x)
        assert abs(lin.quadratic(1.1 + x) - ex) / abs(ex) < 0.01
    edge = max(abs(lin.quadratic(1.1 + s * r * 1.01) - stringmap.phi(canon, 1.1 + s * r * 1.01))
               / abs(stringmap.phi(canon, 1.1 + s * r * 1.01)) for s in (1, -1))
    assert edge >= 0.01


def test_linear_model_bound_within_radius(canon):
    lin = stringmap.linearize(canon)
    xs = np.linspace(-lin.valid_radius, lin.valid_radius, 201)
    xs = xs[xs != 0]
    ph = stringmap.phi(canon, 1.1 + xs)
    err = np.abs(ph - lin.a * xs)
    # tolerance term inherited from the 1% definition of the radius
    assert np.all(err <= lin.b * xs * xs + 0.01 * np.abs(ph))


def test_linearize_requires_gap_atom():
    with pytest.raises(RegimeError):
        stringmap.linearize(MediumParams(omega12=0.8))


def test_continue_gap_example(canon):
    k, h = stringmap.continue_gap(canon, 1.099, 1e-4)
    ph = float(oracles.phi("1.099"))
    dph = float(mp.diff(oracles.phi, mp.mpf("1.099")))
    assert h.imag == pytest.approx(-ph, rel=1e-13)
    assert h.real == pytest.approx(1e-4 * dph, rel=1e-10)
    assert k.imag == pytest.approx(float(oracles.kappa("1.099")), rel=1e-14)
    # the linear estimate a (xi - w12) is within 5% this close to w12
    assert -ph == pytest.approx(A_CANON * 1e-3, rel=0.05)


def test_continue_gap_branch_point(canon):
    with pytest.raises(DomainError):
        stringmap.continue_gap(canon, 1.1, 0.0)


def test_gap_maps_match_analytic_function(canon):
    for xi, eta in ((1.05, 1e-3), (1.099, 2e-4), (1.15, 5e-3)):
        w = mp.mpc(xi, eta)
        k, dk, h, dh = stringmap.gap_maps(canon, xi, eta)
        assert complex(h) == pytest.approx(complex(oracles.h_gap(w)), rel=1e-12)
        assert complex(k) == pytest.approx(complex(oracles.k_gap(w)), rel=1e-13)
        assert complex(dh) == pytest.approx(complex(mp.diff(oracles.h_gap, w)), rel=1e-10)
        assert complex(dk) == pytest.approx(complex(mp.diff(oracles.k_gap, w)), rel=1e-11)


def test_gap_maps_agree_with_first_order_form(canon):
    xi, eta = 1.09, 1e-6
    k1, h1 = stringmap.continue_gap(canon, xi, eta)
    k, _, h, _ = stringmap.gap_maps(canon, xi, eta)
    assert abs(h - h1) < 1e-8 * abs(h1)
    assert abs(k - k1) < 1e-8 * abs(k1)


@settings(max_examples=300, deadline=None)
@given(t=st.floats(0.01, 0.99), eta=st.floats(1e-8, 1e-2))
def test_continue_gap_conjugation(t, eta):
    p = MediumParams()
    xi = 1.0 + 0.2 * t
    kp, hp = stringmap.continue_gap(p, xi, eta)
    km, hm = stringmap.continue_gap(p, xi, -eta)
    assert km == kp.conjugate()
    assert hm == hp.conjugate()
    assert kp.imag == medium.kappa(p, xi) > 0


@settings(max_examples=200, deadline=None)
@given(perp=st.floats(0.1, 10.0), ratio=st.floats(1.001, 5.0), t=st.floats(0.01, 0.99))
def test_b_positive_everywhere(perp, ratio, t):
    par = perp * ratio
    p = MediumParams(omega_perp=perp, omega_par=par, omega12=perp + t * (par - perp))
    lin = stringmap.linearize(p)
    assert lin.a > 0
    assert lin.b > 0


@settings(max_examples=100, deadline=None)
@given(t=st.floats(0.02, 0.98))
def test_phi_derivative_vs_finite_difference(t):
    p = MediumParams()
    x = 1.0 + 0.2 * t
    h = 1e-7
    num = (stringmap.phi(p, x + h) - stringmap.phi(p, x - h)) / (2 * h)
    ana = stringmap.phi_prime(p, x)
    assert abs(num - ana) <= 1e-6 * abs(ana)
