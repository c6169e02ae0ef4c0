import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coupons import (NumericsError, f_drift, g_theta, lambert_w0, rate_j,
                     saddle_params, tail_h, xi_of_lambda, xi_via_lambertw)

from oracles import fd_derivatives_123_4, rate_j_reference, xi_bisect

XI_1 = xi_bisect(1.0)  # independent bisection value of xi(1)


# --- lambert_w0 ---------------------------------------------------------

def test_w0_trivial_points():
    assert lambert_w0(0.0) == 0.0
    assert abs(lambert_w0(math.e) - 1.0) <= 1e-14
    assert lambert_w0(-math.exp(-1.0)) == -1.0


def test_w0_domain_error():
    with pytest.raises(ValueError):
        lambert_w0(-math.exp(-1.0) - 1e-10)


def test_w0_branch_point_clamp():
    # within 1e-15 below the branch point is clamped onto it
    assert lambert_w0(-math.exp(-1.0) - 1e-16) == -1.0


@given(st.floats(min_value=-math.exp(-1.0) + 1e-12, max_value=1e6))
def test_w0_defining_residual(z):
    w = lambert_w0(z)
    assert w >= -1.0
    assert abs(w * math.exp(w) - z) <= 1e-13 * max(abs(z), 1e-6)


# --- xi_of_lambda -------------------------------------------------------

def test_xi_zero_exact():
    assert xi_of_lambda(0.0) == 0.0
    assert xi_via_lambertw(0.0) == 0.0


def test_xi_at_one_matches_bisection():
    assert abs(xi_of_lambda(1.0) - XI_1) <= 1e-12 * XI_1


def test_xi_large_lambda_asymptote():
    # xi(20) = 21 - 21 e^{-xi(20)}, so the gap is O(lambda e^-lambda)
    assert abs(xi_of_lambda(20.0) - 21.0) < 21.0 * math.exp(-20.0) * 2.0


def test_xi_negative_rejected():
    with pytest.raises(ValueError):
        xi_of_lambda(-0.1)


def test_xi_dual_route_agreement():
    for lam in np.linspace(0.05, 20.0, 97):
        a = xi_of_lambda(lam)
        b = xi_via_lambertw(lam)
        assert abs(a - b) <= 1e-11 * a


@given(st.floats(min_value=1e-9, max_value=20.0))
def test_xi_bracket_and_identity(lam):
    xi = xi_of_lambda(lam)
    b = 1.0 + lam
    assert lam <= xi * (1.0 + 1e-12)
    assert xi <= min(2.0 * lam, b) * (1.0 + 1e-12)
    # residual of the defining equation
    assert abs(xi - b * (1.0 - math.exp(-xi))) <= 1e-12 * (1.0 + xi)
    # rearranged identity e^-xi (1+lam) = 1 + lam - xi
    assert abs(math.exp(-xi) * b - (b - xi)) <= 1e-11 * b


@given(st.tuples(st.floats(min_value=1e-6, max_value=20.0),
                 st.floats(min_value=1e-6, max_value=20.0)))
def test_xi_strictly_monotone(pair):
    l1, l2 = sorted(pair)
    if l2 - l1 < 1e-9:
        return
    x1, x2 = xi_of_lambda(l1), xi_of_lambda(l2)
    assert x1 < x2
    assert x1 - l1 < x2 - l2  # xi - lambda is increasing too


def test_xi_concave_on_grid():
    grid = np.linspace(0.05, 10.0, 400)
    vals = np.array([xi_of_lambda(l) for l in grid])
    second = np.diff(vals, 2)
    assert np.all(second <= 1e-10)


# --- f_drift ------------------------------------------------------------

def test_f_drift_examples():
    assert f_drift(0.0) == 1.0
    assert abs(f_drift(1.0) - math.exp(-XI_1)) <= 1e-14
    with pytest.raises(ValueError):
        f_drift(-1e-9)


def test_f_drift_decreasing_and_below_reciprocal():
    grid = np.linspace(0.1, 10.0, 100)
    vals = np.array([f_drift(x) for x in grid])
    assert np.all(np.diff(vals) < 0.0)
    assert np.all(vals < 1.0 / (1.0 + grid))
    for x in grid[::7]:
        assert abs(f_drift(x) - math.exp(-xi_of_lambda(x))) <= 1e-12


# --- saddle_params ------------------------------------------------------

def test_saddle_params_lambda_one():
    sp = saddle_params(1.0)
    assert abs(sp.v - (2.0 * (XI_1 - 1.0) / 2.0)) <= 1e-12
    assert 1.0 <= 2.0 * sp.v <= 2.0
    assert sp.gamma_tilde == sp.gamma - sp.v ** 2 / 2.0


def test_saddle_params_domain():
    with pytest.raises(ValueError):
        saddle_params(0.0)
    with pytest.raises(ValueError):
        saddle_params(-1.0)


@given(st.floats(min_value=1e-4, max_value=20.0))
def test_saddle_params_coefficient_bounds(lam):
    sp = saddle_params(lam)
    b = 1.0 + lam
    assert lam <= 2.0 * sp.v * (1.0 + 1e-10)
    assert 2.0 * sp.v <= b * (1.0 + 1e-10)
    assert 0.0 < sp.rho < 1.0 / b
    assert abs(sp.tau) <= b ** 3
    assert abs(sp.gamma) <= (7.0 / 24.0) * b ** 4
    assert abs(sp.gamma_tilde) <= (13.0 / 24.0) * b ** 4


# --- rate_j -------------------------------------------------------------

def _rate_j_original(xi):
    lnb = math.log(math.expm1(xi))
    return (xi / (1.0 - math.exp(-xi))) * (1.0 - xi + lnb) - lnb


def test_rate_j_against_high_precision():
    assert abs(rate_j(XI_1) - rate_j_reference(XI_1)) <= 1e-10
    assert abs(_rate_j_original(XI_1) - rate_j_reference(XI_1)) <= 1e-10


def test_rate_j_two_forms_agree():
    for xi in np.linspace(0.05, 30.0, 121):
        a = rate_j(xi)
        b = _rate_j_original(xi)
        assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


def test_rate_j_decreasing_positive_vanishing():
    assert rate_j(1.0) > rate_j(2.0) > rate_j(4.0) > 0.0
    assert 0.0 < rate_j(30.0) < 30.0 * math.exp(-30.0) * 2.0
    with pytest.raises(ValueError):
        rate_j(0.0)


# --- tail_h -------------------------------------------------------------

def test_tail_h_values():
    want = 2.0 / (3.0 * (math.e - 1.0)) / math.pi ** 2
    assert abs(tail_h(1.0) - want) <= 1e-15
    assert tail_h(1e-6) < 2e-7
    for x in np.linspace(0.1, 10.0, 50):
        assert tail_h(x) > 0.0
    with pytest.raises(ValueError):
        tail_h(0.0)


# --- g_theta ------------------------------------------------------------

def test_g_at_zero_is_one():
    for lam in (0.3, 1.0, 4.0):
        assert g_theta(lam, 0.0) == 1.0 + 0.0j


def test_g_domain_errors():
    with pytest.raises(ValueError):
        g_theta(0.0, 0.1)
    with pytest.raises(ValueError):
        g_theta(1.0, 3.2)


def test_g_array_matches_scalar():
    th = np.linspace(-3.0, 3.0, 11)
    arr = g_theta(1.0, th)
    for t, v in zip(th, arr):
        assert abs(v - g_theta(1.0, float(t))) <= 1e-15


def test_g_modulus_bound_lambda_one():
    # |g(theta)| <= exp(-h(xi) theta^2) on a 1000-point grid
    xi = xi_of_lambda(1.0)
    h = tail_h(xi)
    th = np.linspace(-math.pi, math.pi, 1000)
    mod = np.abs(g_theta(1.0, th))
    assert np.all(mod <= 1.0 + 1e-12)
    assert np.all(mod <= np.exp(-h * th ** 2) + 1e-12)


def test_g_taylor_remainder_both_constants():
    # |g - (1 - v t^2 + i tau t^3 + gamma t^4)| <= T |t|^5 for |t| <= 0.1,
    # with the sharp constant 46(1+lam)^6/(120 lam); the weaker
    # (1+lam)^6/(2 lam) stated alongside it is implied a fortiori.  Below
    # |t| ~ 1e-3 the true remainder drops under the double-precision noise
    # of evaluating g (~1e-16, since |g| ~ 1), so the comparison carries a
    # machine-epsilon floor.
    eps = 1e-14
    th = np.concatenate([-np.logspace(-4, -1, 40), np.logspace(-4, -1, 40)])
    for lam in (0.1, 0.5, 1.0, 2.0, 5.0):
        sp = saddle_params(lam)
        poly = (1.0 - sp.v * th ** 2 + 1j * sp.tau * th ** 3 + sp.gamma * th ** 4)
        rem = np.abs(g_theta(lam, th) - poly)
        t_sharp = 46.0 * (1.0 + lam) ** 6 / (120.0 * lam)
        t_weak = (1.0 + lam) ** 6 / (2.0 * lam)
        assert np.all(rem <= t_sharp * np.abs(th) ** 5 + eps)
        assert np.all(rem <= t_weak * np.abs(th) ** 5 + eps)


def test_g_finite_difference_derivatives():
    for lam in (0.5, 1.0, 2.0):
        sp = saddle_params(lam)
        d2, d3, d4 = fd_derivatives_123_4(lambda t: g_theta(lam, t))
        assert abs(d2 - (-2.0 * sp.v)) <= 1e-5 * 2.0 * sp.v
        assert abs(d3 - 6.0j * sp.tau) <= 1e-5 * 6.0 * abs(sp.tau)
        assert abs(d4 - 24.0 * sp.gamma) <= 1e-5 * 24.0 * abs(sp.gamma)
