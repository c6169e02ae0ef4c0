"""Scalar special functions for the conditioned coupon collector.

Everything here revolves around the implicit equation

    xi = (1 + lam) * (1 - exp(-xi)),          xi(0) = 0,

whose unique positive root xi(lam) is the saddle point governing the
Stirling numbers {(1+lam)l, l}.  Derived quantities:

    rho = exp(-xi)            limiting decrement probability, also the
                              ODE drift F,
    v   = (1+lam)(xi-lam)/2   half the variance of the tilted step law,
    J   = large-deviation rate of P(T_n <= (1+lam) n),
    h   = tail-majorant exponent used by the saddle diagnostics,
    g   = normalized characteristic factor whose l-th power is
          integrated in the saddle-point representation.

All functions are pure; there is no module state.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericsError

_BRANCH_POINT = -math.exp(-1.0)  # -1/e, domain edge of the W0 branch

# The closed-form route xi = 1+lam+W0(-(1+lam)e^(-1-lam)) hits the W0
# branch point as lam -> 0 and loses ~half the significant digits to
# the square-root singularity; the Newton/W0 cross-check is therefore
# only enforced above this threshold.
_XI_CROSSCHECK_MIN_LAMBDA = 0.05
_XI_CROSSCHECK_RTOL = 1e-11


def lambert_w0(z):
    """Principal branch W0 of the Lambert W function, real arguments.

    Solves w * exp(w) = z for z >= -1/e by Halley iteration.  Arguments
    up to 1e-15 below the branch point are clamped onto it; anything
    lower raises ValueError.
    """
    z = float(z)
    if z < _BRANCH_POINT - 1e-15:
        raise ValueError("lambert_w0: argument %r below branch point -1/e" % z)
    if z <= _BRANCH_POINT:
        return -1.0
    if z == 0.0:
        return 0.0

    # initial guess: series in p = sqrt(2(e z + 1)) near the branch
    # point, log asymptote for large z, identity-ish guess in between
    q = math.e * z + 1.0
    if q < 0.36:
        p = math.sqrt(2.0 * q)
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)))
    elif z < math.e:
        w = z / (1.0 + z)
    else:
        l1 = math.log(z)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1

    tol = 1e-15 * max(abs(z), 1e-290)
    for _ in range(50):
        ew = math.exp(w)
        f = w * ew - z
        if abs(f) <= tol:
            return w
        w1 = w + 1.0
        # Halley step: f / (e^w (w+1) - (w+2) f / (2w+2))
        denom = ew * w1 - (w + 2.0) * f / (2.0 * w1)
        step = f / denom
        w -= step
        if w < -1.0:
            w = -1.0 + 0.25 * (w + step + 1.0)  # keep inside the branch
        if abs(step) <= 1e-16 * (1.0 + abs(w)):
            ew = math.exp(w)
            if abs(w * ew - z) <= tol:
                return w
    ew = math.exp(w)
    if abs(w * ew - z) <= 1e-13 * max(abs(z), 1e-290):
        return w
    raise NumericsError("lambert_w0 did not converge for z=%r" % z)


def _xi_newton(lam):
    # safeguarded Newton on phi(x) = x - (1+lam)(1 - e^-x), bracketed by
    # lam <= xi <= min(2 lam, 1+lam)
    c = 1.0 + lam
    lo = lam
    hi = min(2.0 * lam, c)
    x = 0.5 * (lo + hi)
    for _ in range(100):
        ex = math.exp(-x)
        phi = x - c * (1.0 - ex)
        if phi > 0.0:
            hi = x
        else:
            lo = x
        dphi = 1.0 - c * ex
        if dphi > 0.0:
            xn = x - phi / dphi
        else:
            xn = 0.5 * (lo + hi)
        if not (lo <= xn <= hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 1e-16 * x:
            return xn
        x = xn
    return x


def xi_via_lambertw(lam):
    """Closed form xi = 1 + lam + W0(-(1+lam) e^(-1-lam)).

    Independent of the Newton route; used as its cross-check.  Loses
    precision for small lam (branch-point square root), see
    _XI_CROSSCHECK_MIN_LAMBDA.
    """
    lam = float(lam)
    if lam < 0.0:
        raise ValueError("xi_via_lambertw: negative lambda %r" % lam)
    if lam == 0.0:
        return 0.0
    return 1.0 + lam + lambert_w0(-(1.0 + lam) * math.exp(-1.0 - lam))


def xi_of_lambda(lam):
    """Unique positive root of xi = (1+lam)(1-e^-xi); xi(0) = 0.

    Safeguarded Newton on the bracket [lam, min(2 lam, 1+lam)], then
    cross-checked against the Lambert-W closed form (a branch mistake
    in either route would trip the check).
    """
    lam = float(lam)
    if lam < 0.0:
        raise ValueError("xi_of_lambda: negative lambda %r" % lam)
    if lam == 0.0:
        return 0.0
    xi = _xi_newton(lam)
    if lam >= _XI_CROSSCHECK_MIN_LAMBDA:
        xi_w = xi_via_lambertw(lam)
        if abs(xi_w - xi) > _XI_CROSSCHECK_RTOL * xi:
            raise NumericsError(
                "xi routes disagree at lambda=%r: newton=%.17g lambertw=%.17g"
                % (lam, xi, xi_w))
    return xi


def f_drift(x):
    """F(x) = exp(-xi(x)) = rho(x), the ODE drift; decreasing, F(0)=1."""
    x = float(x)
    if x < 0.0:
        raise ValueError("f_drift: negative argument %r" % x)
    if x == 0.0:
        return 1.0
    return math.exp(-xi_of_lambda(x))


@dataclass(frozen=True)
class SaddleParams:
    """Saddle-point bundle at ratio lam = (m-l)/l.

    tau is the signed real coefficient t in the cubic Taylor term
    t*(i theta^3) of g, i.e. g'''(0) = 6*tau*i; gamma is the real
    theta^4 coefficient, g''''(0) = 24*gamma.
    """
    lam: float
    xi: float
    rho: float
    v: float
    tau: float
    gamma: float
    gamma_tilde: float

    def validate(self, rtol=1e-9):
        b = 1.0 + self.lam
        if not (abs(self.xi - b * (1.0 - math.exp(-self.xi)))
                <= 1e-12 * (1.0 + self.xi)):
            raise NumericsError("SaddleParams: xi residual too large")
        if not (self.lam <= self.xi * (1 + rtol)
                and self.xi <= min(2.0 * self.lam, b) * (1 + rtol)):
            raise NumericsError("SaddleParams: xi outside [lam, min(2lam,1+lam)]")
        if not (0.0 < self.rho < 1.0 / b):
            raise NumericsError("SaddleParams: rho outside (0, 1/(1+lam))")
        if not (self.lam <= 2.0 * self.v * (1 + rtol)
                and 2.0 * self.v <= b * (1 + rtol)):
            raise NumericsError("SaddleParams: v outside [lam/2, (1+lam)/2]")
        if abs(self.tau) > b ** 3 or abs(self.gamma) > (7.0 / 24.0) * b ** 4 \
                or abs(self.gamma_tilde) > (13.0 / 24.0) * b ** 4:
            raise NumericsError("SaddleParams: coefficient bound violated")
        return self


def saddle_params(lam):
    """All saddle quantities at ratio lam > 0.

    v, tau, gamma are (up to factorials and powers of i) the 2nd/3rd/4th
    derivatives of g at 0, equal to the central moments of the
    zero-truncated Poisson(xi) step shifted by its mean 1+lam:

        g''(0)   = -2 v      = -mu_2,
        g'''(0)  =  6 tau i,   tau = -mu_3 / 6,
        g''''(0) = 24 gamma,   gamma = mu_4 / 24.

    Note: the source presentation of the cubic/quartic coefficients
    carries typos (a sign and two polynomial coefficients); the values
    below are the ones finite differences of g actually reproduce.
    """
    lam = float(lam)
    if lam <= 0.0:
        raise ValueError("saddle_params: lambda must be > 0, got %r" % lam)
    xi = xi_of_lambda(lam)
    b = 1.0 + lam
    rho = math.exp(-xi)
    v = b * (xi - lam) / 2.0
    mu3 = b * (xi * xi - 3.0 * lam * xi + lam * (1.0 + 2.0 * lam))
    mu4 = b * (xi ** 3 + (2.0 - 4.0 * lam) * xi ** 2
               + (1.0 + 6.0 * lam * lam) * xi
               - lam * (3.0 * lam * lam + 3.0 * lam + 1.0))
    tau = -mu3 / 6.0
    gamma = mu4 / 24.0
    return SaddleParams(lam=lam, xi=xi, rho=rho, v=v, tau=tau, gamma=gamma,
                        gamma_tilde=gamma - v * v / 2.0).validate()


def rate_j(xi):
    """Large-deviation rate J(xi) of P(T_n <= (1+lam) n), xi = xi(lam).

    Stable rewriting of
        J = (xi/(1-e^-xi)) (1 - xi + ln(e^xi - 1)) - ln(e^xi - 1):
    multiply through by (1-e^-xi) and regroup,
        (1-e^-xi) J = (xi - 1 + e^-xi) ln(1-e^-xi) + xi e^-xi,
    which avoids the e^xi overflow and the large-xi cancellation.
    """
    xi = float(xi)
    if xi <= 0.0:
        raise ValueError("rate_j: xi must be > 0, got %r" % xi)
    ex = math.exp(-xi)
    one_minus = -math.expm1(-xi)  # 1 - e^-xi, exact for tiny xi
    return ((xi - 1.0 + ex) * math.log(one_minus) + xi * ex) / one_minus


def tail_h(x):
    """h(x) = (1/pi^2) * 2 x^2 / ((2+x)(e^x - 1)); tail exponent of |g|."""
    x = float(x)
    if x <= 0.0:
        raise ValueError("tail_h: argument must be > 0, got %r" % x)
    return 2.0 * x * x / ((2.0 + x) * math.expm1(x) * math.pi ** 2)


def g_theta(lam, theta):
    """g(theta) = e^{-i(1+lam)theta} (Phi(theta) - rho)/(1 - rho).

    Phi is the characteristic function of Poisson(xi); g is that of the
    zero-truncated Poisson recentered at its mean 1+lam.  Accepts a
    scalar or ndarray theta in [-pi, pi]; |g| <= 1 and g(0) = 1.
    """
    lam = float(lam)
    if lam <= 0.0:
        raise ValueError("g_theta: lambda must be > 0, got %r" % lam)
    xi = xi_of_lambda(lam)
    rho = math.exp(-xi)
    if np.ndim(theta) == 0:
        th = float(theta)
        if abs(th) > math.pi + 1e-12:
            raise ValueError("g_theta: |theta| > pi")
        phi = cmath.exp(xi * (cmath.exp(1j * th) - 1.0))
        return cmath.exp(-1j * (1.0 + lam) * th) * (phi - rho) / (1.0 - rho)
    th = np.asarray(theta, dtype=float)
    if np.any(np.abs(th) > math.pi + 1e-12):
        raise ValueError("g_theta: |theta| > pi")
    phi = np.exp(xi * (np.exp(1j * th) - 1.0))
    return np.exp(-1j * (1.0 + lam) * th) * (phi - rho) / (1.0 - rho)
