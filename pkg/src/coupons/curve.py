"""Limiting completion curves of the collector.

The patient limit is zeta_inf(t) = 1 - e^{-t}.  The impatient limit
zeta(nu, .) solves the backwards Cauchy problem

    y'(x) = F((x - y)/y),        y(1 + nu) = 1,

integrated from the anchor (1+nu, 1) down to x = a > 0 (the corner
(0,0) is singular and excluded).  F = exp(-xi(.)) is the same drift
that rules the reversed chain.  The solution is trapped in the
envelope

    x / (1 + x (1/y0 - 1/x0))  <=  y(x)  <=  x (1 - (x/x0)(1 - y0/x0))

with (x0, y0) = (1+nu, 1), which the solver enforces at every grid
point (a breach signals an integrator bug, not a math fact).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericsError
from .specialfn import f_drift

_RICHARDSON_TOL = 1e-8


def patient_curve(t):
    """zeta_inf(t) = 1 - e^{-t} for t >= 0; accepts scalars or arrays."""
    if np.ndim(t) == 0:
        t = float(t)
        if t < 0.0:
            raise ValueError("patient_curve: negative time %r" % t)
        return -math.expm1(-t)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("patient_curve: negative time in array")
    return -np.expm1(-t)


def envelope(nu, x):
    """Lower and upper analytic bounds for zeta(nu, x), anchored at (1+nu, 1)."""
    x0 = 1.0 + nu
    c = 1.0 - 1.0 / x0          # 1/y0 - 1/x0 with y0 = 1
    lo = x / (1.0 + x * c)
    hi = x * (1.0 - (x / x0) * c)
    return lo, hi


@dataclass
class Curve:
    """Solved completion curve; xs descend from 1+nu to a."""
    nu: float
    a: float
    step: float
    xs: np.ndarray = field(repr=False)
    ys: np.ndarray = field(repr=False)

    @property
    def points(self):
        return list(zip(self.xs.tolist(), self.ys.tolist()))

    def y_at(self, x):
        """Linear interpolation of y on the solved grid."""
        x = float(x)
        if x < self.a - 1e-12 or x > 1.0 + self.nu + 1e-12:
            raise ValueError("y_at: x=%r outside [%r, %r]" % (x, self.a, 1.0 + self.nu))
        # np.interp wants ascending abscissae
        return float(np.interp(x, self.xs[::-1], self.ys[::-1]))


def _slope(x, y):
    lam = (x - y) / y
    if lam < 0.0:
        # roundoff can push x slightly below y right at the anchor
        if lam < -1e-12:
            raise NumericsError("curve solver left the region y <= x")
        lam = 0.0
    return f_drift(lam)


def _rk4_path(nu, a, step):
    x0 = 1.0 + nu
    nsteps = max(1, int(math.ceil((x0 - a) / step - 1e-12)))
    xs = np.empty(nsteps + 1)
    ys = np.empty(nsteps + 1)
    xs[0], ys[0] = x0, 1.0
    y = 1.0
    for i in range(nsteps):
        x = x0 - i * step
        h = min(step, x - a)  # last step lands exactly on a
        k1 = _slope(x, y)
        k2 = _slope(x - 0.5 * h, y - 0.5 * h * k1)
        k3 = _slope(x - 0.5 * h, y - 0.5 * h * k2)
        k4 = _slope(x - h, y - h * k3)
        y = y - (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        xs[i + 1] = x - h
        ys[i + 1] = y
    xs[-1] = a
    return xs, ys


def solve_completion_curve(nu, a, step=1e-3, richardson_check=True):
    """Integrate the Cauchy problem backwards from (1+nu, 1) down to a.

    Classic fixed-step RK4 (bit-reproducible across runs); when
    richardson_check is set the solve is repeated at step/2 and the two
    grids must agree to 1e-8 at shared points.
    """
    nu = float(nu)
    a = float(a)
    step = float(step)
    if nu <= 0.0:
        raise ValueError("solve_completion_curve: nu must be > 0")
    if not (0.0 < a < 1.0 + nu):
        raise ValueError("solve_completion_curve: need 0 < a < 1 + nu")
    if not (0.0 < step <= 1e-1):
        raise ValueError("solve_completion_curve: step must be in (0, 0.1]")

    xs, ys = _rk4_path(nu, a, step)

    lo, hi = envelope(nu, xs)
    if np.any(ys < lo - 1e-9) or np.any(ys > hi + 1e-9):
        raise NumericsError("solver output breached the analytic envelope")
    if np.any(ys <= 0.0) or np.any(ys[1:] > xs[1:]):
        raise NumericsError("solver output left the region 0 < y <= x")
    if np.any(np.diff(ys) > 0.0):  # xs descend, so ys must too
        raise NumericsError("solver output is not monotone in x")

    if richardson_check:
        xs2, ys2 = _rk4_path(nu, a, 0.5 * step)
        # coarse grid points sit at even indices of the half-step grid
        shared = min(len(xs) - 1, (len(xs2) - 1) // 2)
        dev = np.max(np.abs(ys[:shared] - ys2[:2 * shared:2]))
        dev = max(dev, abs(ys[-1] - ys2[-1]))
        if dev > _RICHARDSON_TOL:
            raise NumericsError(
                "half-step Richardson deviation %g exceeds %g" % (dev, _RICHARDSON_TOL))

    return Curve(nu=nu, a=a, step=step, xs=xs, ys=ys)


def lambda_along(curve, x):
    """lambda(x) = x/zeta(x) - 1 along a solved curve."""
    y = curve.y_at(x)
    return x / y - 1.0


def strip_clearance(k, eps, step=1e-3):
    """Check y(x) - eps >= x/k on the window [2 k eps, k - 2 k^2 eps].

    k >= 2 is the automaton alphabet size; the curve is the one for
    nu = k - 1.  Returns True when the strip stays clear (it must, for
    eps <= 1/(2(k+1))).
    """
    k = int(k)
    if k < 2:
        raise ValueError("strip_clearance: need k >= 2")
    eps = float(eps)
    if not (0.0 < eps <= 1.0 / (2.0 * (k + 1))):
        raise ValueError("strip_clearance: need 0 < eps <= 1/(2(k+1)) = %g"
                         % (1.0 / (2.0 * (k + 1))))
    x_lo = 2.0 * k * eps
    x_hi = k - 2.0 * k * k * eps
    if x_hi < x_lo:
        raise ValueError("strip_clearance: empty window for k=%d eps=%g" % (k, eps))
    curve = solve_completion_curve(k - 1.0, min(x_lo, x_hi) * 0.999, step=step,
                                   richardson_check=False)
    grid = np.linspace(x_lo, x_hi, max(2, int((x_hi - x_lo) / step) + 1))
    for x in grid:
        if curve.y_at(x) - eps < x / k:
            return False
    return True


def curve_to_csv(curve, fh):
    """Write `x,y,lambda` rows at 17 significant digits to an open text file."""
    fh.write("x,y,lambda\n")
    for x, y in zip(curve.xs, curve.ys):
        fh.write("%.17g,%.17g,%.17g\n" % (x, y, x / y - 1.0))
