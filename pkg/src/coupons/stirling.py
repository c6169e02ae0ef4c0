"""Stirling numbers of the second kind: exact, log-space, and saddle routes.

{m l} counts partitions of an m-set into l nonempty blocks and obeys

    {m l} = l * {m-1 l} + {m-1 l-1},        {0 0} = 1.

On top of the raw numbers this module evaluates the transition ratio
r(m,l) = {m-1 l-1}/{m l} of the reversed collector chain, the
saddle-point approximation psi (two algebraically equal forms), its
relative error chi, and quadrature diagnostics of the saddle-point
integral representation

    {m l} = (m!/l!) (e^xi - 1)^l xi^{-m} / (2 pi) * Int_{-pi}^{pi} g(theta)^l dtheta.

Three interchangeable evaluation strategies are exposed as backends:
Exact (big integers), LogDP (float64 log-space recurrence), and Saddle
(r approximated by rho(lambda), valid only on a lambda-window).
"""

import math
import struct

import numpy as np
import scipy.integrate

from .errors import BackendWindowError, NumericsError, QuadratureError, ResourceCapError
from .specialfn import g_theta, saddle_params, tail_h, xi_of_lambda

DEFAULT_EXACT_CAP = 5000
_LN2 = math.log(2.0)


def _rows_upto(m, width):
    """Rolling DP: return rows m-1 and m, truncated to columns 0..width."""
    prev = [1]  # row 0: {0 0} = 1
    row = prev
    for mi in range(1, m + 1):
        w = min(mi, width)
        row = [0] * (w + 1)
        for l in range(1, w + 1):
            s = prev[l - 1]
            if l < len(prev):
                s += l * prev[l]
            row[l] = s
        if mi == m:
            return prev, row
        prev = row
    return prev, row  # m == 0: both are row 0


def stirling_exact(m, l, cap=DEFAULT_EXACT_CAP):
    """Exact {m l} as a Python integer, via the two-row rolling recurrence."""
    if m < 0 or l < 0:
        raise ValueError("stirling_exact: negative argument (%r, %r)" % (m, l))
    if l > m:
        return 0  # no partition of m elements has more than m blocks
    if m > cap:
        raise ResourceCapError(
            "stirling_exact: m=%d exceeds cap %d (raise cap= explicitly)" % (m, cap))
    if m == 0:
        return 1
    _, row = _rows_upto(m, l)
    return row[l] if l < len(row) else 0


def _log_big(x):
    # ln of a positive big integer without overflowing float conversion
    if x <= 0:
        raise ValueError("_log_big: nonpositive")
    nb = x.bit_length()
    if nb <= 900:
        return math.log(x)
    sh = nb - 64
    return math.log(x >> sh) + sh * _LN2


def _ratio_to_float(a, b):
    # nearest-double of a/b for big integers, 0 <= a <= b
    if a == 0:
        return 0.0
    s = b.bit_length() - a.bit_length() + 64
    if s < 0:
        s = 0
    q = (a << s) // b
    return math.ldexp(float(q), -s)


class StirlingBackend:
    """Evaluation strategy handle; see ExactBackend, LogDPBackend, SaddleBackend."""

    kind = None

    def ratio(self, m, l):
        raise NotImplementedError

    def ratio_table(self, N, n):
        """Array R of shape (N+1, n+1) with R[m, l] = r(m, l) (0 where undefined)."""
        R = np.zeros((N + 1, n + 1))
        for m in range(1, N + 1):
            for l in range(1, min(m, n) + 1):
                R[m, l] = self.ratio(m, l)
        return R

    def supports_chain(self, N, n):
        """Whether every state reachable by the reversed chain from (N, n) is valid."""
        return True


class ExactBackend(StirlingBackend):
    """Arbitrary-precision backend; r(m,l) is an exact rational rounded once.

    Row caching is opt-in (cache_rows=True) because full tables are
    gigabyte-scale at m ~ 4000; the byte budget is enforced explicitly.
    """

    kind = "Exact"

    def __init__(self, cache_rows=False, max_cache_bytes=1 << 31):
        self.cache_rows = cache_rows
        self.max_cache_bytes = max_cache_bytes
        self._rows = {}
        self._cached_bytes = 0

    def _store_row(self, m, row):
        if not self.cache_rows or m in self._rows:
            return
        nb = sum(x.bit_length() >> 3 for x in row) + 40 * len(row)
        if self._cached_bytes + nb > self.max_cache_bytes:
            raise ResourceCapError(
                "ExactBackend row cache would exceed %d bytes at m=%d"
                % (self.max_cache_bytes, m))
        self._rows[m] = row
        self._cached_bytes += nb

    def ratio(self, m, l):
        if not (1 <= l <= m):
            raise ValueError("ratio: need 1 <= l <= m, got (%r, %r)" % (m, l))
        ra = self._rows.get(m - 1)
        rb = self._rows.get(m)
        if ra is not None and rb is not None and l < len(ra) + 1 and l < len(rb):
            num = ra[l - 1] if l - 1 < len(ra) else 0
            return _ratio_to_float(num, rb[l])
        prev, row = _rows_upto(m, l)
        return _ratio_to_float(prev[l - 1], row[l])

    def ratio_table(self, N, n):
        R = np.zeros((N + 1, n + 1))
        prev = [1]
        self._store_row(0, prev)
        for m in range(1, N + 1):
            w = min(m, n)
            row = [0] * (w + 1)
            for l in range(1, w + 1):
                s = prev[l - 1]
                if l < len(prev):
                    s += l * prev[l]
                row[l] = s
                R[m, l] = _ratio_to_float(prev[l - 1], s)
            self._store_row(m, row)
            prev = row
        return R

    def save_cache(self, path):
        """Serialize cached rows (see save_rows); rows must form a contiguous m-range."""
        if not self._rows:
            raise ValueError("save_cache: row cache is empty")
        ms = sorted(self._rows)
        if ms != list(range(ms[0], ms[-1] + 1)):
            raise ValueError("save_cache: cached m-range is not contiguous")
        save_rows(path, ms[0], [self._rows[m] for m in ms])

    def load_cache(self, path):
        m_start, rows = load_rows(path)
        self.cache_rows = True
        for i, row in enumerate(rows):
            self._store_row(m_start + i, row)


class LogDPBackend(StirlingBackend):
    """float64 log-space recurrence L(m,l) = logaddexp(ln l + L(m-1,l), L(m-1,l-1)).

    Relative accuracy ~1e-12 in log space (tested to 1e-9 against Exact);
    the table is built lazily and regrown on demand.
    """

    kind = "LogDP"

    def __init__(self):
        self._L = None  # shape (M+1, W+1)

    def _build(self, M, W):
        L = np.full((M + 1, W + 1), -np.inf)
        L[0, 0] = 0.0
        lnl = np.log(np.arange(1, W + 1, dtype=float))
        for m in range(1, M + 1):
            w = min(m, W)
            L[m, 1:w + 1] = np.logaddexp(lnl[:w] + L[m - 1, 1:w + 1],
                                         L[m - 1, 0:w])
        self._L = L

    def _ensure(self, m, l):
        if self._L is None or self._L.shape[0] <= m or self._L.shape[1] <= l:
            M = m if self._L is None else max(m, self._L.shape[0] - 1)
            W = l if self._L is None else max(l, self._L.shape[1] - 1)
            self._build(M, W)

    def log_value(self, m, l):
        """ln {m l}; -inf where {m l} = 0."""
        if m < 0 or l < 0 or l > m:
            raise ValueError("log_value: bad arguments (%r, %r)" % (m, l))
        self._ensure(m, l)
        return float(self._L[m, l])

    def ratio(self, m, l):
        if not (1 <= l <= m):
            raise ValueError("ratio: need 1 <= l <= m, got (%r, %r)" % (m, l))
        self._ensure(m, l)
        d = self._L[m - 1, l - 1] - self._L[m, l]
        if not np.isfinite(d):
            return 0.0
        return float(min(1.0, math.exp(d)))

    def ratio_table(self, N, n):
        self._ensure(N, n)
        L = self._L
        R = np.zeros((N + 1, n + 1))
        with np.errstate(invalid="ignore"):
            R[1:, 1:] = np.exp(L[0:N, 0:n] - L[1:N + 1, 1:n + 1])
        np.nan_to_num(R, copy=False, nan=0.0, posinf=0.0)
        np.clip(R, 0.0, 1.0, out=R)
        return R


class SaddleBackend(StirlingBackend):
    """r(m,l) approximated by rho(lambda), valid only for lambda in [delta, 1/delta]."""

    kind = "Saddle"

    def __init__(self, delta=0.1):
        if not (0.0 < delta < 1.0):
            raise ValueError("SaddleBackend: delta must be in (0,1)")
        self.delta = delta

    def _check_window(self, lam):
        if not (self.delta <= lam <= 1.0 / self.delta):
            raise BackendWindowError(
                "lambda=%g outside saddle window [%g, %g]"
                % (lam, self.delta, 1.0 / self.delta))

    def ratio(self, m, l):
        if not (1 <= l <= m):
            raise ValueError("ratio: need 1 <= l <= m, got (%r, %r)" % (m, l))
        lam = (m - l) / l
        self._check_window(lam)
        return math.exp(-xi_of_lambda(lam))

    def supports_chain(self, N, n):
        # reachable envelope: at step t the state is (m, l) = (N-t, l) with
        # l in [max(1, n-t), min(n, m)]; the terminal (1,1) has lambda = 0
        for t in range(N):
            m = N - t
            lo = max(1, n - t)
            hi = min(n, m)
            if lo > hi:
                return False
            for l in (lo, hi):
                lam = (m - l) / l
                if not (self.delta <= lam <= 1.0 / self.delta):
                    return False
        return True

    def ratio_table(self, N, n):
        if not self.supports_chain(N, n):
            raise BackendWindowError(
                "saddle backend cannot cover the (N=%d, n=%d) chain strip" % (N, n))
        return StirlingBackend.ratio_table(self, N, n)


def ratio_r(m, l, backend=None):
    """Transition ratio r(m,l) = {m-1 l-1}/{m l} in [0, 1]."""
    if backend is None:
        backend = ExactBackend()
    return backend.ratio(m, l)


def psi_log_forms(m, l):
    """Both displayed forms of ln psi(m,l); they are algebraically equal.

    Form A:  psi = (1/2pi)(m!/l!)((e^xi-1)/xi^{1+lam})^l sqrt(pi/(v l))
    Form B:  psi = (m!/l!)(e^xi-1)^l xi^{-m} / sqrt(2 pi m (1 - (m/l) e^{-xi}))

    Their equality reduces to m(xi - lam) = 2 l v via (1+lam)e^{-xi} = 1+lam-xi.
    """
    if not (1 <= l < m):
        raise ValueError("psi_log: need 1 <= l < m, got (%r, %r)" % (m, l))
    lam = (m - l) / l
    sp = saddle_params(lam)
    xi, v = sp.xi, sp.v
    lnb = xi + math.log1p(-math.exp(-xi))  # ln(e^xi - 1), overflow-free
    base = math.lgamma(m + 1) - math.lgamma(l + 1)
    form_a = (-math.log(2.0 * math.pi) + base
              + l * (lnb - (1.0 + lam) * math.log(xi))
              + 0.5 * math.log(math.pi / (v * l)))
    form_b = (base + l * lnb - m * math.log(xi)
              - 0.5 * math.log(2.0 * math.pi * m * (1.0 - (m / l) * math.exp(-xi))))
    return form_a, form_b


def psi_log(m, l):
    """ln psi(m,l), with the two displayed forms cross-checked to 1e-9."""
    form_a, form_b = psi_log_forms(m, l)
    if abs(form_a - form_b) > 1e-9 * max(1.0, abs(form_a)):
        raise NumericsError(
            "psi_log forms disagree at (%d, %d): %.17g vs %.17g"
            % (m, l, form_a, form_b))
    return form_a


def chi(m, l, cap=DEFAULT_EXACT_CAP):
    """Relative error chi = ({m l} - psi)/psi, via expm1 of a log difference."""
    s = stirling_exact(m, l, cap=cap)
    return math.expm1(_log_big(s) - psi_log(m, l))


def transition_error(m, l, backend=None):
    """|r(m,l) - rho(lambda)| at lambda = (m-l)/l > 0."""
    if not (1 <= l < m):
        raise ValueError(
            "transition_error: need 1 <= l < m (lambda > 0), got (%r, %r)" % (m, l))
    lam = (m - l) / l
    r = ratio_r(m, l, backend=backend)
    return abs(r - math.exp(-xi_of_lambda(lam)))


def surjection_log_probability(N, n, exact_cap=3000):
    """ln P(T_n <= N) = ln(n! {N n} n^{-N}) for the patient collector.

    Exact big-integer route up to N = exact_cap, log-space DP beyond.
    """
    if not (1 <= n <= N):
        raise ValueError("surjection_log_probability: need 1 <= n <= N")
    if n == 1:
        return 0.0
    if N <= exact_cap:
        lns = _log_big(stirling_exact(N, n, cap=max(N, DEFAULT_EXACT_CAP)))
    else:
        lns = LogDPBackend().log_value(N, n)
    return math.lgamma(n + 1) + lns - N * math.log(n)


def _quad(f, a, b):
    out = scipy.integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-11,
                               limit=300, full_output=1)
    if len(out) > 3:
        val, err = out[0], out[1]
        # quad flagged trouble; accept only if the error estimate is still tiny
        if not (err <= 1e-9 * max(1.0, abs(val))):
            raise QuadratureError("quadrature failed on [%g, %g]: %s" % (a, b, out[-1]))
    return out[0], out[1]


def saddle_diagnostics(lam, l):
    """Magnitudes of the central and tail parts of the saddle integral.

    Splits Int_{-pi}^{pi} g(theta)^l dtheta at theta0 = ln(l)/sqrt(l).  The
    central part must reproduce the Gaussian value sqrt(pi/(v l)) to
    relative error 10/l, and the absolute tail mass must obey the
    2 pi l^{-h(xi) ln l} majorant; both are enforced here.
    """
    lam = float(lam)
    if lam <= 0.0:
        raise ValueError("saddle_diagnostics: lambda must be > 0")
    if l < 10:
        raise ValueError("saddle_diagnostics: need l >= 10")
    sp = saddle_params(lam)
    theta0 = math.log(l) / math.sqrt(l)

    central, _ = _quad(lambda th: 2.0 * (g_theta(lam, th) ** l).real, 0.0, theta0)
    tail, _ = _quad(lambda th: 2.0 * (g_theta(lam, th) ** l).real, theta0, math.pi)
    tail_abs, _ = _quad(lambda th: 2.0 * abs(g_theta(lam, th)) ** l, theta0, math.pi)

    central_ref = math.sqrt(math.pi / (sp.v * l))
    rel = abs(central - central_ref) / central_ref
    if rel > 10.0 / l:
        raise NumericsError(
            "central saddle term off by %g (budget %g) at lambda=%g l=%d"
            % (rel, 10.0 / l, lam, l))
    tail_bound = 2.0 * math.pi * l ** (-tail_h(sp.xi) * math.log(l))
    if tail_abs > tail_bound * (1.0 + 1e-9):
        raise NumericsError(
            "tail mass %g exceeds majorant %g at lambda=%g l=%d"
            % (tail_abs, tail_bound, lam, l))

    m = (1.0 + lam) * l
    lnb = sp.xi + math.log1p(-sp.rho)
    log_prefactor = (math.lgamma(m + 1.0) - math.lgamma(l + 1.0)
                     + l * lnb - m * math.log(sp.xi) - math.log(2.0 * math.pi))
    return {
        "lam": lam, "l": l, "theta0": theta0,
        "central": central, "central_ref": central_ref, "central_rel_err": rel,
        "tail": tail, "tail_abs": tail_abs, "tail_bound": tail_bound,
        "log_prefactor": log_prefactor,
    }


# --- row serialization -------------------------------------------------
#
# Layout: 1 version byte, then little-endian u32 m_start and row count;
# each row is a u32 entry count followed by entries stored as u32 byte
# length + that many little-endian bytes of the nonnegative integer.

_ROW_FORMAT_VERSION = 1


def save_rows(path, m_start, rows):
    """Write consecutive DP rows (rows[i] = row m_start + i) to a binary file."""
    with open(path, "wb") as fh:
        fh.write(bytes([_ROW_FORMAT_VERSION]))
        fh.write(struct.pack("<II", m_start, len(rows)))
        for row in rows:
            fh.write(struct.pack("<I", len(row)))
            for x in row:
                b = int(x).to_bytes((int(x).bit_length() + 7) // 8 or 1, "little")
                fh.write(struct.pack("<I", len(b)))
                fh.write(b)


def load_rows(path):
    """Read rows written by save_rows; returns (m_start, rows)."""
    with open(path, "rb") as fh:
        ver = fh.read(1)
        if len(ver) != 1 or ver[0] != _ROW_FORMAT_VERSION:
            raise ValueError("load_rows: bad version byte in %r" % (path,))
        m_start, nrows = struct.unpack("<II", fh.read(8))
        rows = []
        for _ in range(nrows):
            (cnt,) = struct.unpack("<I", fh.read(4))
            row = []
            for _ in range(cnt):
                (nb,) = struct.unpack("<I", fh.read(4))
                row.append(int.from_bytes(fh.read(nb), "little"))
            rows.append(row)
    return m_start, rows
