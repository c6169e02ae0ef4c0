"""Exact simulation of the conditioned (impatient) collector.

The object being sampled is the reversed chain Z: Z_0 = n, Z_N = 0,
and from state (m, l) = (N - t, Z_t) the chain decrements with
probability r(m, l) = {m-1 l-1}/{m l}.  With the exact backend the
resulting law on completion paths is EXACTLY the uniform-surjection
law conditioned on T_n <= N; no asymptotics are involved.

Randomness: counter-based Philox streams, one sub-stream per
trajectory index (key = base_seed * 2^64 + index).  Batches are
therefore reproducible and independent of chunking or worker count.
"""

import concurrent.futures
import math
from dataclasses import dataclass, field

import numpy as np

from .curve import solve_completion_curve
from .errors import BackendWindowError
from .specialfn import xi_of_lambda
from .stirling import ExactBackend, LogDPBackend

_U64 = (1 << 64) - 1


def _rng(seed, index):
    """Philox generator for one trajectory sub-stream."""
    key = ((int(seed) & _U64) << 64) | (int(index) & _U64)
    return np.random.Generator(np.random.Philox(key=key))


def auto_backend(N, n):
    """Default backend choice: Exact for n <= 300, LogDP for n <= 5000."""
    if n <= 300:
        return ExactBackend()
    if n <= 5000:
        return LogDPBackend()
    raise ValueError("auto_backend: n=%d too large (max 5000 via LogDP)" % n)


@dataclass
class Trajectory:
    """One realization of the reversed chain, with provenance."""
    N: int
    n: int
    seed: int
    z: np.ndarray = field(repr=False)

    @property
    def y(self):
        """Forward completion path: y_l = z[N - l]."""
        return self.z[::-1]

    def validate(self):
        z = self.z
        if len(z) != self.N + 1 or z[0] != self.n or z[-1] != 0:
            raise ValueError("Trajectory: endpoint invariants violated")
        d = np.diff(z)
        if np.any((d != 0) & (d != -1)) or int((d == -1).sum()) != self.n:
            raise ValueError("Trajectory: increments must be 0/-1 with n decrements")
        return self


def conditioned_paths(N, n, trials, backend=None, seed=0, jobs=1, table=None):
    """Sample `trials` reversed-chain paths; returns int32 array (trials, N+1).

    Row i is drawn from sub-stream (seed, i), so any contiguous batch of
    rows is reproducible in isolation and the result is independent of
    jobs and of internal chunk sizes.
    """
    if not (1 <= n <= N):
        raise ValueError("conditioned_paths: need 1 <= n <= N")
    if trials < 1:
        raise ValueError("conditioned_paths: trials must be >= 1")
    if backend is None:
        backend = auto_backend(N, n)
    if not backend.supports_chain(N, n):
        raise BackendWindowError(
            "backend %s does not cover the (N=%d, n=%d) chain" % (backend.kind, N, n))
    rtab = backend.ratio_table(N, n) if table is None else table

    Z = np.empty((trials, N + 1), dtype=np.int32)
    chunk = max(256, min(65536, int(4e6 // (N + 1))))

    def run(start, count):
        # per-trajectory draws land in rows, then one transpose copy so
        # the time loop reads/writes contiguous rows
        U = np.empty((count, N))
        for i in range(count):
            U[i] = _rng(seed, start + i).random(N)
        UT = np.ascontiguousarray(U.T)
        ZT = np.empty((N + 1, count), dtype=np.int32)
        z = np.full(count, n, dtype=np.int32)
        ZT[0] = z
        for t in range(N):
            row = rtab[N - t]
            z = z - (UT[t] < row[z])
            ZT[t + 1] = z
        Z[start:start + count] = ZT.T

    spans = [(s, min(chunk, trials - s)) for s in range(0, trials, chunk)]
    if jobs > 1 and len(spans) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as ex:
            list(ex.map(lambda sp: run(*sp), spans))
    else:
        for sp in spans:
            run(*sp)
    return Z


def sample_conditioned(N, n, backend=None, seed=0):
    """One conditioned trajectory, drawn from sub-stream (seed, 0)."""
    Z = conditioned_paths(N, n, 1, backend=backend, seed=seed)
    return Trajectory(N=N, n=n, seed=int(seed), z=Z[0].copy()).validate()


def sample_patient(n, seed=0):
    """Unconditioned collector run: returns (y_0..y_T, T_n).

    Draws i.i.d. uniform labels until all n have appeared; y_l is the
    number of distinct labels after l draws.
    """
    if n < 1:
        raise ValueError("sample_patient: n must be >= 1")
    rng = _rng(seed, 0)
    seen = np.zeros(n, dtype=bool)
    count = 0
    pieces = []
    block = max(4 * n, 64)
    while count < n:
        w = rng.integers(0, n, size=block)
        uniq, first = np.unique(w, return_index=True)
        fresh = ~seen[uniq]
        inc = np.zeros(block, dtype=np.int64)
        inc[first[fresh]] = 1
        pieces.append(count + np.cumsum(inc))
        seen[uniq[fresh]] = True
        count += int(fresh.sum())
    y = np.concatenate(pieces)
    T = int(np.argmax(y == n)) + 1
    return np.concatenate(([0], y[:T])), T


def _word_paths(W):
    # forward paths y (rows, N+1) from words W (rows, N) over [1..n], n <= 30
    rows, N = W.shape
    Y = np.zeros((rows, N + 1), dtype=np.int32)
    seen = np.zeros(rows, dtype=np.uint64)
    y = np.zeros(rows, dtype=np.int32)
    for t in range(N):
        bit = (np.uint64(1) << (W[:, t] - 1).astype(np.uint64))
        new = (seen & bit) == 0
        y = y + new
        seen |= bit
        Y[:, t + 1] = y
    return Y


def rejection_paths(N, n, count, seed=0, max_attempts=None):
    """Uniform words over [1..n]^N filtered to surjections; reversed paths.

    Returns an int32 array (count, N+1) in the same orientation as
    conditioned_paths.  Independent of the Markov-chain route — this is
    the direct-conditioning oracle.
    """
    if not (1 <= n <= N):
        raise ValueError("rejection_paths: need 1 <= n <= N")
    if n > 30:
        raise ValueError("rejection_paths: n too large for word enumeration")
    if max_attempts is None:
        max_attempts = max(1000 * count, 100000)
    rng = _rng(seed, 0)
    got, attempts = [], 0
    have = 0
    while have < count:
        if attempts >= max_attempts:
            raise RuntimeError(
                "rejection_paths: %d attempts exhausted with %d/%d accepted"
                % (attempts, have, count))
        m = min(8192, max_attempts - attempts)
        W = rng.integers(1, n + 1, size=(m, N))
        attempts += m
        srt = np.sort(W, axis=1)
        surj = (np.count_nonzero(np.diff(srt, axis=1), axis=1) + 1) == n
        acc = W[surj]
        if len(acc):
            got.append(acc[:count - have])
            have += len(got[-1])
    Y = _word_paths(np.concatenate(got))
    return Y[:, ::-1].astype(np.int32)


def rejection_sample(N, n, seed=0, max_attempts=100000):
    """One trajectory by accept-reject on uniform words (small N, n only)."""
    Z = rejection_paths(N, n, 1, seed=seed, max_attempts=max_attempts)
    return Trajectory(N=N, n=n, seed=int(seed), z=Z[0].copy()).validate()


def _check_curve_matches(curve, N, n):
    if N <= n:
        raise ValueError("sup_distance: need N > n (Lambda > 0)")
    nu = (N - n) / n
    if abs(curve.nu - nu) > 1e-9:
        raise ValueError("sup_distance: curve nu=%r but (N-n)/n=%r" % (curve.nu, nu))
    return nu


def _grid_indices(curve, n, N):
    idx = np.floor(n * curve.xs + 1e-9).astype(np.int64)
    return np.clip(idx, 0, N)


def sup_distance(traj, curve):
    """sup over the curve grid of |y_{floor(n x)}/n - zeta(nu, x)|."""
    _check_curve_matches(curve, traj.N, traj.n)
    idx = _grid_indices(curve, traj.n, traj.N)
    vals = traj.z[traj.N - idx] / traj.n
    return float(np.max(np.abs(vals - curve.ys)))


def sup_distances_of(Z, curve, N, n):
    """Vectorized sup_distance for a batch array from conditioned_paths."""
    _check_curve_matches(curve, N, n)
    idx = _grid_indices(curve, n, N)
    vals = Z[:, N - idx] / n
    return np.max(np.abs(vals - curve.ys[None, :]), axis=1)


def sup_distance_batch(N, n, trials, a, seed=0, backend=None, jobs=1, step=1e-3):
    """Monte-Carlo batch of sup-distances against the solved limit curve.

    Returns the batch-statistics dict (JSON-ready): parameters, the
    per-trajectory distances, and quantiles.
    """
    nu = (N - n) / n
    if nu <= 0.0:
        raise ValueError("sup_distance_batch: need N > n")
    curve = solve_completion_curve(nu, a, step=step, richardson_check=False)
    Z = conditioned_paths(N, n, trials, backend=backend, seed=seed, jobs=jobs)
    d = sup_distances_of(Z, curve, N, n)
    qs = np.quantile(d, [0.05, 0.25, 0.5, 0.75, 0.95])
    return {
        "N": int(N), "n": int(n), "nu": nu, "a": float(a),
        "seed": int(seed), "seeds": list(range(trials)),
        "sup_distances": [float(x) for x in d],
        "quantiles": {"q05": float(qs[0]), "q25": float(qs[1]),
                      "q50": float(qs[2]), "q75": float(qs[3]),
                      "q95": float(qs[4])},
    }


def prefix_law(N, n, s, backend=None):
    """Exact law of the first s decrement indicators of the reversed chain.

    Returns (exact, iid, tv): arrays over the 2^s patterns (bit j of the
    index is the step-j indicator) and their total-variation distance.
    The reference law is i.i.d. Bernoulli(rho(Lambda)) per step.
    """
    if not (1 <= n < N):
        raise ValueError("prefix_law: need 1 <= n < N")
    if not (1 <= s <= min(20, N)):
        raise ValueError("prefix_law: need 1 <= s <= min(20, N)")
    if backend is None:
        backend = auto_backend(N, n)
    rtab = backend.ratio_table(N, n)
    rho = math.exp(-xi_of_lambda((N - n) / n))

    size = 1 << s
    exact = np.zeros(size)
    iid = np.zeros(size)
    for patt in range(size):
        l = n
        pr = 1.0
        k = 0
        for j in range(s):
            r = rtab[N - j, l] if l >= 1 else 0.0
            if (patt >> j) & 1:
                pr *= r
                l -= 1
                k += 1
            else:
                pr *= 1.0 - r
        exact[patt] = pr
        iid[patt] = rho ** k * (1.0 - rho) ** (s - k)
    tv = 0.5 * float(np.abs(exact - iid).sum())
    return exact, iid, tv


def trajectory_to_csv(traj, fh):
    """Write `t,z` integer rows for one trajectory."""
    fh.write("t,z\n")
    for t, z in enumerate(traj.z):
        fh.write("%d,%d\n" % (t, int(z)))
