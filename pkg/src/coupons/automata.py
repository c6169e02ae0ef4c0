"""Random accessible automata via the conditioned collector.

A complete deterministic transition structure on n states over a
k-letter alphabet, taken uniformly among the surjective ones, is
encoded by a uniform surjection word of length N = kn+1 (one column
for the initial edge, then the k out-edges of each state in BFS
order).  The structure is accessible iff the completion path of the
word satisfies the k-Dyck condition

    y_{l k + 1} >= l + 1        for every l in [0, n-1],

and the limiting probability of that event is Korshunov's constant
1 - k rho(k), where rho(k) = exp(-xi(k-1)).  The same number falls
out of the Pollaczek-Khinchine identity for the negative-drift walk
with step law (1-rho) delta_{-1} + rho delta_{k-1}.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.stats

from .errors import NumericsError, ResourceCapError
from .sampler import _rng, auto_backend, conditioned_paths
from .specialfn import xi_of_lambda
from .stirling import stirling_exact


def _as_path(y):
    """Normalize a completion path to 1-based values y_1..y_N."""
    y = np.asarray(y, dtype=np.int64)
    if y.ndim != 1 or len(y) == 0:
        raise ValueError("completion path must be a 1-d sequence")
    if y[0] == 0:
        y = y[1:]
    return y


def dyck_check(y, k):
    """True iff y_{l k + 1} >= l + 1 for all l in [0, n-1]."""
    k = int(k)
    if k < 1:
        raise ValueError("dyck_check: k must be >= 1")
    y = _as_path(y)
    N = len(y)
    n = int(y[-1])
    if N != k * n + 1:
        raise ValueError("dyck_check: path length %d != k*n+1 = %d" % (N, k * n + 1))
    levels = np.arange(n)
    return bool(np.all(y[levels * k] >= levels + 1))  # y[i-1] is y_i


@dataclass
class BoxedDiagram:
    """Completion path plus one mark x_i <= y_i per column."""
    k: int
    n: int
    y: np.ndarray = field(repr=False)      # y_1..y_N
    marks: np.ndarray = field(repr=False)  # x_1..x_N

    @property
    def N(self):
        return self.k * self.n + 1

    @property
    def dyck(self):
        return dyck_check(self.y, self.k)

    def validate(self):
        y = _as_path(self.y)
        x = np.asarray(self.marks, dtype=np.int64)
        if len(y) != self.N or len(x) != self.N or y[-1] != self.n:
            raise ValueError("BoxedDiagram: shape mismatch")
        d = np.diff(np.concatenate(([0], y)))
        if np.any((d != 0) & (d != 1)):
            raise ValueError("BoxedDiagram: path must have unit increments")
        if np.any(x < 1) or np.any(x > y):
            raise ValueError("BoxedDiagram: marks must satisfy 1 <= x_i <= y_i")
        # the mark at the column where level l is first reached must be l
        firsts = np.nonzero(d == 1)[0]
        if np.any(x[firsts] != y[firsts]):
            raise ValueError("BoxedDiagram: first-reach marks must equal the level")
        return self


def surjection_to_diagram(word, n):
    """Canonical boxed diagram of a surjective word: relabel by first appearance.

    Returns (y, marks), both 1-based arrays of length N = len(word).
    """
    word = np.asarray(word, dtype=np.int64)
    if word.ndim != 1 or np.any(word < 1) or np.any(word > n):
        raise ValueError("surjection_to_diagram: word must take values in [1..n]")
    if len(np.unique(word)) != n:
        raise ValueError("surjection_to_diagram: word is not surjective onto [1..n]")
    relabel = np.zeros(n + 1, dtype=np.int64)
    y = np.empty(len(word), dtype=np.int64)
    marks = np.empty(len(word), dtype=np.int64)
    seen = 0
    for i, w in enumerate(word):
        if relabel[w] == 0:
            seen += 1
            relabel[w] = seen
        y[i] = seen
        marks[i] = relabel[w]
    return y, marks


def structure_from_diagram(marks, k, n):
    """Rebuild the transition structure encoded by a boxed diagram.

    Column 1 is the initial edge; columns (l-1)k+2 .. lk+1 are state l's
    out-edges in alphabet order.  Returns (initial_state, delta) with
    delta[l, c] = target of letter c+1 from state l (row 0 unused).
    """
    marks = np.asarray(marks, dtype=np.int64)
    if len(marks) != k * n + 1:
        raise ValueError("structure_from_diagram: need k*n+1 marks")
    initial = int(marks[0])
    delta = np.zeros((n + 1, k), dtype=np.int64)
    for l in range(1, n + 1):
        delta[l] = marks[(l - 1) * k + 1: l * k + 1]
    return initial, delta


def bfs_accessible(marks, k, n):
    """Graph-search oracle: is every state reachable from the initial one?"""
    initial, delta = structure_from_diagram(marks, k, n)
    seen = np.zeros(n + 1, dtype=bool)
    stack = [initial]
    seen[initial] = True
    count = 1
    while stack:
        s = stack.pop()
        for t in delta[s]:
            if not seen[t]:
                seen[t] = True
                count += 1
                stack.append(int(t))
    return count == n


def _dyck_flags(Z, k, n):
    # vectorized dyck_check over a batch of reversed paths (rows of Z)
    Y = Z[:, ::-1]  # forward paths with leading 0: Y[:, i] = y_i
    levels = np.arange(n)
    cols = levels * k + 1
    return np.all(Y[:, cols] >= levels + 1, axis=1)


def estimate_accessibility(k, n, trials, seed=0, backend=None, jobs=1):
    """Monte-Carlo accessibility frequency among surjective structures.

    Draws conditioned completion paths at N = kn+1 and applies the Dyck
    test; returns (estimate, stderr) with the normal-approximation
    binomial standard error.
    """
    k = int(k)
    n = int(n)
    if k < 2 or n < 2:
        raise ValueError("estimate_accessibility: need k >= 2 and n >= 2")
    if trials < 1:
        raise ValueError("estimate_accessibility: trials must be >= 1")
    N = k * n + 1
    if backend is None:
        backend = auto_backend(N, n)
    Z = conditioned_paths(N, n, trials, backend=backend, seed=seed, jobs=jobs)
    hits = int(_dyck_flags(Z, k, n).sum())
    est = hits / trials
    return est, math.sqrt(max(est * (1.0 - est), 1e-300) / trials)


def korshunov_constant(k):
    """Limiting accessible fraction 1 - k exp(-xi(k-1)) among surjective ones."""
    k = int(k)
    if k < 2:
        raise ValueError("korshunov_constant: need k >= 2")
    return 1.0 - k * math.exp(-xi_of_lambda(k - 1.0))


def pollaczek_crossing(k):
    """Stationary-queue route to the same constant.

    For the walk with steps -1 (prob 1-rho) and k-1 (prob rho),
    rho = rho(k), the no-crossing probability is (1-rho) pi0 with
    pi0 = -drift/(1-rho).  Returns (pi0, non_crossing).
    """
    k = int(k)
    if k < 2:
        raise ValueError("pollaczek_crossing: need k >= 2")
    rho = math.exp(-xi_of_lambda(k - 1.0))
    d = k * rho - 1.0
    pi0 = -d / (1.0 - rho)
    non_crossing = (1.0 - rho) * pi0
    if abs(non_crossing - korshunov_constant(k)) > 1e-12:
        raise NumericsError("pollaczek route disagrees with the direct constant")
    return pi0, non_crossing


def simulate_walk_max(k, runs, horizon=500, seed=0):
    """Empirical P(max of the mu_k walk over `horizon` steps is <= 0).

    Oracle for pi0: the walk has negative drift, so the finite horizon
    truncation bias is exponentially small in the horizon.
    """
    k = int(k)
    if k < 2:
        raise ValueError("simulate_walk_max: need k >= 2")
    if runs < 1 or horizon < 1:
        raise ValueError("simulate_walk_max: runs and horizon must be >= 1")
    rho = math.exp(-xi_of_lambda(k - 1.0))
    rng = _rng(seed, 0)
    hits = 0
    done = 0
    while done < runs:
        m = min(20000, runs - done)
        u = rng.random((m, horizon))
        steps = np.where(u < rho, np.int32(k - 1), np.int32(-1))
        smax = np.cumsum(steps, axis=1, dtype=np.int32).max(axis=1)
        hits += int((smax <= 0).sum())
        done += m
    est = hits / runs
    return est, math.sqrt(max(est * (1.0 - est), 1e-300) / runs)


def exact_accessible_count(k, n):
    """Enumerate all n^(kn+1) words: (accessible_count, surjective_count).

    Brute-force ground truth for tiny cases; the surjective count is
    cross-checked against n! {N n} exactly.
    """
    k = int(k)
    n = int(n)
    if k < 2 or n < 2:
        raise ValueError("exact_accessible_count: need k >= 2 and n >= 2")
    N = k * n + 1
    total = n ** N
    if total > 10 ** 8:
        raise ResourceCapError(
            "exact_accessible_count: %d^%d = %d words exceeds the 1e8 cap"
            % (n, N, total))
    levels = np.arange(n)
    cols = levels * k  # 0-based columns of y_{lk+1}
    powers = n ** np.arange(N, dtype=np.int64)
    surjective = 0
    accessible = 0
    chunk = 1 << 20
    for start in range(0, total, chunk):
        ids = np.arange(start, min(start + chunk, total), dtype=np.int64)
        W = ((ids[:, None] // powers[None, :]) % n).astype(np.int32) + 1
        # running distinct-count paths via bitmask
        seen = np.zeros(len(ids), dtype=np.uint64)
        y = np.zeros(len(ids), dtype=np.int32)
        Y = np.empty((len(ids), N), dtype=np.int32)
        for t in range(N):
            bit = np.uint64(1) << (W[:, t] - 1).astype(np.uint64)
            y = y + ((seen & bit) == 0)
            seen |= bit
            Y[:, t] = y
        surj = Y[:, -1] == n
        surjective += int(surj.sum())
        ok = surj & np.all(Y[:, cols] >= levels + 1, axis=1)
        accessible += int(ok.sum())
    expected = math.factorial(n) * stirling_exact(N, n)
    if surjective != expected:
        raise NumericsError(
            "surjective count %d != n!*stirling = %d" % (surjective, expected))
    return accessible, surjective


def estimate_middle_crossing(k, n, trials, seed=0, C=1.0, backend=None, jobs=1):
    """Frequency of paths touching the critical line inside the middle window.

    Window I2 = [a n, k n - 2 C k^2 n^(1/3)] in column units, with
    a = e^{-k}/8; a crossing at column x means k y_x <= x - 1.  The
    frequency must vanish as n grows (the limit curve clears the strip).
    """
    k = int(k)
    n = int(n)
    if k < 2 or n < 2:
        raise ValueError("estimate_middle_crossing: need k >= 2 and n >= 2")
    a = math.exp(-k) / 8.0
    x_lo = max(1, int(math.ceil(a * n)))
    x_hi = min(k * n + 1, int(math.floor(k * n - 2.0 * C * k * k * n ** (1.0 / 3.0))))
    if x_hi < x_lo:
        raise ValueError("estimate_middle_crossing: empty window at n=%d" % n)
    N = k * n + 1
    if backend is None:
        backend = auto_backend(N, n)
    Z = conditioned_paths(N, n, trials, backend=backend, seed=seed, jobs=jobs)
    Y = Z[:, ::-1]
    cols = np.arange(x_lo, x_hi + 1)
    crossed = np.any(k * Y[:, cols] <= cols - 1, axis=1)
    est = float(crossed.mean())
    return est, math.sqrt(max(est * (1.0 - est), 1e-300) / trials)


def binomial_ci(successes, trials, alpha=0.05, exact=False):
    """Binomial confidence interval: normal approximation or Clopper-Pearson."""
    if trials < 1 or not (0 <= successes <= trials):
        raise ValueError("binomial_ci: bad counts")
    p = successes / trials
    if not exact:
        z = float(scipy.stats.norm.ppf(1.0 - alpha / 2.0))
        half = z * math.sqrt(max(p * (1.0 - p), 1e-300) / trials)
        return max(0.0, p - half), min(1.0, p + half)
    lo = 0.0 if successes == 0 else \
        scipy.stats.beta.ppf(alpha / 2.0, successes, trials - successes + 1)
    hi = 1.0 if successes == trials else \
        scipy.stats.beta.ppf(1.0 - alpha / 2.0, successes + 1, trials - successes)
    return float(lo), float(hi)


def korshunov_report(k, n, trials, seed=0, jobs=1):
    """JSON-ready experiment record comparing Monte Carlo to the constants."""
    est, se = estimate_accessibility(k, n, trials, seed=seed, jobs=jobs)
    pi0, _ = pollaczek_crossing(k)
    return {
        "k": int(k), "n": int(n), "trials": int(trials), "seed": int(seed),
        "estimate": est, "stderr": se,
        "korshunov": korshunov_constant(k),
        "pollaczek_pi0": pi0,
    }
