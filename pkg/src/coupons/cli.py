"""Command-line front end.

Subcommands: curve, stirling, simulate, korshunov, ldp.  Every run is
deterministic given its full flag set (seed included); Monte-Carlo
subcommands split the seed into one sub-stream per trajectory, so
--jobs changes wall time but never output.

Exit codes: 0 ok, 2 bad parameters/usage, 3 I/O failure, 4 numeric or
backend-window failure.  Floats print at 17 significant digits in text
output; JSON uses shortest round-trip floats (lossless either way).
The environment variable COUPONS_OUTPUT_DIR, when set, is prepended to
relative --out paths.
"""

import argparse
import json
import math
import os
import sys

from . import automata, curve, sampler, stirling
from .errors import NumericsError
from .specialfn import rate_j, xi_of_lambda


def _u64(text):
    v = int(text)
    if not (0 <= v < 1 << 64):
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected a comma-separated integer list")


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected a comma-separated float list")


def _resolve_out(path):
    base = os.environ.get("COUPONS_OUTPUT_DIR")
    if path is not None and base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _emit(text, out):
    out = _resolve_out(out)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _jsonify(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def cmd_curve(args):
    if args.format != "csv":
        raise ValueError("curve: only --format csv is supported")
    c = curve.solve_completion_curve(args.nu, args.a, step=args.step)
    lines = ["x,y,lambda"]
    for x, y in zip(c.xs, c.ys):
        lines.append("%.17g,%.17g,%.17g" % (x, y, x / y - 1.0))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _stirling_verify(lams, ells, out):
    lines = ["lam,ell,m,l_abs_chi,l_trans_err"]
    worst_chi = worst_r = 0.0
    for lam in lams:
        for l in ells:
            m = int(round((1.0 + lam) * l))
            lc = l * abs(stirling.chi(m, l))
            lr = l * stirling.transition_error(m, l)
            worst_chi = max(worst_chi, lc)
            worst_r = max(worst_r, lr)
            lines.append("%.17g,%d,%d,%.17g,%.17g" % (lam, l, m, lc, lr))
    lines.append("# max l|chi| = %.17g, max l|r-rho| = %.17g" % (worst_chi, worst_r))
    _emit("\n".join(lines) + "\n", out)
    return 0


def cmd_stirling(args):
    if args.verify:
        return _stirling_verify(args.lams, args.ells, args.out)
    if args.m is None or args.l is None:
        raise ValueError("stirling: need m and l (or --verify)")
    m, l = args.m, args.l
    val = stirling.stirling_exact(m, l, cap=args.cap)
    lines = [str(val)]
    if 1 <= l < m:
        pl = stirling.psi_log(m, l)
        ch = stirling.chi(m, l, cap=args.cap)
        lines.append("psi_log=%.17g" % pl)
        lines.append("chi=%.17g" % ch)
        lines.append("l_chi=%.17g" % (l * ch))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_simulate(args):
    if args.format != "json":
        raise ValueError("simulate: only --format json is supported")
    if args.backend == "exact":
        be = stirling.ExactBackend()
    elif args.backend == "logdp":
        be = stirling.LogDPBackend()
    elif args.backend == "saddle":
        be = stirling.SaddleBackend()
    else:
        be = None  # auto
    rec = sampler.sup_distance_batch(args.N, args.n, args.trials, args.a,
                                     seed=args.seed, backend=be,
                                     jobs=args.jobs, step=args.step)
    _emit(_jsonify(rec), args.out)
    return 0


def cmd_korshunov(args):
    rec = automata.korshunov_report(args.k, args.n, args.trials,
                                    seed=args.seed, jobs=args.jobs)
    _emit(_jsonify(rec), args.out)
    return 0


def cmd_ldp(args):
    if args.nu <= 0.0:
        raise ValueError("ldp: nu must be > 0")
    xi = xi_of_lambda(args.nu)
    j = rate_j(xi)
    lines = ["n,lnP_over_n,minus_J,gap"]
    for n in args.n:
        if n < 1:
            raise ValueError("ldp: n must be >= 1")
        N = int(round((1.0 + args.nu) * n))
        lnp = stirling.surjection_log_probability(N, n)
        rate = lnp / n
        lines.append("%d,%.17g,%.17g,%.17g" % (n, rate, -j, abs(rate + j)))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="coupons",
        description="Impatient coupon collector: curves, Stirling asymptotics, "
                    "conditioned sampling, accessible automata.")
    sub = p.add_subparsers(dest="cmd", required=True)

    pc = sub.add_parser("curve", help="solve the limiting completion curve")
    pc.add_argument("--nu", type=float, required=True)
    pc.add_argument("--a", type=float, required=True)
    pc.add_argument("--step", type=float, default=1e-3)
    pc.add_argument("--out", default=None)
    pc.add_argument("--format", default="csv", choices=["csv", "json"])
    pc.set_defaults(func=cmd_curve)

    ps = sub.add_parser("stirling", help="exact Stirling numbers and diagnostics")
    ps.add_argument("m", type=int, nargs="?", default=None)
    ps.add_argument("l", type=int, nargs="?", default=None)
    ps.add_argument("--cap", type=int, default=stirling.DEFAULT_EXACT_CAP)
    ps.add_argument("--verify", action="store_true",
                    help="emit the l|chi| and l|r-rho| bound table")
    ps.add_argument("--lams", type=_float_list, default=[0.5, 1.0, 2.0])
    ps.add_argument("--ells", type=_int_list, default=[50, 100, 200, 400, 800])
    ps.add_argument("--out", default=None)
    ps.set_defaults(func=cmd_stirling)

    pm = sub.add_parser("simulate", help="conditioned-path sup-distance batches")
    pm.add_argument("--N", type=int, required=True)
    pm.add_argument("--n", type=int, required=True)
    pm.add_argument("--trials", type=int, required=True)
    pm.add_argument("--a", type=float, required=True)
    pm.add_argument("--seed", type=_u64, default=0)
    pm.add_argument("--backend", default="auto",
                    choices=["auto", "exact", "logdp", "saddle"])
    pm.add_argument("--jobs", type=int, default=1)
    pm.add_argument("--step", type=float, default=1e-3)
    pm.add_argument("--out", default=None)
    pm.add_argument("--format", default="json", choices=["csv", "json"])
    pm.set_defaults(func=cmd_simulate)

    pk = sub.add_parser("korshunov", help="accessibility Monte Carlo vs constants")
    pk.add_argument("--k", type=int, required=True)
    pk.add_argument("--n", type=int, required=True)
    pk.add_argument("--trials", type=int, required=True)
    pk.add_argument("--seed", type=_u64, default=0)
    pk.add_argument("--jobs", type=int, default=1)
    pk.add_argument("--out", default=None)
    pk.set_defaults(func=cmd_korshunov)

    pl = sub.add_parser("ldp", help="large-deviation rate vs exact log-probabilities")
    pl.add_argument("--nu", type=float, required=True)
    pl.add_argument("--n", type=_int_list, default=[50, 100, 200])
    pl.add_argument("--out", default=None)
    pl.set_defaults(func=cmd_ldp)

    return p


def main(argv=None):
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(2000000)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except OSError as exc:
        sys.stderr.write("i/o error: %s\n" % exc)
        return 3
    except (NumericsError, RuntimeError) as exc:
        sys.stderr.write("numeric error: %s\n" % exc)
        return 4


if __name__ == "__main__":
    sys.exit(main())
