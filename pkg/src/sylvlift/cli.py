"""Command-line front end.  Every subcommand writes one CSV artifact.

    sylvlift bounds --b 10 --a-min 1.5 --a-max 9 --a-steps 16 --k 1,3,5
    sylvlift pide --table
    sylvlift timing --n-list 1000,2000,4000,8000
    sylvlift decay --scenario nonnormal-lift --a 2 --b 4 --dim 30

CSV files start with ``#`` metadata lines, then a header row, then data
rows with numbers printed to 12 significant digits.  Exit status is 0 on
success, 2 for invalid input and 3 when a numerical hypothesis fails.
"""
import argparse
import io
import statistics
import sys
import time

import numpy as np
import scipy

from . import __version__
from .decay import bt_decay_check, fastdecay_check
from .dilation import counterexample_instance
from .errors import HypothesisError, SylvliftError, ValidationError
from .linalg import singular_values
from .pide import TABLE1, solve_pide, table1, worked_example
from .sylvester import solve_kron
from .zolotarev import (CircleIntervalConfig, z_circle_bound_corollary, z_circle_bound_simple,
                        z_circle_bound_theorem)

EXIT_OK, EXIT_ERROR, EXIT_VALIDATION, EXIT_HYPOTHESIS = 0, 1, 2, 3


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return "%.12g" % value


def render_csv(header, rows, metadata):
    """CSV text: ``# key: value`` lines, a header, then the (already sorted) rows."""
    buf = io.StringIO()
    buf.write(f"# sylvlift {__version__}; numpy {np.__version__}; scipy {scipy.__version__}\n")
    for key, value in metadata:
        buf.write(f"# {key}: {value}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _int_list(text):
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from exc
    if not values:
        raise ValidationError("empty list")
    return values


def cmd_bounds(b=10.0, a_min=1.5, a_max=9.0, a_steps=16, k_list=(1, 3, 5)):
    """Rows ``(a, k, bound_theorem, bound_corollary, bound_simple)``, all bounding ``Z_2k``."""
    if not 1.0 < a_min <= a_max < b:
        raise ValidationError(f"need 1 < a_min <= a_max < b, got {a_min}, {a_max}, {b}")
    if a_steps < 1 or (a_steps == 1 and a_min != a_max):
        raise ValidationError("a_steps must be >= 1 (and 1 only for a single point)")
    if any(k < 1 for k in k_list):
        raise ValidationError("degrees must be positive")
    rows = []
    for a in np.linspace(a_min, a_max, a_steps):
        cfg = CircleIntervalConfig.from_endpoints(a, b)
        for k in sorted(set(k_list)):
            rows.append((float(a), k,
                         z_circle_bound_theorem(k, cfg).value,
                         z_circle_bound_corollary(k, cfg).value,
                         z_circle_bound_simple(2 * k, cfg).value))
    meta = [("b", _fmt(b)),
            ("alpha_selection", "golden-section on (c^2, 100 c^2]; value is alpha-independent"),
            ("norm", "not applicable (scalar rational bounds)"),
            ("columns", "each bound certifies Z_2k([a,b], unit circle)")]
    return ["a", "k", "bound_theorem", "bound_corollary", "bound_simple"], sorted(rows), meta


def cmd_pide(n=10, epsilon=1e-7, with_table=False):
    meta = [("alpha_selection", "fixed pair alpha = 2/(a+b), beta = (a+b)/2"),
            ("norm", "spectral")]
    if with_table:
        rows = table1(tuple(sorted(TABLE1)), k_max=5)
        meta.append(("problem", "a(t)=t, f=6x^4y(1-2y)+x^6y^3(1-y)/6"))
        return ["n", "k", "rel_error", "bound", "ratio"], sorted(rows), meta
    if n < 2:
        raise ValidationError(f"need n >= 2, got {n}")
    if not 0.0 < epsilon < 1.0:
        raise ValidationError(f"epsilon must lie in (0, 1), got {epsilon}")
    p = worked_example(n)
    sol = solve_pide(p, epsilon)
    meta += [("n", n), ("epsilon", _fmt(epsilon)), ("a", _fmt(sol.a)), ("b", _fmt(sol.b)),
             ("iterations", sol.iterations), ("certified_error", _fmt(sol.certified_error))]
    r = sol.report
    rows = [(k, r.residuals[i], r.bounds[i], r.ranks[i], r.widths[i])
            for i, k in enumerate(r.iterations)]
    return ["k", "residual", "bound", "rank", "width"], rows, meta


def cmd_timing(n_list=(1000, 2000, 4000, 8000), epsilon=1e-7, repeats=5):
    """Median wall time of :func:`solve_pide` with the simple-form iteration count."""
    if repeats < 1:
        raise ValidationError("repeats must be >= 1")
    if any(n < 2 for n in n_list):
        raise ValidationError("grid sizes must be >= 2")
    rows = []
    for n in sorted(set(n_list)):
        p = worked_example(n)
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            sol = solve_pide(p, epsilon, use_simple=True, track_residual=False)
            times.append(time.perf_counter() - t0)
        rows.append((n, statistics.median(times), sol.iterations))
    meta = [("epsilon", _fmt(epsilon)), ("repeats", repeats),
            ("iterations", "simple form, independent of n"),
            ("alpha_selection", "fixed pair"), ("norm", "spectral")]
    return ["n", "median_seconds", "iterations"], rows, meta


def _random_rank_one(rng, m, n):
    return np.outer(rng.standard_normal(m), rng.standard_normal(n))


def cmd_decay(scenario, a=2.0, b=4.0, dim=20, seed=0):
    """Singular values of a solution next to the applicable decay bound."""
    if dim < 2:
        raise ValidationError("dim must be >= 2")
    rng = np.random.default_rng(seed)
    meta = [("scenario", scenario), ("seed", seed), ("dim", dim),
            ("alpha_selection", "not applicable"), ("norm", "spectral")]
    if scenario == "counterexample":
        ce = counterexample_instance(dim)
        s = singular_values(ce.x)
        meta.append(("b_param", _fmt(ce.b_param)))
        rows = [(i + 1, float(v), None) for i, v in enumerate(s)]
        return ["index", "singular_value", "bound"], rows, meta
    if not 1.0 < a < b:
        raise ValidationError(f"need 1 < a < b, got a={a}, b={b}")
    meta += [("a", _fmt(a)), ("b", _fmt(b))]
    c = _random_rank_one(rng, dim, dim)
    if scenario == "normal-diag":
        a_diag = rng.uniform(-1.0, 1.0, dim)
        b_diag = rng.uniform(a, b, dim)
        x = solve_kron(np.diag(a_diag), np.diag(b_diag), c)
        report = bt_decay_check(a_diag, b_diag, c, x, k_max=dim, l_max=1)
    elif scenario == "nonnormal-lift":
        amat = rng.standard_normal((dim, dim))
        amat /= np.linalg.norm(amat, 2)
        q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
        bmat = (q * rng.uniform(a, b, dim)) @ q.T
        bmat = 0.5 * (bmat + bmat.T)
        x = solve_kron(amat, bmat, c)
        report = fastdecay_check(c, x, a, b, k_max=dim, l_max=1)
    else:
        raise ValidationError(f"unknown scenario {scenario!r}")
    meta.append(("violations", report.violations))
    curve = dict(report.bound_curve)
    rows = [(i + 1, float(v), curve.get(i + 1)) for i, v in enumerate(report.singular_values)]
    return ["index", "singular_value", "bound"], rows, meta


def build_parser():
    parser = argparse.ArgumentParser(prog="sylvlift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="circle Zolotarev bounds over a grid of a")
    p.add_argument("--b", type=float, default=10.0)
    p.add_argument("--a-min", type=float, default=1.5)
    p.add_argument("--a-max", type=float, default=9.0)
    p.add_argument("--a-steps", type=int, default=16)
    p.add_argument("--k", default="1,3,5")
    p.add_argument("--out")

    p = sub.add_parser("pide", help="solve the worked integro-differential example")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--eps", type=float, default=1e-7)
    p.add_argument("--table", action="store_true", help="error/bound ratios for n = 10, 100, 1000")
    p.add_argument("--out")

    p = sub.add_parser("timing", help="wall time of the structured solver against n")
    p.add_argument("--n-list", default="1000,2000,4000,8000")
    p.add_argument("--eps", type=float, default=1e-7)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--out")

    p = sub.add_parser("decay", help="singular values of a solution and their bound")
    p.add_argument("--scenario", required=True,
                   choices=["normal-diag", "nonnormal-lift", "counterexample"])
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--b", type=float, default=4.0)
    p.add_argument("--dim", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    return parser


def run(args):
    if args.command == "bounds":
        return cmd_bounds(args.b, args.a_min, args.a_max, args.a_steps, _int_list(args.k))
    if args.command == "pide":
        return cmd_pide(args.n, args.eps, args.table)
    if args.command == "timing":
        return cmd_timing(_int_list(args.n_list), args.eps, args.repeats)
    return cmd_decay(args.scenario, args.a, args.b, args.dim, args.seed)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        header, rows, meta = run(args)
        _emit(render_csv(header, rows, meta), args.out)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except HypothesisError as exc:
        print(f"hypothesis failed: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except SylvliftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK
