"""Command-line entry point ``whsolve``.

Subcommands:

``bench``   run convergence sweeps and write CSV (plus optional JSON and figures)
``verify``  check that a case's closed-form forcing satisfies the equation
``solve``   solve one instance and print the solution at the probes

Exit status is 0 on success, 2 when a solver did not converge or failed,
and 1 on usage or I/O errors.
"""

import argparse
import logging
import os
import sys

from whsolve import bench, cases
from whsolve.decomp import FilterSpec
from whsolve.errors import WhsolveError
from whsolve.solvers import SolverConfig

logger = logging.getLogger("whsolve")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text):
    return [int(float(t)) for t in text.split(",") if t.strip()]


def _names(choices):
    def parse(text):
        out = [t.strip() for t in text.split(",") if t.strip()]
        if out == ["all"]:
            return list(choices)
        bad = [t for t in out if t not in choices]
        if bad or not out:
            raise argparse.ArgumentTypeError(f"choose from {', '.join(choices)} or 'all'")
        return out
    return parse


METHODS = [m.value for m in bench.Method]
CASE_NAMES = sorted(cases.CASES)


def _config(args):
    if args.filter_order is None:
        filt = None
    elif args.filter_order == 0:
        filt = FilterSpec.none()
    else:
        filt = FilterSpec.exponential(p=args.filter_order)
    return SolverConfig(
        filter=filt, max_iter=args.max_iter, fp_tol=args.tol, m_trunc=args.m_trunc,
    )


def _add_solver_options(p):
    p.add_argument("--a", type=float, default=None, help="left limit (case default if omitted)")
    p.add_argument("--b", type=float, default=None, help="right limit (case default if omitted)")
    p.add_argument("--m-trunc", type=int, default=SolverConfig.m_trunc)
    p.add_argument("--filter-order", type=int, default=None,
                   help="exponential filter order; 0 disables; default per method")
    p.add_argument("--max-iter", type=int, default=SolverConfig.max_iter)
    p.add_argument("--tol", type=float, default=SolverConfig.fp_tol)
    p.add_argument("--quad-order", type=int, default=4, choices=(2, 3, 4))
    p.add_argument("--probes", type=_floats, default=list(bench.DEFAULT_PROBES))


def build_parser():
    parser = _Parser(prog="whsolve", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pb = sub.add_parser("bench", help="convergence sweep")
    pb.add_argument("--case", type=_names(CASE_NAMES), required=True,
                    help="comma-separated cases or 'all'")
    pb.add_argument("--method", type=_names(METHODS), required=True,
                    help="comma-separated methods or 'all'")
    pb.add_argument("--n", type=_ints, default=None,
                    help="comma-separated N (node count for quadrature); default per method")
    _add_solver_options(pb)
    pb.add_argument("--out", required=True, help="CSV output path")
    pb.add_argument("--profile", default=None, help="optional JSON summary path")
    pb.add_argument("--plot-dir", default=None,
                    help="optional directory for convergence figures (PNG)")

    pv = sub.add_parser("verify", help="check the closed-form forcing of a case")
    pv.add_argument("--case", choices=CASE_NAMES, required=True)
    pv.add_argument("--a", type=float, default=None)
    pv.add_argument("--b", type=float, default=None)
    pv.add_argument("--n-check", type=int, default=9)

    ps = sub.add_parser("solve", help="solve one instance")
    ps.add_argument("--case", choices=CASE_NAMES, required=True)
    ps.add_argument("--method", choices=METHODS, default="wh-sign")
    ps.add_argument("--n", type=int, default=4096)
    _add_solver_options(ps)
    ps.add_argument("--plot", default=None, help="optional PNG path for a solution figure")
    return parser


def _cmd_bench(args):
    cfg = _config(args)
    reports = []
    for case in args.case:
        for method in args.method:
            n_list = args.n or bench.DEFAULT_N[bench.Method(method)]
            spec = bench.RunSpec(case, method, n_list, args.a, args.b, cfg,
                                 tuple(args.probes), args.quad_order)
            rep = bench.run_sweep(spec)
            reports.append(rep)
            slopes = " ".join(
                f"{p:g}:{'n/a' if s is None else f'{s:.3f}'}" for p, s in rep.slopes.items()
            )
            print(f"{case:9s} {method:11s} slopes {slopes}")
    bench.emit_csv(reports, args.out)
    if args.profile:
        with open(args.profile, "w") as fh:
            fh.write(bench.emit_profile(reports) + "\n")
    if args.plot_dir:
        from whsolve import plots

        os.makedirs(args.plot_dir, exist_ok=True)
        plots.plot_convergence(reports, os.path.join(args.plot_dir, "error_vs_n.png"))
        plots.plot_convergence(reports, os.path.join(args.plot_dir, "error_vs_cpu.png"), x="cpu")
    return EXIT_OK if all(r.all_converged for r in reports) else EXIT_SOLVER


def _cmd_verify(args):
    problem = cases.get_case(args.case, args.a, args.b)
    res = cases.verify_case(problem, args.n_check)
    print(f"{args.case} [{problem.a:g}, {problem.b:g}] max residual {res:.3e}")
    return EXIT_OK


def _cmd_solve(args):
    problem = cases.get_case(args.case, args.a, args.b)
    sol = bench.solve_case(problem, args.method, args.n, _config(args), args.quad_order)
    print("probe,x,f_numeric,f_analytic,abs_error")
    for p in args.probes:
        val, node = sol.value_near(problem.a + p * problem.length)
        val, node = float(val), float(node)
        exact = float(problem.analytic_solution(node))
        print(f"{p!r},{node!r},{val!r},{exact!r},{abs(val - exact)!r}")
    print(f"# iterations {sol.iterations_used}, converged {sol.converged}", file=sys.stderr)
    if args.plot:
        from whsolve import plots

        plots.plot_solution(sol, problem, args.plot)
    return EXIT_OK if sol.converged else EXIT_SOLVER


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        handler = {"bench": _cmd_bench, "verify": _cmd_verify, "solve": _cmd_solve}[args.command]
        return handler(args)
    except WhsolveError as exc:
        print(f"whsolve: {exc}", file=sys.stderr)
        return EXIT_SOLVER if not isinstance(exc, ValueError) else EXIT_USAGE
    except (OSError, ValueError) as exc:
        print(f"whsolve: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
