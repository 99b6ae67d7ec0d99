"""Command line interface.

Exit codes: 0 on success, 1 on usage errors, 2 when a verification
assertion fails (pipeline mismatch or an arc-lemma violation).
"""

import argparse
import sys

from . import conic, harness
from .boxcount import count_exact
from .errors import PipelineMismatch, QuadboxError
from .modmath import PrimeModulus
from .quadform import Box, QuadraticForm


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(1)


def _form(text):
    parts = [int(v) for v in text.split(",")]
    if len(parts) != 6:
        raise argparse.ArgumentTypeError("form needs 6 integers a,b,c,d,e,f")
    return parts


def _box(text):
    parts = [int(v) for v in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("box needs 3 integers K,L,M")
    return Box(*parts)


def _interval(text):
    parts = [int(v) for v in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("interval needs 2 integers lo,hi")
    return tuple(parts)


def build_parser():
    parser = _Parser(prog="quadbox")
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_flags(sp):
        sp.add_argument("--prime", type=int, required=True)
        sp.add_argument("--form", type=_form, required=True,
                        metavar="a,b,c,d,e,f")
        sp.add_argument("--lambda", dest="lam", type=int, required=True)
        sp.add_argument("--box", type=_box, required=True, metavar="K,L,M")

    sp = sub.add_parser("count", help="exact solution count in the box")
    instance_flags(sp)
    sp.add_argument("--list", action="store_true", help="print the solutions")

    sp = sub.add_parser("pipeline", help="decomposition pipeline vs exact count")
    instance_flags(sp)

    sp = sub.add_parser("pell", help="fundamental solution / conic points")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--xbox", type=_interval, metavar="lo,hi")
    sp.add_argument("--ybox", type=_interval, metavar="lo,hi")

    sp = sub.add_parser("verify-lemma1", help="arc-length lemma verifier")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--nmax", type=int, required=True)

    sp = sub.add_parser("sweep", help="run a sweep config, emit CSV")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--seed", type=int)

    sp = sub.add_parser("fit", help="log-log exponent fit of a sweep CSV")
    sp.add_argument("--in", dest="infile", required=True)
    return parser


def _cmd_count(args):
    pm = PrimeModulus(args.prime)
    Q = QuadraticForm(*args.form, allow_degenerate=True)
    res = count_exact(Q, args.lam, pm, args.box, collect=args.list)
    print(res.count)
    if args.list:
        for x, y in res.solutions:
            print(f"{x},{y}")
    if res.degenerate_rows:
        print("warning: degenerate full rows counted", file=sys.stderr)
    return 0


def _cmd_pipeline(args):
    pm = PrimeModulus(args.prime)
    Q = QuadraticForm(*args.form)
    try:
        rep = harness.run_pipeline(Q, args.lam, pm, args.box)
    except PipelineMismatch as exc:
        print(f"MISMATCH: {exc}", file=sys.stderr)
        return 2
    print(f"kind={rep.kind} regime={rep.regime} T={rep.T}")
    if rep.pigeonhole:
        ph = rep.pigeonhole
        print(f"pigeonhole: t={ph.t} k0={ph.k0} l0={ph.l0}")
    label = "z" if rep.kind == "norm" else "n"
    for part, cnt in rep.per_part:
        if cnt:
            print(f"{label}={part}: {cnt}")
    print(f"parts={len(rep.per_part)} pipeline={rep.pipeline_count} "
          f"exact={rep.exact_count}")
    return 0


def _cmd_pell(args):
    if args.n is None:
        unit = conic.fundamental_solution(args.d)
        print(f"{unit.u0},{unit.v0}")
        return 0
    xI = args.xbox or (-10 ** 6, 10 ** 6)
    yI = args.ybox or (-10 ** 6, 10 ** 6)
    if args.d >= 2:
        pts = conic.enumerate_in_box_orbit(args.d, args.n, xI, yI)
    else:
        pts = conic.enumerate_in_box_scan(args.d, args.n, xI, yI)
    for pt in pts:
        print(f"{pt.x},{pt.y}")
    return 0


def _cmd_verify_lemma1(args):
    rep = conic.verify_small_arc_lemma(args.d, args.nmax)
    print(f"D={rep.D} n_max={rep.n_max} curves={rep.curves_checked} "
          f"triples={rep.triples_checked} violations={len(rep.violations)} "
          f"min_ratio={rep.min_ratio}")
    for v in rep.violations:
        print(f"violation: {v}", file=sys.stderr)
    return 2 if rep.violations else 0


def _cmd_sweep(args):
    with open(args.config, encoding="utf-8") as fh:
        spec = harness.parse_config(fh.read())
    if args.seed is not None:
        spec.seed = args.seed
    records = harness.sweep(spec)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(harness.records_to_csv(records))
    bad = [r for r in records if r.error]
    print(f"{len(records)} rows ({len(bad)} with errors) -> {args.out}")
    return 0


def _cmd_fit(args):
    with open(args.infile, encoding="utf-8") as fh:
        records = harness.parse_csv(fh.read())
    slope, residual = harness.fit_exponent(records)
    print(f"slope={slope:.6f} residual={residual:.6f}")
    return 0


_COMMANDS = {
    "count": _cmd_count,
    "pipeline": _cmd_pipeline,
    "pell": _cmd_pell,
    "verify-lemma1": _cmd_verify_lemma1,
    "sweep": _cmd_sweep,
    "fit": _cmd_fit,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except QuadboxError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
