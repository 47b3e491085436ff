"""Command line: verify, selftest, symbols."""
import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from ..arith import INF, hilbert, primes_of
from .config import CHECKS, load_config
from .report import FAIL, format_table, skip, summary

THREADS_ENV = "CMKERNEL_THREADS"


def thread_count():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _run_one(job):
    from .checks import RUNNERS
    cfg, fn = job
    out = []
    for name in cfg.checks:
        try:
            out.extend(fn(cfg) if fn is not None else RUNNERS[name](cfg))
        except (ValueError, NotImplementedError) as ex:
            out.append(skip(name, cfg.params(), str(ex)))
    return out


def run_checks(jobs, threads=1):
    """Run (config, runner) jobs; results keep job order whatever the thread count."""
    if threads <= 1:
        results = [_run_one(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_run_one, jobs))
    return [r for rs in results for r in rs]


def emit(reports, table=False, stream=None):
    stream = stream or sys.stdout
    if table:
        stream.write(format_table(reports) + "\n")
    else:
        for r in reports:
            stream.write(r.to_json() + "\n")
        stream.write(json.dumps(summary(reports)) + "\n")
    return 1 if any(r.status == FAIL for r in reports) else 0


def cmd_verify(args):
    cfg = load_config(args.config)
    if args.only:
        cfg.checks = [x.strip() for x in args.only.split(",") if x.strip()]
        bad = [x for x in cfg.checks if x not in CHECKS]
        if bad:
            raise SystemExit("unknown checks: %s" % ", ".join(bad))
    if args.a_max is not None:
        cfg.a_max = args.a_max
    if args.tol is not None:
        cfg.tol = args.tol
    if args.seed is not None:
        cfg.seed = args.seed
    cfg.validate()
    jobs = [(cfg.__class__(**dict(cfg.__dict__, checks=[c])), None) for c in cfg.checks]
    return emit(run_checks(jobs, thread_count()), args.table)


def cmd_selftest(args):
    from .checks import run_selftest
    return emit(run_selftest(thread_count()), args.table)


def cmd_symbols(args):
    a, b = args.hilbert
    places = [INF] + primes_of(2 * a * b)
    vals = {str(v): hilbert(a, b, v) for v in places}
    prod = 1
    for x in vals.values():
        prod *= x
    print(json.dumps({"a": a, "b": b, "hilbert": vals, "product": prod}))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="cmkernel")
    sub = ap.add_subparsers(dest="cmd", required=True)
    v = sub.add_parser("verify", help="run the checks of a config file")
    v.add_argument("config")
    v.add_argument("--only", help="comma separated check names")
    v.add_argument("--a-max", type=int, dest="a_max")
    v.add_argument("--tol", type=float)
    v.add_argument("--seed", type=int)
    fmt = v.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON lines (default)")
    fmt.add_argument("--table", action="store_true")
    v.set_defaults(fn=cmd_verify)
    s = sub.add_parser("selftest", help="fast suite on built-in configs")
    s.add_argument("--table", action="store_true")
    s.set_defaults(fn=cmd_selftest)
    y = sub.add_parser("symbols", help="local symbols")
    y.add_argument("--hilbert", nargs=2, type=int, metavar=("A", "B"), required=True)
    y.set_defaults(fn=cmd_symbols)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as ex:
        print("error: %s" % ex, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
