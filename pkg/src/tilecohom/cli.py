"""Command-line front end.

Verbs: space, quotient, path, verify, dump.  Text output renders group
expressions in the canonical grammar; --json emits one structured document
per invocation.  Exit status: 0 on success or all checks passing, 1 on a
verification mismatch or failed computation, 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import signal
import sys
import time

from . import catalog, subst1d, subst2d
from .errors import InvalidPath, TilingCohomologyError


def _common_flags():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true",
                   help="emit a structured JSON document")
    p.add_argument("--collar", choices=["auto", "on", "off"], default="auto",
                   help="collaring policy for 2-D complexes")
    p.add_argument("--timeout-sec", type=int, default=None, metavar="N",
                   help="abort the computation after N seconds")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    p = argparse.ArgumentParser(
        prog="tilecohom",
        description="Cohomology and quotient cohomology of substitution "
                    "tiling spaces (exact arithmetic).")
    sub = p.add_subparsers(dest="verb", required=True)
    sp = sub.add_parser("space", parents=[common],
                        help="absolute cohomology of a named space")
    sp.add_argument("name", help='e.g. "tm:2,1", "sol:3", "chair:X,+"')
    qp = sub.add_parser("quotient", parents=[common],
                        help="quotient cohomology of a factor-map pair")
    qp.add_argument("fine")
    qp.add_argument("coarse")
    pp = sub.add_parser("path", parents=[common],
                        help="quotient cohomology of a composed lattice path")
    pp.add_argument("start", help='e.g. "chair:X,+"')
    pp.add_argument("word", help="word over A, B, C")
    vp = sub.add_parser("verify", parents=[common],
                        help="recompute the golden tables and report")
    vp.add_argument("scope", nargs="?", default="all",
                    choices=["1d", "2d", "all"])
    vp.add_argument("--grid", default=None, metavar="k1,l1;k2,l2",
                    help="override the 1-D parameter grid")
    dp = sub.add_parser("dump", parents=[common],
                        help="print the cells and coboundaries of a complex")
    dp.add_argument("name")
    return p


def _collar(args) -> str:
    return {"auto": "auto", "on": "forced", "off": "off"}[args.collar]


def _parse_grid(text):
    try:
        return tuple(tuple(int(x) for x in pair.split(","))
                     for pair in text.split(";") if pair)
    except ValueError:
        raise InvalidPath(f"cannot parse grid {text!r}")


def _emit(args, doc, text_lines):
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _degree_results(exprs):
    return [dict(degree=k, **e.structured()) for k, e in enumerate(exprs)]


def _run_space(args):
    t0 = time.monotonic()
    exprs = catalog.compute_space(args.name, _collar(args))
    ms = int((time.monotonic() - t0) * 1000)
    _emit(args,
          {"space": args.name, "results": _degree_results(exprs),
           "runtime_ms": ms},
          ["; ".join(f"H^{k} = {e}" for k, e in enumerate(exprs))])
    return 0


def _run_quotient(args):
    t0 = time.monotonic()
    exprs = catalog.compute_quotient(args.fine, args.coarse, _collar(args))
    ms = int((time.monotonic() - t0) * 1000)
    _emit(args,
          {"pair": f"{args.fine}->{args.coarse}",
           "results": _degree_results(exprs), "runtime_ms": ms},
          ["; ".join(f"H^{k}_Q = {e}" for k, e in enumerate(exprs))])
    return 0


def _run_path(args):
    sid = catalog.SpaceId.parse(args.start)
    if sid.family != "chair":
        raise InvalidPath("path computations start at a chair:* space")
    t0 = time.monotonic()
    exprs = catalog.compute_path(catalog.FactorPath(sid.scheme, args.word))
    ms = int((time.monotonic() - t0) * 1000)
    _emit(args,
          {"path": {"start": args.start, "word": args.word},
           "results": _degree_results(exprs), "runtime_ms": ms},
          ["; ".join(f"H^{k}_Q = {e}"
                     for k, e in enumerate(exprs) if k >= 1)])
    return 0


def _run_verify(args):
    grid = _parse_grid(args.grid) if args.grid else None
    t0 = time.monotonic()
    report = catalog.verify_all(args.scope, grid)
    ms = int((time.monotonic() - t0) * 1000)
    failures = [r for r in report if not r["ok"]]
    lines = []
    for r in report:
        if r["ok"]:
            lines.append(f"PASS {r['kind']} {r['key']} H^{r['degree']} = "
                         f"{r['computed']}")
        else:
            lines.append(f"FAIL {r['kind']} {r['key']} H^{r['degree']}: "
                         f"expected {r['expected']}, computed {r['computed']}")
    lines.append(f"{len(report) - len(failures)}/{len(report)} checks passed")
    _emit(args,
          {"scope": args.scope, "checks": report,
           "failures": len(failures), "runtime_ms": ms},
          lines)
    return 1 if failures else 0


def _run_dump(args):
    sid = catalog.SpaceId.parse(args.name)
    if sid.family == "chair":
        cx, _ = subst2d.ap_complex_2d(sid.scheme, _collar(args))
    else:
        f = sid.family
        if f == "tm":
            cx, _ = subst1d.tm_system(*sid.params, 1)
        elif f == "pd":
            cx, _ = subst1d.pd_system(*sid.params, 1)
        else:
            cx, _ = subst1d.sol_system(sid.params[0], 0)
    _emit(args, {"space": args.name, "dump": cx.dump()}, [cx.dump()])
    return 0


_VERBS = {"space": _run_space, "quotient": _run_quotient, "path": _run_path,
          "verify": _run_verify, "dump": _run_dump}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    if args.timeout_sec:
        def _on_alarm(signum, frame):
            raise TimeoutError(f"computation exceeded {args.timeout_sec}s")
        signal.signal(signal.SIGALRM, _on_alarm)
        signal.alarm(args.timeout_sec)
    try:
        return _VERBS[args.verb](args)
    except InvalidPath as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (TilingCohomologyError, TimeoutError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    finally:
        if args.timeout_sec:
            signal.alarm(0)


if __name__ == "__main__":
    sys.exit(main())
