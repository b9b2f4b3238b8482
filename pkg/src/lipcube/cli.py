"""Command-line front end; a thin client over the service-layer handlers.

Exit codes: 0 success, 1 verify-suite violation, 2 usage error (bad flags,
malformed expression, bad configuration), 3 evaluation or singularity error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from pydantic import ValidationError

from . import api
from .expr import EvalError, ParseError, UnknownBuiltin
from .interval import SingularityInDomain, UnboundedDerivative


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _print_kv(pairs) -> None:
    width = max(len(k) for k, _ in pairs)
    for key, value in pairs:
        print(f"{key.ljust(width)}  {_fmt(value)}")


def _function_args(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--expr", help="expression in x and y, e.g. 'abs(x-0.5)+y^2'")
    group.add_argument("--fn", help="builtin function name")


def _rect_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rect", nargs=4, type=float, required=True,
                   metavar=("A", "B", "C", "D"),
                   help="domain rectangle [A,B]x[C,D]")


def _lip_args(p: argparse.ArgumentParser, with_mode: bool = True) -> None:
    p.add_argument("--lip", nargs=2, type=float, metavar=("L1", "L2"),
                   help="manual pairwise Lipschitz constants")
    p.add_argument("--lip8", nargs=8, type=float, metavar=tuple("L%d" % i for i in range(1, 9)),
                   help="manual eight-point Lipschitz constants")
    if with_mode:
        p.add_argument("--lip-mode", choices=["manual", "certified", "sampled"],
                       help="how to obtain constants (default: manual when "
                            "--lip/--lip8 is given, else certified)")
    p.add_argument("--subdivisions", type=int, default=16,
                   help="grid for certified constants (default 16)")
    p.add_argument("--samples", type=int, default=10000,
                   help="sample count for sampled constants (default 10000)")


def _resolve_lip_flags(args) -> tuple[str, Optional[list[float]]]:
    values = None
    if getattr(args, "lip", None) is not None and getattr(args, "lip8", None) is not None:
        raise ValueError("--lip and --lip8 are mutually exclusive")
    if getattr(args, "lip", None) is not None:
        values = list(args.lip)
    elif getattr(args, "lip8", None) is not None:
        values = list(args.lip8)
    mode = getattr(args, "lip_mode", None)
    if mode is None:
        mode = "manual" if values is not None else "certified"
    return mode, values


def _rect_model(args) -> api.RectModel:
    a, b, c, d = args.rect
    return api.RectModel(a=a, b=b, c=c, d=d)


def _cmd_integrate(args) -> int:
    mode, lip = _resolve_lip_flags(args)
    req = api.IntegrateRequest(
        expr=args.expr, builtin=args.fn, rect=_rect_model(args),
        tol=args.tol, rule=args.rule, max_cells=args.max_cells,
        lip_mode=mode, lip=lip, subdivisions=args.subdivisions,
        samples=args.samples, seed=args.seed,
    )
    resp = api.integrate(req)
    if args.format == "json":
        print(json.dumps(resp.model_dump()))
    elif args.format == "csv":
        print("estimate,error_bound,cells,evaluations,converged")
        print(f"{resp.estimate!r},{resp.error_bound!r},{resp.cells},"
              f"{resp.evaluations},{_fmt(resp.converged)}")
    else:
        info = resp.lipschitz
        pairs = [
            ("estimate", resp.estimate),
            ("error_bound", resp.error_bound),
            ("cells", resp.cells),
            ("evaluations", resp.evaluations),
            ("converged", resp.converged),
            ("M1", info.m1),
            ("M2", info.m2),
            ("lip_mode", info.mode),
        ]
        if info.l1 is not None:
            pairs.insert(5, ("L1", info.l1))
            pairs.insert(6, ("L2", info.l2))
        _print_kv(pairs)
        if resp.note:
            print(resp.note)
    return 0


def _cmd_bounds(args) -> int:
    mode, lip = _resolve_lip_flags(args)
    if mode != "manual" or lip is None:
        raise ValueError("bounds requires manual constants via --lip or --lip8")
    resp = api.bounds(api.BoundsRequest(rect=_rect_model(args), lip=lip))
    if args.format == "json":
        print(json.dumps(resp.model_dump()))
    elif args.format == "csv":
        data = resp.model_dump()
        print(",".join(data.keys()))
        print(",".join("" if v is None else _fmt(v) for v in data.values()))
    else:
        pairs = [
            ("M1", resp.m1),
            ("M2", resp.m2),
            ("midpoint_mean_bound (eq1)", resp.midpoint_mean_bound),
            ("corner_midpoint_bound (eq3)", resp.corner_midpoint_bound),
            ("corner_mean_bound (eq11)", resp.corner_mean_bound),
        ]
        if resp.h_modulus_t is not None:
            pairs.append(("h_modulus_t (eq9)", resp.h_modulus_t))
            pairs.append(("h_modulus_s (eq9)", resp.h_modulus_s))
        _print_kv(pairs)
    return 0


def _cmd_lipschitz(args) -> int:
    req = api.LipschitzRequest(
        expr=args.expr, builtin=args.fn, rect=_rect_model(args),
        mode=args.mode, subdivisions=args.subdivisions,
        samples=args.samples, seed=args.seed,
    )
    resp = api.lipschitz(req)
    if args.format == "json":
        print(json.dumps(resp.model_dump()))
    else:
        if resp.certified is not None:
            _print_kv([("certified_L1", resp.certified.l1),
                       ("certified_L2", resp.certified.l2)])
        if resp.sampled is not None:
            _print_kv([("sampled_L1", resp.sampled.l1),
                       ("sampled_L2", resp.sampled.l2)])
        if resp.note:
            print(resp.note)
    return 0


def _cmd_verify(args) -> int:
    req = api.VerifyRequest(seed=args.seed)
    report = api.run_verify(req)
    if args.format == "json":
        out = report.to_json()
    elif args.format == "csv":
        out = report.to_csv().rstrip("\n")
    else:
        by_name: dict[str, list] = {}
        for case in report.cases:
            by_name.setdefault(case.name, []).append(case)
        lines = []
        for name, cases in by_name.items():
            worst = min(c.slack for c in cases)
            failed = sum(1 for c in cases if not c.holds)
            lines.append(f"{name}: {len(cases)} cases, "
                         f"{failed} failed, worst slack {worst!r}")
        lines.append(f"violations: {report.violations}")
        out = "\n".join(lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return 1 if report.violations > 0 else 0


def _cmd_hmap(args) -> int:
    mode, lip = _resolve_lip_flags(args)
    req = api.HMapRequest(
        expr=args.expr, builtin=args.fn, rect=_rect_model(args),
        grid=args.grid, n=args.n, lip_mode=mode, lip=lip,
        subdivisions=args.subdivisions, samples=args.samples, seed=args.seed,
    )
    resp = api.hmap(req)
    if args.format == "json":
        print(json.dumps(resp.model_dump()))
        return 0
    # CSV is the natural h-map output (also used for --format text)
    columns = ["t", "s", "h", "eq6_lhs", "eq6_rhs", "eq7_lhs", "eq7_rhs",
               "eq9_lhs", "eq9_rhs", "eq10_lhs", "eq10_rhs", "eq10_rhs_alt"]
    print(",".join(columns))
    for row in resp.rows:
        data = row.model_dump()
        print(",".join("" if data[c] is None else repr(data[c])
                       for c in columns))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lipcube",
        description="Certified 2-D cubature for Lipschitz functions on "
                    "rectangles, with a numerical verification suite for the "
                    "underlying midpoint/corner inequalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("integrate", help="certified cubature of f over a rectangle")
    _function_args(p)
    _rect_arg(p)
    p.add_argument("--tol", type=float, default=1e-6,
                   help="absolute error-bound target (default 1e-6)")
    p.add_argument("--rule", choices=["midpoint", "corner"], default="midpoint")
    p.add_argument("--max-cells", type=int, default=65536)
    _lip_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.set_defaults(handler=_cmd_integrate)

    p = sub.add_parser("bounds", help="print the closed-form bounds for a rectangle and constants")
    _rect_arg(p)
    _lip_args(p, with_mode=False)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.set_defaults(handler=_cmd_bounds, lip_mode=None)

    p = sub.add_parser("lipschitz", help="certified and/or sampled Lipschitz constants")
    _function_args(p)
    _rect_arg(p)
    p.add_argument("--mode", choices=["certified", "sampled", "both"],
                   default="certified")
    p.add_argument("--subdivisions", type=int, default=16)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(handler=_cmd_lipschitz)

    p = sub.add_parser("verify", help="run the inequality verification suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--out", help="write the report to a file instead of stdout")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("h-map", help="tabulate H(t,s) and its bounds over a (t,s) grid")
    _function_args(p)
    _rect_arg(p)
    p.add_argument("--grid", type=int, default=9, help="grid points per axis")
    p.add_argument("--n", type=int, default=64, help="oracle resolution (even)")
    _lip_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["csv", "json", "text"], default="csv")
    p.set_defaults(handler=_cmd_hmap)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ParseError, UnknownBuiltin, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EvalError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return 3
    except (SingularityInDomain, UnboundedDerivative) as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return 3
    except BrokenPipeError:
        # downstream consumer (e.g. head) closed the pipe; that is fine
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
