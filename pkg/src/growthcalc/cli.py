"""Command-line front end.

Subcommands evaluate expressions, query the super-logarithm hierarchy and
Ackermann levels, estimate orders of growth, classify growth rates, verify
the growth catalog, test regularity conditions, compute fractional
iterates, dump plot data, and rerun the whole verification suite.

Outputs are JSON by default (`--format text` for summaries, `--format csv`
where tabular).  Tower-valued numbers appear as "L<level>:<mantissa>"
literals, and the same syntax is accepted for inputs.  Exit codes: 0 for
data-bearing runs, 1 for usage errors, 2 for evaluation errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import abel, acceptance, ackermann, classify, funcexpr, lixnum, orders
from .funcexpr import EvalEnv, EvalError, ParseError
from .lixnum import DomainError, LIReal
from .orders import Ladder
from .xihier import default_hierarchy

SEED_CACHE_ENV = "GROWTHCALC_SEED_CACHE"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_point(text: str):
    if text.lstrip().startswith("L"):
        return lixnum.parse_li(text)
    return float(text)


def _render_value(v):
    if isinstance(v, LIReal):
        return lixnum.format_li(v)
    if isinstance(v, Fraction):
        return float(v) if abs(v) < 10 ** 300 else str(v)
    return v


def _emit(args, payload: dict, text_lines=None):
    if args.format == "text" and text_lines is not None:
        for line in text_lines:
            print(line)
    else:
        print(json.dumps(payload, indent=2, default=str))


def _ladder_points(args, default: Ladder):
    ladder = Ladder.from_spec(args.ladder) if args.ladder else default
    return ladder, ladder.points()


def _map_points(fn, pts, parallel: bool):
    if parallel:
        with ThreadPoolExecutor() as pool:
            return list(pool.map(fn, pts))
    return [fn(p) for p in pts]


# ---------------------------------------------------------------------------
# Subcommands


def cmd_eval(args) -> int:
    hier = default_hierarchy()
    expr = funcexpr.parse(args.expr)
    if args.at is not None:
        pts = [_parse_point(args.at)]
    else:
        _, pts = _ladder_points(args, Ladder.geometric(10.0, 10.0, 8))
    vals = _map_points(
        lambda x: funcexpr.evaluate(expr, EvalEnv(x, hier)), pts, args.parallel)
    rows = [{"x": _render_value(x if isinstance(x, LIReal) else float(x)),
             "value": _render_value(v)} for x, v in zip(pts, vals)]
    _emit(args, {"expr": args.expr, "points": rows},
          [f"{r['x']}\t{r['value']}" for r in rows])
    return 0


def cmd_xi(args) -> int:
    hier = default_hierarchy()
    x = _parse_point(args.at)
    v = hier.xi_k(args.k, x)
    _emit(args, {"k": args.k, "x": _render_value(x), "xi": _render_value(v)},
          [f"xi_{args.k}({_render_value(x)}) = {_render_value(v)}"])
    return 0


def cmd_ack(args) -> int:
    v = ackermann.ack(args.m, args.n)
    out = lixnum.format_li(v) if isinstance(v, LIReal) else v
    _emit(args, {"m": args.m, "n": args.n, "value": out,
                 "envelope": ackermann.supported_envelope()},
          [str(out)])
    return 0


def cmd_order(args) -> int:
    _, pts = _ladder_points(args, Ladder.tower(0.5, 30))
    est = orders.order_of(args.F, args.f, pts, tol=args.tol)
    payload = est.to_json()
    payload.update({"F": args.F, "f": args.f})
    _emit(args, payload,
          [f"lambda = {est.lambda_hat:.9g} (converged: {est.converged}, "
           f"tail spread {est.tail_spread:.3g})"])
    return 0


def cmd_classify(args) -> int:
    rep = classify.classify_expr(args.expr)
    _emit(args, rep.to_json(),
          [f"class {rep.verdict}; witness: {rep.witness}"
           + (f"; {rep.reason}" if rep.reason else "")])
    return 0


def cmd_table(args) -> int:
    reports = [classify.verify_chain(e) for e in classify.catalog()]
    lines = [f"{r['name']:14s} {'PASS' if r['ok'] else 'FAIL'}"
             for r in reports]
    _emit(args, {"rows": reports, "ok": all(r["ok"] for r in reports)}, lines)
    return 0


def cmd_props(args) -> int:
    ladder, _ = _ladder_points(args, Ladder.geometric(10.0, 1e12, 24))
    out = {}
    for cond in ("R0", "R1", "R2", "R3"):
        out[cond] = orders.check_R(cond, args.F, ladder).to_json()
    _emit(args, {"F": args.F, "conditions": out},
          [f"{c}: {'pass' if out[c]['verdict'] else 'fail'} "
           f"(last margin {out[c]['margins'][-1]:.3g})" for c in out])
    return 0


def _cache_path(args) -> Path | None:
    p = args.seed_cache or os.environ.get(SEED_CACHE_ENV)
    return Path(p) if p else None


def cmd_iterate(args) -> int:
    cache = _cache_path(args)
    sol = None
    store = {}
    if cache and cache.exists():
        store = json.loads(cache.read_text())
        if args.f in store:
            sol = abel.solution_from_json(store[args.f])
    if sol is None:
        sol = abel.solve_abel(args.f, A=args.base)
        if cache:
            store[args.f] = abel.solution_to_json(sol)
            cache.write_text(json.dumps(store, indent=2))
    x = float(args.at)
    y = sol.fractional_iterate(args.lam, x)
    if args.twice:
        y = sol.fractional_iterate(args.lam, y)
    _emit(args, {"f": args.f, "lambda": args.lam, "x": x, "value": y,
                 "twice": args.twice}, [f"{y!r}"])
    return 0


def cmd_plotdata(args) -> int:
    hier = default_hierarchy()
    expr = funcexpr.parse(args.expr)
    _, pts = _ladder_points(args, Ladder.geometric(1.0, 2.0, 24))
    vals = _map_points(
        lambda x: funcexpr.evaluate(expr, EvalEnv(x, hier)), pts, args.parallel)

    def cell(v):
        return lixnum.format_li(v) if isinstance(v, LIReal) else repr(
            float(v) if isinstance(v, Fraction) and abs(v) < 10 ** 300 else v)

    lines = ["x,f(x)"] + [f"{cell(x)},{cell(v)}" for x, v in zip(pts, vals)]
    if args.format == "json":
        print(json.dumps({"expr": args.expr,
                          "rows": [ln.split(",") for ln in lines[1:]]}))
    else:
        for ln in lines:
            print(ln)
    return 0


def cmd_repro(args) -> int:
    reports = acceptance.run_all()
    lines = [f"{r['id']:2d} {'PASS' if r['ok'] else 'FAIL'}  {r['name']}: "
             f"{r['detail']}" for r in reports]
    ok = all(r["ok"] for r in reports)
    lines.append(f"=> {sum(r['ok'] for r in reports)}/{len(reports)} passed")
    if args.format == "json":
        _emit(args, {"criteria": reports, "ok": ok})
    else:
        for line in lines:
            print(line)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    p = _Parser(prog="growthcalc",
                description="Growth-rate calculus: super-logarithm arithmetic, "
                            "Abel equations, orders of growth, and the "
                            "class hierarchy.")
    p.add_argument("--format", choices=("json", "text", "csv"),
                   default="json", help="output format (default json)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("eval", cmd_eval, "evaluate an expression at a point or ladder")
    sp.add_argument("expr")
    sp.add_argument("--at", help="point: float or L<level>:<mantissa>")
    sp.add_argument("--ladder", help="geom:x0:ratio:count or tower:m:levels")
    sp.add_argument("--parallel", action="store_true")

    sp = add("xi", cmd_xi, "evaluate a hierarchy level xi_k")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--at", required=True)

    sp = add("ack", cmd_ack, "Ackermann value A(m, n)")
    sp.add_argument("m", type=int)
    sp.add_argument("n", type=int)

    sp = add("order", cmd_order, "order of f on the scale F along a ladder")
    sp.add_argument("--F", required=True)
    sp.add_argument("--f", required=True)
    sp.add_argument("--ladder")
    sp.add_argument("--tol", type=float, default=1e-3)

    sp = add("classify", cmd_classify, "growth-class decision with witness")
    sp.add_argument("expr")

    add("table", cmd_table, "verify the whole growth catalog")

    sp = add("props", cmd_props, "regularity conditions R0-R3 for a scale")
    sp.add_argument("--F", required=True)
    sp.add_argument("--ladder")

    sp = add("iterate", cmd_iterate, "fractional iterate via an Abel solution")
    sp.add_argument("--f", required=True)
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--at", required=True)
    sp.add_argument("--base", type=float, default=0.5,
                    help="fundamental-domain base for the Abel solution")
    sp.add_argument("--twice", action="store_true",
                    help="apply the iterate twice")
    sp.add_argument("--seed-cache",
                    help=f"solution cache path (default ${SEED_CACHE_ENV})")

    sp = add("plotdata", cmd_plotdata, "emit x,f(x) sample data")
    sp.add_argument("expr")
    sp.add_argument("--ladder")
    sp.add_argument("--parallel", action="store_true")

    add("repro", cmd_repro, "run the full verification suite")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (DomainError, EvalError, ParseError, ValueError, OverflowError) as exc:
        print(f"growthcalc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
