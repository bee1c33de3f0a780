"""Command line entry point ``nasmt``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from .expr import ExpressionError
from .groebner import CapExceeded
from .pl import exact, fmt_q
from .position import PositionError
from .projective import ContainedInHypersurfaceError, FMTError, characteristic, counting, fmt_defect, proximity
from .scenario import BUILTINS, Scenario, ScenarioError, builtin, load_scenario
from .series import SeriesError, UncertifiedError
from .smt import invariants, profile_json, proof_trace, verify

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATED = 2
EXIT_UNCERTIFIED = 3


def resolve_scenario(ref: str) -> Scenario:
    """A file path; a missing ``<dir>/<builtin>.json`` or bare builtin name loads the shipped copy."""
    if os.path.exists(ref):
        return load_scenario(ref)
    stem = os.path.splitext(os.path.basename(ref))[0]
    if stem in BUILTINS:
        return builtin(stem)
    raise ScenarioError("", f"no such scenario file or builtin: {ref}")


def parse_grid(text: str) -> List[Fraction]:
    try:
        a, b, k = text.split(":")
        lo, hi, k = exact(a), exact(b), int(k)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"grid must be a:b:k, got {text!r}") from None
    if k < 2 or not lo < hi:
        raise argparse.ArgumentTypeError("grid needs a < b and k >= 2")
    return [lo + (hi - lo) * i / (k - 1) for i in range(k)]


def _q(x: Fraction) -> str:
    return str(Fraction(x))


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands


def cmd_invariants(sc: Scenario, args) -> int:
    inv = invariants(sc)
    p = inv.profile
    if args.json:
        out = profile_json(p, inv.M, inv.alpha)
        out["bounds"] = [{"theorem": b.theorem, "coefficient": fmt_q(b.coefficient)} for b in inv.bounds]
        print(json.dumps(out, indent=2))
        return EXIT_OK
    print(f"q = {p.q}, n = {p.n}")
    for m in range(-1, p.n):
        print(f"t_{m} = {p.t(m)}")
    print(f"general position: {'yes' if p.general_position else 'no'}")
    print(f"M = {inv.M.M} ({inv.M.status}; {inv.M.witness})")
    print(f"alpha = {_q(inv.alpha)}")
    for b in inv.bounds:
        print(f"{b.theorem} coefficient = {_q(b.coefficient)}")
    return EXIT_OK


def evaluate_csv(sc: Scenario, grid: Sequence[Fraction]) -> str:
    dom = (grid[0], grid[-1])
    f = sc.map
    T = characteristic(f, dom)
    ms = [proximity(f, D, dom, sc.options.normalize_coeffs) for D in sc.hypersurfaces]
    Ns = [counting(f, D, dom) for D in sc.hypersurfaces]
    q = len(sc.hypersurfaces)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "T"] + [f"m_{j + 1}" for j in range(q)] + [f"N_{j + 1}" for j in range(q)])
    for t in grid:
        w.writerow([fmt_q(t), fmt_q(T(t))] + [fmt_q(m(t)) for m in ms] + [fmt_q(n(t)) for n in Ns])
    return buf.getvalue()


def cmd_evaluate(sc: Scenario, args) -> int:
    grid = args.grid or parse_grid(f"{fmt_q(sc.options.t_domain[0])}:{fmt_q(sc.options.t_domain[1])}:11")
    _emit(evaluate_csv(sc, grid), args.csv)
    return EXIT_OK


def _svg(report) -> str:
    lo, hi = (float(x) for x in report.T.domain)
    curves = [("lhs", report.lhs, "#000")]
    colors = {"quang": "#c33", "levin": "#393", "new": "#36c"}
    for b in report.bounds:
        curves.append((f"{b.theorem} ({_q(b.coefficient)}T + {_q(b.C_min)})",
                       report.T * b.coefficient + b.C_min, colors.get(b.theorem, "#888")))
    ymax = max(float(c.max()) for _, c, _ in curves)
    ymin = min(float(c.min()) for _, c, _ in curves)
    W, H, pad = 640, 400, 40
    span_y = (ymax - ymin) or 1.0

    def px(x, y):
        return pad + (x - lo) / (hi - lo) * (W - 2 * pad), H - pad - (y - ymin) / span_y * (H - 2 * pad)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">',
             f'<rect width="{W}" height="{H}" fill="white"/>']
    for k, (label, c, color) in enumerate(curves):
        pts = " ".join("%.2f,%.2f" % px(float(x), float(y)) for x, y in zip(c.xs, c.ys))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        parts.append(f'<text x="{pad + 5}" y="{pad + 15 * (k + 1)}" fill="{color}" font-size="12">{label}</text>')
    parts.append("</svg>\n")
    return "\n".join(parts)


def cmd_verify(sc: Scenario, args) -> int:
    report = verify(sc)
    if args.svg:
        _emit(_svg(report), args.svg)
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(f"status: {report.status}")
        for a in report.assumptions:
            print(f"  assumption: {a}")
        print(f"T right slope = {_q(report.T.right_slope())}, lhs right slope = {_q(report.lhs.right_slope())}")
        ratio = "undefined" if report.sharpness_ratio is None else _q(report.sharpness_ratio)
        print(f"sharpness ratio = {ratio}")
        for b in report.bounds:
            print(f"{b.theorem}: coefficient {_q(b.coefficient)}, C_min {_q(b.C_min)} (domain-relative), "
                  f"{'holds' if b.holds and b.slope_ok else 'VIOLATED'}")
        print("FMT constants: " + ", ".join(_q(c) for c in report.fmt_constants))
    if report.violated:
        return EXIT_VIOLATED
    if args.require_certified and report.status != "verified":
        return EXIT_UNCERTIFIED
    return EXIT_OK


def cmd_fmt_check(sc: Scenario, args) -> int:
    dom = sc.options.t_domain
    for D in sc.hypersurfaces:
        _, c = fmt_defect(sc.map, D, dom)
        print(f"{D.name}: m + N - {D.degree}T = {_q(c)} (constant)")
    return EXIT_OK


def cmd_trace(sc: Scenario, args) -> int:
    tr = proof_trace(sc, args.at)
    if args.json:
        print(json.dumps(tr.to_json(), indent=2))
        return EXIT_OK
    names = [D.name for D in sc.hypersurfaces]
    print(f"t = {_q(tr.t)}, T = {_q(tr.T)}, lhs = {_q(tr.lhs)}")
    print("sorted m/deg: " + ", ".join(f"{names[j]}={_q(tr.values[j])}" for j in tr.order))
    for label, piece, s in zip(("j <= t_0", "t_0 < j <= t_-1", "j > t_-1"), tr.pieces, tr.piece_sums):
        print(f"  {label}: [{', '.join(names[j] for j in piece)}] sum {_q(s)}")
    if tr.last_piece_bound is not None:
        print(f"last piece bounded by {_q(tr.last_piece_bound)} on the domain"
              f" (eventually constant: {'yes' if tr.last_piece_eventually_constant else 'no'})")
    for e in tr.middle:
        print(f"  middle {names[e.index]}: {_q(e.value)} <= {_q(e.bound)} + {_q(e.C)}")
    print(f"middle piece vs alpha*T: {_q(tr.piece_sums[1])} vs {_q(tr.middle_alpha_bound)}")
    if tr.hyperplanes:
        h = tr.hyperplanes
        print(f"separating hyperplanes {h['forms']}: sum m = {h['sum_m_at_t']} vs T = {h['T_at_t']} (C = {h['C']})")
    for n in tr.notices:
        print(f"notice: {n}")
    return EXIT_OK


COMMANDS = {
    "invariants": cmd_invariants,
    "evaluate": cmd_evaluate,
    "verify": cmd_verify,
    "fmt-check": cmd_fmt_check,
    "trace": cmd_trace,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nasmt", description="Exact non-Archimedean value distribution toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def scen(p):
        p.add_argument("scenario", help="scenario JSON file or builtin name")
        return p

    p = scen(sub.add_parser("invariants", help="t_m, M, alpha and bound coefficients"))
    p.add_argument("--json", action="store_true")
    p = scen(sub.add_parser("evaluate", help="CSV of T, m_j, N_j on a grid"))
    p.add_argument("--grid", type=parse_grid)
    p.add_argument("--csv", metavar="OUT")
    p = scen(sub.add_parser("verify", help="check the three bounds on the t-window"))
    p.add_argument("--json", action="store_true")
    p.add_argument("--svg", metavar="OUT")
    p.add_argument("--require-certified", action="store_true")
    scen(sub.add_parser("fmt-check", help="m + N - dT constancy per hypersurface"))
    p = scen(sub.add_parser("trace", help="three-piece decomposition at one t"))
    p.add_argument("--at", type=exact, required=True)
    p.add_argument("--json", action="store_true")
    ex = sub.add_parser("examples", help="builtin scenarios")
    exsub = ex.add_subparsers(dest="action", required=True)
    exsub.add_parser("list")
    run = exsub.add_parser("run")
    run.add_argument("name", choices=BUILTINS)
    run.add_argument("--json", action="store_true")
    run.add_argument("--svg", metavar="OUT")
    run.add_argument("--require-certified", action="store_true")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "examples":
            if args.action == "list":
                for name in BUILTINS:
                    print(name)
                return EXIT_OK
            sc = builtin(args.name)
            print(f"scenario: {args.name}", file=sys.stderr)
            return cmd_verify(sc, args)
        sc = resolve_scenario(args.scenario)
        return COMMANDS[args.command](sc, args)
    except UncertifiedError as exc:
        print(f"uncertified: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    except FMTError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_VIOLATED
    except (ScenarioError, ExpressionError, PositionError, SeriesError, CapExceeded,
            ContainedInHypersurfaceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
