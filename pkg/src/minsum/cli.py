"""Command line front end.

Exit codes:
    0   success (for `check`: the point is a potential minimizer)
    1   for `check`: the point is ruled out; for `verify`: mismatches found
    2   for `check`: on the boundary at working tolerance
    64  unreadable or malformed input (files, JSON, numbers, usage)
    65  dimension mismatch between points and scenario
    66  scenario pattern not covered by any implemented test
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import bounds as bounds_mod
from . import membership, oracle
from .geometry import BOUNDARY, DimensionMismatchError, INSIDE, OUTSIDE
from .membership import PREDICATE_NAMES, Scenario, UnsupportedPatternError
from .serialize import (
    ScenarioFormatError,
    load_scenario,
    raster_to_csv_text,
    raster_to_svg_text,
    verdict_to_dict,
)

EXIT_INSIDE = 0
EXIT_OUTSIDE = 1
EXIT_BOUNDARY = 2
EXIT_USAGE = 64
EXIT_DIMENSION = 65
EXIT_UNSUPPORTED = 66

_STATE_CODES = {INSIDE: EXIT_INSIDE, OUTSIDE: EXIT_OUTSIDE, BOUNDARY: EXIT_BOUNDARY}


class _Parser(argparse.ArgumentParser):
    # argparse normally exits 2 on usage errors; 2 means "boundary" here
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(obj):
    print(json.dumps(obj, indent=2))


def _json_num(v: float):
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def cmd_check(args) -> int:
    scenario = load_scenario(args.scenario)
    point = np.array(args.point, dtype=float)
    name = args.predicate if args.predicate else membership.route(scenario)
    verdict = membership.evaluate(scenario, point, predicate=name)
    _emit(verdict_to_dict(verdict, predicate=name))
    return _STATE_CODES[verdict.state]


def cmd_region(args) -> int:
    scenario = load_scenario(args.scenario)
    raster = membership.rasterize_region(
        scenario,
        tuple(args.bbox),
        tuple(args.res),
        workers=args.workers,
        predicate=args.predicate,
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(raster_to_csv_text(raster))
    if args.svg:
        with open(args.svg, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(raster_to_svg_text(raster))
    counts = {INSIDE: 0, BOUNDARY: 0, OUTSIDE: 0}
    for cell in raster.cells:
        counts[cell.state] += 1
    _emit(
        {
            "predicate_used": raster.predicate,
            "cells": len(raster.cells),
            "inside": counts[INSIDE],
            "boundary": counts[BOUNDARY],
            "outside": counts[OUTSIDE],
            "out": args.out,
            "svg": args.svg,
        }
    )
    return 0


def cmd_bounds(args) -> int:
    scenario = load_scenario(args.scenario)
    info = bounds_mod.scenario_bound_reports(scenario)
    reports = [
        {
            "bound_value": _json_num(r.bound_value),
            "binding_term": r.binding_term,
            "kappa": r.kappa,
        }
        for r in info["reports"]
    ]
    enclosing = None
    if info["enclosing"] is not None:
        enclosing = {
            "center": [float(v) for v in info["enclosing"].center],
            "radius": info["enclosing"].radius,
        }
    focal = None
    if info["focal"] is not None:
        focal = [float(v) for v in info["focal"]]
    _emit(
        {
            "reports": reports,
            "enclosing": enclosing,
            "focal": focal,
            "notes": info["notes"],
        }
    )
    return 0


def _sample_points(scenario: Scenario, count: int, seed: int) -> np.ndarray:
    """Uniform points over the anchor bounding box, padded enough to
    reach well outside the potential set."""
    anchors = np.array([s.x_star for s in scenario.summands], dtype=float)
    lo = anchors.min(axis=0)
    hi = anchors.max(axis=0)
    spread = float(np.max(hi - lo))
    pad = 1.0 + spread
    if scenario.bound_B is not None and math.isfinite(scenario.bound_B):
        mu_sum = sum(s.params.mu for s in scenario.summands)
        if mu_sum > 0:
            pad = max(pad, scenario.bound_B / mu_sum + spread)
    rng = np.random.default_rng(seed)
    return rng.uniform(lo - pad, hi + pad, (count, anchors.shape[1]))


def _verify_one(scenario: Scenario, points: int, seed: int, predicate=None) -> dict:
    pts = _sample_points(scenario, points, seed)
    report = oracle.cross_check(scenario, pts, predicate=predicate)
    out = {
        "points": report.total,
        "checked": report.checked,
        "boundary_skipped": report.boundary_skipped,
        "indeterminate": report.indeterminate,
        "mismatches": report.mismatches,
    }
    if all(s.params.is_smooth for s in scenario.unknown_summands):
        sweep = oracle.necessity_sweep(scenario, range(seed, seed + 25))
        out["necessity"] = {
            "instances": sweep["instances"],
            "worst_margin": _json_num(sweep["worst_margin"]),
            "failures": sweep["failures"],
        }
    return out


def cmd_verify(args) -> int:
    if args.random:
        results = []
        failed = False
        for k in range(args.seeds):
            scenario = (
                oracle.random_smooth_scenario(k)
                if k % 2 == 0
                else oracle.random_two_nonsmooth_scenario(k)
            )
            res = _verify_one(scenario, args.points, seed=1000 + k)
            res["seed"] = k
            failed = failed or res["mismatches"] or res.get("necessity", {}).get("failures")
            results.append(res)
        _emit({"runs": results, "ok": not failed})
        return 0 if not failed else 1
    if not args.scenario:
        raise ScenarioFormatError("verify needs a scenario file or --random")
    scenario = load_scenario(args.scenario)
    res = _verify_one(scenario, args.points, seed=args.seed, predicate=args.predicate)
    ok = not res["mismatches"] and not res.get("necessity", {}).get("failures")
    res["ok"] = bool(ok)
    _emit(res)
    return 0 if ok else 1


def cmd_focal(args) -> int:
    scenario = load_scenario(args.scenario)
    point = membership.focal_point(scenario.summands)
    smooth = all(s.params.is_smooth for s in scenario.summands)
    _emit(
        {
            "focal": [float(v) for v in point],
            "weighting": "smoothness" if smooth else "moduli",
        }
    )
    return 0


def build_parser() -> _Parser:
    parser = _Parser(
        prog="minsum",
        description=(
            "Decide which points can minimize a sum of convex functions known "
            "only through per-summand minimizers and class constants."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="classify a single candidate point")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--point", nargs="+", type=float, required=True, metavar="COORD")
    p.add_argument("--predicate", choices=PREDICATE_NAMES)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("region", help="rasterize the potential set over a 2-d box")
    p.add_argument("scenario")
    p.add_argument(
        "--bbox", nargs=4, type=float, required=True,
        metavar=("XMIN", "XMAX", "YMIN", "YMAX"),
    )
    p.add_argument("--res", nargs=2, type=int, required=True, metavar=("NX", "NY"))
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--svg", help="SVG output path")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--predicate", choices=PREDICATE_NAMES)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("bounds", help="distance and radius bounds for the set")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="cross-check closed forms against oracles")
    p.add_argument("scenario", nargs="?")
    p.add_argument("--random", action="store_true", help="use generated scenarios")
    p.add_argument("--seeds", type=int, default=6, help="scenario count for --random")
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--predicate", choices=PREDICATE_NAMES)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("focal", help="distinguished interior point of the set")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_focal)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse raises for usage errors (rewritten to 64) and --help (0)
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except DimensionMismatchError as exc:
        print(f"minsum: dimension error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except UnsupportedPatternError as exc:
        print(f"minsum: unsupported pattern: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ScenarioFormatError, OSError, ValueError) as exc:
        print(f"minsum: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
