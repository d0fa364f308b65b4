"""Command-line front end: ``unitdist <subcommand> [options]``.

Exit codes: 0 success, 1 infeasible query (disconnected body, invalid path),
2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import oracle, squares, walker
from .bodies import Hyperrectangle, body_from_json
from .geometry import Tolerances
from .paths import (PathError, StepPath, find_path, hypercube_bound, hyperrectangle_bound, is_connected,
                    rectangle_bound)

__all__ = ["main", "run", "build_parser"]


class InputError(ValueError):
    """Bad command-line input (exit code 2)."""


class Infeasible(RuntimeError):
    """Well-formed query without a solution (exit code 1)."""


def _point(text: str | None, name: str) -> np.ndarray:
    if text is None:
        raise InputError(f"--{name} is required")
    try:
        return np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise InputError(f"--{name} must be comma-separated numbers") from exc


def _load_json(text: str):
    text = text.strip()
    if not text.startswith(("{", "[")):
        with open(text) as fh:
            text = fh.read()
    return json.loads(text)


def _body(args):
    if not args.body:
        raise InputError("--body is required")
    try:
        return body_from_json(_load_json(args.body))
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read body: {exc}") from exc


def _tol(args) -> Tolerances:
    return Tolerances(geom_eps=args.tol, bisect_eps=args.bisect_eps)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, out)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------------------- subcommands


def cmd_connect(args) -> int:
    v = is_connected(_body(args), _tol(args))
    _emit(_json(v.to_json()), args.out)
    return 0


def cmd_path(args) -> int:
    body, tol = _body(args), _tol(args)
    u, v = _point(args.u, "u"), _point(args.v, "v")
    verdict = is_connected(body, tol)
    if not verdict.connected:
        raise Infeasible(f"body is not connected ({verdict.reason})")
    path = find_path(body, u, v, tol)
    ok, bad = oracle.validate_path(body, path, tol.geom_eps)
    if not ok:
        raise Infeasible(f"constructed path failed validation: {bad[:3]}")
    _emit(_json(path.to_json()), args.out)
    return 0


def cmd_bound(args) -> int:
    if args.dim is not None and args.body is None and args.l is None:
        b = hypercube_bound(args.dim)
    else:
        if args.l is not None:
            l = _point(args.l, "l")
        else:
            body = _body(args)
            if not isinstance(body, Hyperrectangle):
                raise InputError("bound needs a hyperrectangle body, --l or --dim")
            l = body.l
        if abs(np.linalg.norm(l) - 2.0) > 1e-7:
            raise InputError("diameter bounds are stated for |l| = 2")
        pos = l[l > 0]
        if args.split is not None:
            b = hyperrectangle_bound(l, [int(t) for t in args.split.split(",")])
        elif len(pos) == 2:
            b = rectangle_bound(float(pos.max()), float(pos.min()))
        elif np.allclose(l, l[0]) and len(l) >= 2:
            b = hypercube_bound(len(l))
        else:
            b = hyperrectangle_bound(l)
    _emit(_json(b.to_json()), args.out)
    return 0


def cmd_components(args) -> int:
    if args.l is None:
        raise InputError("--l is required")
    l = float(args.l)
    if args.svg:
        _emit(squares.emit_region_svg(l), args.svg)
    if args.u is not None:
        lab = squares.classify_point(l, _point(args.u, "u"))
        _emit(_json({"regime": lab.regime, "component_id": lab.component_id, "status": squares.STATUS}),
              args.out)
        return 0
    t = np.linspace(0.0, l, args.grid)
    P = np.array([(x, y) for x in t for y in t])
    _emit(squares.labels_csv(l, P), args.out)
    return 0


def cmd_walk(args) -> int:
    body = _body(args)
    start = _point(args.start, "start")
    cfg = walker.WalkConfig(body, start, args.steps, args.runs, args.seed, args.trajectories)
    ens = walker.run_ensemble(cfg)
    _emit(walker.ensemble_csv(ens), args.out)
    if body.dim == 2 and (args.hist or args.svg):
        H, xe, ye = walker.histogram2d(ens, args.bins)
        if args.hist:
            _emit(walker.histogram_csv(H, xe, ye), args.hist)
        if args.svg:
            lo, side = walker._square_extent(body)
            _emit(walker.heatmap_svg(H, start=start, extent=(lo, side)), args.svg)
    return 0


def cmd_oracle(args) -> int:
    body = _body(args)
    pairs = []
    if args.u is not None or args.v is not None:
        pairs.append((_point(args.u, "u"), _point(args.v, "v")))
    rep = oracle.oracle_report(body, args.grid_h, args.edge_delta, pairs, allow_coarse=args.allow_coarse)
    _emit(rep.to_csv(), args.out)
    return 0


def cmd_validate(args) -> int:
    body = _body(args)
    if not args.path:
        raise InputError("--path is required")
    try:
        path = StepPath.from_json(_load_json(args.path))
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"cannot read path: {exc}") from exc
    ok, bad = oracle.validate_path(body, path, args.tol)
    report = {"valid": ok, "steps": path.steps,
              "violations": [{"kind": b.kind, "index": b.index, "value": b.value} for b in bad]}
    _emit(_json(report), args.out)
    return 0 if ok else 1


# --------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unitdist", description="Unit-distance graphs of convex bodies.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--body", help="body descriptor: inline JSON or a JSON file")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--tol", type=float, default=1e-9, help="membership / unit-length slack (default 1e-9)")
    common.add_argument("--bisect-eps", type=float, default=1e-12,
                        help="relative bisection resolution (default 1e-12)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("connect", parents=[common], help="connectivity verdict as JSON")
    s.set_defaults(func=cmd_connect)

    s = sub.add_parser("path", parents=[common], help="unit-step path between two points as JSON")
    s.add_argument("--u", required=True)
    s.add_argument("--v", required=True)
    s.set_defaults(func=cmd_path)

    s = sub.add_parser("bound", parents=[common], help="diameter bound for a box with |l| = 2")
    s.add_argument("--l", help="side lengths, comma separated")
    s.add_argument("--dim", type=int, help="hypercube dimension (side 2/sqrt(d))")
    s.add_argument("--split", help="index set I for the hyperrectangle bound")
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("components", parents=[common], help="component labels in a small square")
    s.add_argument("--l", required=True, help="side length of the square")
    s.add_argument("--u", help="classify a single point")
    s.add_argument("--grid", type=int, default=21, help="points per axis for the CSV dump (default 21)")
    s.add_argument("--svg", help="write the region picture here")
    s.set_defaults(func=cmd_components)

    s = sub.add_parser("walk", parents=[common], help="random-walk ensemble")
    s.add_argument("--start", required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--runs", type=int, default=20000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--bins", type=int, default=50)
    s.add_argument("--hist", help="write the binned density CSV here")
    s.add_argument("--svg", help="write a heatmap SVG here")
    s.add_argument("--trajectories", action="store_true", help="emit every step, not just final positions")
    s.set_defaults(func=cmd_walk)

    s = sub.add_parser("oracle", parents=[common], help="grid-graph report as CSV")
    s.add_argument("--grid-h", type=float, default=0.02)
    s.add_argument("--edge-delta", type=float, default=None, help="edge slack (default 2h)")
    s.add_argument("--allow-coarse", action="store_true", help="allow delta < h sqrt(d)")
    s.add_argument("--u")
    s.add_argument("--v")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("validate", parents=[common], help="check a StepPath JSON against a body")
    s.add_argument("--path", required=True, help="StepPath JSON (inline or file)")
    s.set_defaults(func=cmd_validate)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1
    except PathError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
