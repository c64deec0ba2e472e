"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input or dimension error,
3 precision loss, 4 constraints still degenerate after all retries.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path

from . import __version__
from .enumeration import (
    MAX_TYPES,
    IncidenceConstraint,
    count_curves,
    count_with_retries,
    point_count_marks,
    random_line_constraints,
    random_point_constraints,
    type_count,
)
from .errors import Degenerate, DimensionMismatch, PrecisionLoss, TropCurvesError
from .io import curve_input_from_json, random_curve_input
from .moduli import (
    algebraic_pluecker,
    curve_moduli_point,
    trop_algebraic_pluecker,
    verify_commutativity,
)
from .trees import TropicalDegree, check_balancing, curve_from_json, curve_to_json, to_dot, validate_tree
from .tropicalize import cluster_tree, corresponding_curve

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_PRECISION = 3
EXIT_DEGENERATE = 4


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_INPUT, "io_error", str(exc)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, "malformed_json", f"{path}: {exc}") from exc


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _header(args, **extra) -> dict:
    head = {"tool": "tropcurves", "version": __version__, "command": args.command, "seed": args.seed}
    head.update(extra)
    return head


# commands -------------------------------------------------------------------


def cmd_tropicalize(args) -> int:
    inp = curve_input_from_json(_load_json(args.input))
    curve = corresponding_curve(inp)
    bad = validate_tree(curve.tree)
    if bad is not None:
        raise CliError(EXIT_INPUT, "invalid_tree", str(bad))
    if check_balancing(curve) is not None:
        raise CliError(EXIT_INPUT, "unbalanced", "constructed curve is not balanced")
    _emit(
        {
            "header": _header(args),
            "clusters": cluster_tree(inp.a).to_json(),
            "curve": curve_to_json(curve),
        },
        args.out,
    )
    if args.emit_dot:
        Path(args.emit_dot).write_text(to_dot(curve))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.random:
        rng = random.Random(args.seed)
        results = []
        failures = 0
        for k in range(args.random):
            inp = random_curve_input(rng)
            rep = verify_commutativity(inp)
            if not rep.ok:
                failures += 1
                results.append({"case": k, **rep.to_json()})
        _emit({"header": _header(args, cases=args.random), "failures": failures, "failed_cases": results}, args.out)
        return EXIT_OK if failures == 0 else EXIT_FAIL
    if not args.input:
        raise CliError(EXIT_INPUT, "usage", "verify needs an input file or --random N")
    inp = curve_input_from_json(_load_json(args.input))
    curve = None
    if args.curve:
        try:
            curve = curve_from_json(_load_json(args.curve).get("curve", _load_json(args.curve)))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, TropCurvesError):
                raise
            raise CliError(EXIT_INPUT, "malformed_curve", str(exc)) from exc
    rep = verify_commutativity(inp, curve)
    out = {"header": _header(args), **rep.to_json()}
    if not rep.ok:
        out["diff"] = [e.to_json() for e in rep.failures]
    _emit(out, args.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_pluecker(args) -> int:
    inp = curve_input_from_json(_load_json(args.input))
    curve = corresponding_curve(inp)
    trop_alg = trop_algebraic_pluecker(algebraic_pluecker(inp))
    point = curve_moduli_point(curve, inp.i0)
    _emit(
        {
            "header": _header(args),
            "i0": inp.i0,
            "trop_of_algebraic": trop_alg.to_json(),
            "moduli_point": point.to_json(),
            "consistent": trop_alg == point.pluecker,
        },
        args.out,
    )
    return EXIT_OK


def _count_degree(args) -> TropicalDegree:
    if args.degree_file:
        obj = _load_json(args.degree_file)
        r = int(obj.get("r", args.r or 0))
        return TropicalDegree.from_json(obj.get("degree", obj), r)
    if args.r is None or args.d is None:
        raise CliError(EXIT_INPUT, "usage", "count needs --r and --d, or --degree-file")
    return TropicalDegree.projective(args.r, args.d)


def _load_constraints(path: str) -> list[IncidenceConstraint]:
    obj = _load_json(path)
    items = obj.get("constraints", obj) if isinstance(obj, dict) else obj
    if not isinstance(items, list):
        raise CliError(EXIT_INPUT, "malformed_constraints", "expected a list of constraints")
    return [IncidenceConstraint.from_json(c) for c in items]


def cmd_count(args) -> int:
    degree = _count_degree(args)
    r = degree.r
    kwargs = {"threads": args.threads}
    if args.points_file or args.lines_file:
        constraints = _load_constraints(args.points_file or args.lines_file)
        marks = [c.label for c in constraints if c.label not in degree.pi]
        n = len(marks) + len(degree.labels)
        if type_count(n) > MAX_TYPES:
            raise DimensionMismatch(f"infeasible enumeration size: {type_count(n)} combinatorial types")
        try:
            result = count_curves(degree, constraints, **kwargs)
        except Degenerate as exc:
            raise CliError(EXIT_DEGENERATE, "degenerate", f"{exc}; supply generic constraints") from exc
        attempt = 0
    else:
        if args.random_lines:
            marks = [f"l{k}" for k in range(1, args.random_lines + 1)]
            make = lambda rng: random_line_constraints(rng, r, marks)
        else:
            n_marks = point_count_marks(r, degree.d) if degree.is_projective else None
            if n_marks is None:
                raise DimensionMismatch(f"no number of point conditions fits r={r} and this degree")
            marks = [f"p{k}" for k in range(1, n_marks + 1)]
            make = lambda rng: random_point_constraints(rng, r, marks)
        n = len(marks) + len(degree.labels)
        if type_count(n) > MAX_TYPES:
            raise DimensionMismatch(
                f"infeasible enumeration size: {type_count(n)} combinatorial types (limit {MAX_TYPES})"
            )
        try:
            result, constraints, attempt = count_with_retries(
                degree, make, seed=args.seed, retries=args.retries, **kwargs
            )
        except Degenerate as exc:
            raise CliError(EXIT_DEGENERATE, "degenerate", str(exc)) from exc
    out = {
        "header": _header(args, attempt=attempt, r=r, degree=degree.to_json()),
        "constraints": [c.to_json() for c in constraints],
        **result.to_json(),
    }
    _emit(out, args.out)
    return EXIT_OK


# entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="seed for all random choices (default 42)")
    common.add_argument("--threads", type=int, default=None, help="worker threads for counting")
    common.add_argument("--out", default=None, help="write JSON here instead of stdout")
    common.add_argument("--emit-dot", default=None, metavar="PATH", help="also write a DOT rendering")
    common.add_argument("--retries", type=int, default=5, help="re-randomizations on degenerate draws")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="tropcurves", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"tropcurves {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tropicalize", parents=[common], help="tropical curve of a parametrized curve")
    t.add_argument("input")
    t.set_defaults(func=cmd_tropicalize)

    v = sub.add_parser("verify", parents=[common], help="check trop(ev) = tev(trop)")
    v.add_argument("input", nargs="?")
    v.add_argument("--curve", help="tropical curve JSON to check instead of the constructed one")
    v.add_argument("--random", type=int, default=0, metavar="N", help="check N random inputs")
    v.set_defaults(func=cmd_verify)

    pl = sub.add_parser("pluecker", parents=[common], help="tropical Pluecker data and moduli point")
    pl.add_argument("input")
    pl.set_defaults(func=cmd_pluecker)

    c = sub.add_parser("count", parents=[common], help="tropical curve count")
    c.add_argument("--r", type=int)
    c.add_argument("--d", type=int)
    c.add_argument("--degree-file")
    src = c.add_mutually_exclusive_group()
    src.add_argument("--points-file")
    src.add_argument("--lines-file")
    src.add_argument("--random-points", action="store_true", help="random point conditions (default)")
    src.add_argument("--random-lines", type=int, default=0, metavar="K", help="K random line conditions")
    c.set_defaults(func=cmd_count)
    return p


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": {"kind": kind, "message": message, "exit_code": code}}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    if args.retries < 1:
        return _fail(EXIT_INPUT, "usage", "--retries must be at least 1")
    try:
        return args.func(args)
    except CliError as exc:
        return _fail(exc.code, exc.kind, str(exc))
    except PrecisionLoss as exc:
        return _fail(EXIT_PRECISION, exc.code, str(exc))
    except Degenerate as exc:
        return _fail(EXIT_DEGENERATE, exc.code, str(exc))
    except TropCurvesError as exc:
        return _fail(EXIT_INPUT, exc.code, str(exc))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
