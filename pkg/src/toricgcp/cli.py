"""Command line front end: ``toricgcp <subcommand> problem.json [flags]``.

Machine-readable JSON goes to stdout, a short summary to stderr.
Exit codes: 0 ok, 1 malformed input, 2 violated mathematical
precondition, 3 retries exhausted.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys

import jsonschema

from .field import FieldError, field_from_spec
from .fill import FillError, certify, irreducible_fill
from .gcp import (GcpError, GcpProblem, chow_form, gcp, simplex_vertices,
                  twisted_chow_support)
from .geometry import (DegenerateLiftingError, GeometryError, as_tuple, convex_hull,
                       minkowski_sum, mixed_volume)
from .poly import Poly, PolyError, support_of
from .resultant import (DEFAULT_CAP, DEFAULT_RETRIES, MatrixTooLarge, ResultantError,
                        UnluckySpecialization, toric_resultant)
from .rootfind import SplitError, StageError, solve

EXIT_SCHEMA, EXIT_MATH, EXIT_RETRY = 1, 2, 3

_POINT = {"type": "array", "items": {"type": "integer"}}
_SUPPORT = {"type": "array", "items": _POINT, "minItems": 1}
_TUPLE = {"type": "array", "items": _SUPPORT}
_POLY = {
    "oneOf": [
        {"type": "string"},
        {"type": "object", "required": ["vars", "terms"],
         "properties": {
             "vars": {"type": "array", "items": {"type": "string"}},
             "terms": {"type": "array", "items": {
                 "type": "object", "required": ["exp", "coeff"],
                 "properties": {"exp": _POINT,
                                "coeff": {"type": ["string", "integer"]}}}}}},
    ]
}
PROBLEM_SCHEMA = {
    "type": "object",
    "required": ["n"],
    "anyOf": [{"required": ["polynomials"]}, {"required": ["E"]}],
    "properties": {
        "n": {"type": "integer", "minimum": 1, "maximum": 4},
        "field": {"oneOf": [
            {"const": "Q"},
            {"type": "object", "required": ["GFp"],
             "properties": {"GFp": {"type": "integer", "minimum": 2}}},
        ]},
        "vars": {"type": "array", "items": {"type": "string"}},
        "polynomials": {"type": "array", "items": _POLY},
        "E": _TUPLE,
        "A": _SUPPORT,
        "D": _TUPLE,
        "seed": {"type": "integer", "minimum": 0},
    },
}


class InputError(ValueError):
    pass


class Problem:
    """A validated problem file."""

    def __init__(self, data: dict, field_override=None):
        try:
            jsonschema.validate(data, PROBLEM_SCHEMA)
        except jsonschema.ValidationError as err:
            raise InputError(f"schema: {err.message}") from err
        self.data = data
        self.n = data["n"]
        self.field = field_from_spec(field_override or data.get("field", "Q"))
        self.seed = data.get("seed", 0)
        self.vars = tuple(data.get("vars") or self._default_vars())
        if len(self.vars) < self.n:
            raise InputError("fewer variables than n")
        self.xvars = self.vars[:self.n]
        self.polys = tuple(self._poly(p) for p in data.get("polynomials", []))
        self.E = as_tuple(data["E"]) if "E" in data else None
        self.A = [tuple(a) for a in data["A"]] if "A" in data else None
        self.D = as_tuple(data["D"]) if "D" in data else None
        for name, val in (("E", self.E), ("D", self.D)):
            if val is not None and any(len(p) != self.n for s in val for p in s):
                raise InputError(f"{name} has points of the wrong dimension")
        if self.A is not None and any(len(a) != self.n for a in self.A):
            raise InputError("A has points of the wrong dimension")

    def _default_vars(self):
        n = self.data["n"]
        return ("x", "y", "z", "w")[:n] if n <= 4 else tuple(f"x{i + 1}" for i in range(n))

    def _poly(self, p) -> Poly:
        try:
            if isinstance(p, str):
                return Poly.parse(p, self.vars, self.field)
            q = Poly.from_json(p, self.field)
        except (PolyError, ValueError) as err:
            raise InputError(f"bad polynomial: {err}") from err
        if tuple(q.vars) != self.vars:
            q = q.with_vars(self.vars)
        return q

    def supports(self) -> tuple:
        if self.E is not None:
            return self.E
        if len(self.polys) != self.n:
            raise InputError(f"need {self.n} polynomials or explicit E")
        return tuple(tuple(sorted(support_of(p, self.xvars))) for p in self.polys)

    def square_system(self) -> tuple:
        if len(self.polys) != self.n or self.vars != self.xvars:
            raise InputError(f"need {self.n} polynomials in exactly {self.n} variables")
        return self.polys


def _pts(ss):
    return [[list(p) for p in s] for s in ss]


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise InputError(f"{path}: {err}") from err


def _resolve_A(arg, prob: Problem, E):
    if arg is None:
        return prob.A
    if arg == "simplex":
        return list(simplex_vertices(prob.n))
    if arg == "cube":
        return [tuple(p) for p in itertools.product((0, 1), repeat=prob.n)]
    if arg == "auto":
        P = convex_hull(minkowski_sum(E)).vertices
        A = twisted_chow_support(P)
        if A is None:
            raise GcpError("no catalog support is compatible with the Newton polytope")
        return list(A)
    try:
        val = json.loads(arg)
    except json.JSONDecodeError:
        val = _load_json(arg)
    return [tuple(a) for a in val]


def _resolve_D(arg, prob: Problem):
    if arg is None or arg == "auto":
        return prob.D
    try:
        val = json.loads(arg)
    except json.JSONDecodeError:
        val = _load_json(arg)
    if isinstance(val, dict):
        val = val["D"]
    return as_tuple(val)


def cmd_mixedvol(prob: Problem, args):
    E = prob.supports()
    mv = mixed_volume(E, seed=args.seed, max_retries=args.max_retries)
    return {"E": _pts(E), "mixed_volume": mv}, f"M(E) = {mv}"


def cmd_fill(prob: Problem, args):
    E = prob.supports()
    D = _resolve_D(args.candidate, prob) if args.candidate else (prob.D or irreducible_fill(E))
    out = certify(D, E).to_json()
    verdict = "fills" if out.get("fills") else "does not fill"
    return out, f"D {verdict} E"


def cmd_resultant(prob: Problem, args):
    if len(prob.polys) != prob.n + 1:
        raise InputError(f"resultant needs {prob.n + 1} polynomials")
    sup = prob.E or tuple(tuple(sorted(support_of(p, prob.xvars))) for p in prob.polys)
    if len(sup) != prob.n + 1:
        raise InputError(f"resultant needs {prob.n + 1} supports")
    rv = toric_resultant(sup, prob.polys, prob.xvars, seed=args.seed,
                         max_retries=args.max_retries, cap=args.cap)
    out = {"resultant": rv.poly.to_json(), "scalar": prob.field.to_str(rv.scalar),
           "matrix_size": rv.matrix_size, "method": rv.method, "seed": rv.seed,
           "attempt": rv.attempt, "perturbed": rv.perturbed}
    return out, f"resultant with {len(rv.poly)} terms, matrix {rv.matrix_size}"


def _problem(prob: Problem, args) -> GcpProblem:
    F = prob.square_system()
    E = prob.E
    A = _resolve_A(getattr(args, "A", None), prob, prob.supports())
    D = _resolve_D(getattr(args, "fill", None), prob)
    return GcpProblem.build(F, E, A, D)


def cmd_gcp(prob: Problem, args):
    p = _problem(prob, args)
    r = gcp(p, seed=args.seed, max_retries=args.max_retries, cap=args.cap)
    out = {"mixed_volume": r.mixed_volume, "k": r.k, "chow_vanishes": r.k > 0,
           "F_A": r.F_A.to_json(), "F_A_scalar": prob.field.to_str(r.F_A_scalar),
           "Ch_A": r.Ch_A.to_json(), "A": [list(a) for a in r.A], "D": _pts(r.D),
           "s_degree": r.s_degree, "expected_s_degree": r.expected_s_degree,
           "H_terms": len(r.H), "matrix_size": r.matrix_size, "seed": r.seed,
           "attempt": r.attempt}
    if args.emit_H:
        out["H"] = r.H.to_json()
    return out, f"k = {r.k}, deg F_A = {r.mixed_volume}, H has {len(r.H)} terms"


def cmd_chow(prob: Problem, args):
    F = prob.square_system()
    A = _resolve_A(args.A, prob, prob.supports())
    ch = chow_form(F, prob.E, A, seed=args.seed, max_retries=args.max_retries, cap=args.cap)
    zero = ch.is_zero()
    used = A if A is not None else simplex_vertices(prob.n)
    out = {"chow_form": ch.to_json(), "vanishes": zero, "A": [list(a) for a in used]}
    return out, "Chow form vanishes identically" if zero else f"Chow form: {ch}"


def cmd_solve(prob: Problem, args):
    F = prob.square_system()
    A = _resolve_A(args.A, prob, prob.supports())
    D = _resolve_D(args.fill, prob)
    rep = solve(F, prob.E, A, D, seed=args.seed, max_retries=args.max_retries, cap=args.cap)
    out = rep.to_json(emit_H=args.emit_H)
    n_torus = sum(r.status == "torus-root" for r in rep.roots)
    msg = (f"M(E) = {rep.result.mixed_volume}, k = {rep.result.k}, "
           f"{len(rep.split.factors)} linear factors, {n_torus} verified torus roots")
    if rep.split.remainder_degree:
        msg += (f"; remainder of degree {rep.split.remainder_degree} has no roots in this "
                "field (try --field gfp:P)")
    return out, msg


COMMANDS = {
    "mixedvol": cmd_mixedvol,
    "fill": cmd_fill,
    "resultant": cmd_resultant,
    "gcp": cmd_gcp,
    "chow": cmd_chow,
    "solve": cmd_solve,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toricgcp", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("problem", help="problem file (JSON)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--field", default=None, help="Q or gfp:P")
    common.add_argument("--max-retries", type=int, default=DEFAULT_RETRIES)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP)
    common.add_argument("--emit-H", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("mixedvol", parents=[common])
    f = sub.add_parser("fill", parents=[common])
    f.add_argument("--candidate", help="JSON file (or inline JSON) with a candidate D")
    sub.add_parser("resultant", parents=[common])
    for name in ("gcp", "chow", "solve"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--A", default=None, help="simplex, cube, auto, or explicit JSON")
        if name != "chow":
            p.add_argument("--fill", default=None, help="auto or explicit JSON")
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        data = _load_json(args.problem)
        prob = Problem(data, args.field)
        if args.seed is None:
            args.seed = prob.seed
        out, msg = COMMANDS[args.command](prob, args)
    except (InputError, FieldError, jsonschema.ValidationError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_SCHEMA
    except Exception as err:  # classify by root cause
        cause = err.cause if isinstance(err, StageError) else err
        if isinstance(cause, (UnluckySpecialization, DegenerateLiftingError, MatrixTooLarge)):
            code = EXIT_RETRY
        elif isinstance(cause, (GcpError, FillError, GeometryError, ResultantError, SplitError,
                                PolyError)):
            code = EXIT_MATH
        else:
            raise
        print(f"error: {err}", file=sys.stderr)
        return code
    json.dump(out, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")
    print(msg, file=sys.stderr)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
