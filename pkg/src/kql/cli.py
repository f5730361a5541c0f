"""Command-line interface: ``kql <subcommand> ...``.

Every subcommand prints one canonical JSON document on stdout and a short
summary on stderr. Exit status: 0 success or verdict true, 1 verdict false,
2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

import numpy as np

from . import linalg as la
from . import serialize as ser
from .descent import colength, d_invariance_check, descend_ideal
from .ideals import EquivariantIdeal, adhm_to_ideal, ideal_to_adhm, isotypic_decomposition, witness_module
from .mckay import INF, GroupSpec, character_table, framed_quiver, mckay_quiver
from .monad import (
    build_monad,
    composite_vanishes,
    invariant_sections_check,
    koszul_middle_check,
    monad_fiber_check,
    sample_points,
    support_cycle,
    tangent_dimension,
)
from .pimodule import adhm_to_quiver, is_pi_module, preprojective_residual, quiver_to_adhm
from .stability import (
    StabilityError,
    c_plus_representative,
    concentrate,
    is_semistable,
    is_stable,
    polystable_theta0,
    r_equivalent,
    s_equivalent,
    theta_I,
    theta_zero,
)


class UsageError(ValueError):
    pass


def _emit(obj: dict, summary: str, ok: bool = True) -> int:
    sys.stdout.write(ser.dumps(obj) + "\n")
    sys.stderr.write(summary.rstrip() + "\n")
    return 0 if ok else 1


def _load(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"--input: cannot read {path!r}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ser.SchemaError("$", f"invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _module_from(obj):
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind == "adhm":
        d = ser.parse_adhm(obj)
        return adhm_to_quiver(d, framed_quiver(GroupSpec("A", d.m), max(d.r, 1)))
    if kind == "ideal":
        return adhm_to_quiver(ideal_to_adhm(ser.parse_ideal(obj)))
    return ser.parse_module(obj)


def _group(text: str) -> GroupSpec:
    try:
        return GroupSpec.parse(text)
    except ValueError as exc:
        raise UsageError(f"--group: {exc}") from exc


_POINT = re.compile(r"\(\s*([^(),\s]+)\s*,\s*([^(),\s]+)\s*\)")


def parse_points(text: str) -> list:
    points, pos = [], 0
    text = text.strip()
    while pos < len(text):
        mt = _POINT.match(text, pos)
        if not mt:
            raise UsageError(f"--points: cannot parse {text[pos:]!r}; expected (x,y) pairs")
        try:
            points.append((Fraction(mt.group(1)), Fraction(mt.group(2))))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"--points: invalid coordinate in {mt.group(0)!r}") from exc
        pos = mt.end()
        while pos < len(text) and text[pos] in " ,;":
            pos += 1
    return points


def parse_theta(text: str, v):
    if text == "zero":
        return theta_zero(v)
    if text == "cplus":
        return c_plus_representative(v)
    mt = re.fullmatch(r"I=\{?\s*([0-9,\s]*)\}?", text)
    if not mt:
        raise UsageError("--theta: expected zero, cplus or I=<comma separated vertices>")
    items = [s for s in mt.group(1).replace(" ", "").split(",") if s]
    try:
        return theta_I({int(s) for s in items}, v)
    except StabilityError as exc:
        raise UsageError(f"--theta: {exc}") from exc


def _dims_list(mod) -> list:
    return list(mod.dim_vector())


# --------------------------------------------------------------------------
# subcommands


def cmd_mckay(args) -> int:
    g = _group(args.group)
    ct = character_table(g)
    q = mckay_quiver(ct)
    adj = q.adjacency()
    cartan = 2 * np.eye(len(ct.dims), dtype=int) - adj
    null = bool(np.all(cartan @ np.array(ct.dims, dtype=int) == 0))
    arrows = q.arrows if args.r is None else framed_quiver(g, args.r).arrows
    out = {
        "schema": ser.SCHEMA,
        "kind": "mckay_quiver",
        "group": str(g),
        "order": g.order,
        "vertices": [str(v) for v in ([INF] if args.r else []) + list(q.vertices)],
        "delta": list(ct.dims),
        "adjacency": adj.tolist(),
        "arrows": [{"name": a.name, "tail": str(a.tail), "head": str(a.head), "eps": a.eps} for a in arrows],
        "cartan_delta_zero": null,
    }
    return _emit(out, f"{g}: {len(ct.dims)} vertices, delta = {list(ct.dims)}, C.delta = 0: {null}", null)


def cmd_witness(args) -> int:
    g = _group(args.group)
    if not g.is_cyclic:
        raise UsageError("--group: witnesses are built for cyclic groups")
    if args.points is not None:
        points = parse_points(args.points)
    elif args.n is not None:
        from .corpus import distinct_orbit_points

        points = distinct_orbit_points(np.random.default_rng(args.seed), args.n, g.m)
    else:
        raise UsageError("--points or --n is required")
    try:
        mod = witness_module(points, g, args.r)
    except ValueError as exc:
        raise UsageError(f"--points: {exc}") from exc
    return _emit(ser.module_json(mod), f"witness over {g}: dim {mod.dim_vector()}, r = {args.r}")


def cmd_check_module(args) -> int:
    mod = _module_from(_load(args.input))
    res = preprojective_residual(mod)
    ok = is_pi_module(mod)
    norm = max((float(np.abs(np.asarray(m, dtype=complex)).max()) for m in res.values() if m.size), default=0.0)
    out = {
        "schema": ser.SCHEMA,
        "kind": "module_check",
        "dims": _dims_list(mod),
        "residual_zero": ok,
        "residual_max": ser._float(norm),
        **ser.field_json(mod.field),
    }
    return _emit(out, f"dim {mod.dim_vector()}: preprojective residual {'vanishes' if ok else 'is nonzero'}", ok)


def cmd_stability(args) -> int:
    mod = _module_from(_load(args.input))
    t = parse_theta(args.theta, mod.v)
    stable, semi = is_stable(mod, t), is_semistable(mod, t)
    out = {
        "schema": ser.SCHEMA,
        "kind": "stability",
        "theta": ser.stability_json(t),
        "dims": _dims_list(mod),
        "stable": stable,
        "semistable": semi,
    }
    return _emit(out, f"theta={args.theta}: stable={stable}, semistable={semi}", stable)


def cmd_concentrate(args) -> int:
    mod = _module_from(_load(args.input))
    con, mult = polystable_theta0(mod)
    out = ser.module_json(con)
    out["vertex_simple_multiplicities"] = list(mult)
    out["stable_theta0"] = is_stable(con, theta_zero(con.v))
    return _emit(out, f"concentrated dim {con.dim_vector()}, removed simples {list(mult)}")


def cmd_requiv(args) -> int:
    if len(args.input) != 2:
        raise UsageError("--input: give exactly two module files")
    m1, m2 = (_module_from(_load(p)) for p in args.input)
    if m1.quiver != m2.quiver:
        raise UsageError("--input: modules live on different quivers")
    r_eq = r_equivalent(m1, m2, seed=args.seed)
    s_eq = s_equivalent(m1, m2, seed=args.seed)
    out = {"schema": ser.SCHEMA, "kind": "equivalence", "r_equivalent": r_eq, "s_equivalent": s_eq}
    if r_eq and m1.quiver.group.is_cyclic and m1.quiver.r == 1:
        try:
            out["d_invariant"] = d_invariance_check(m1, m2, seed=args.seed)
        except ValueError:
            pass
    return _emit(out, f"R-equivalent={r_eq}, S-equivalent={s_eq}", r_eq)


def cmd_monad_check(args) -> int:
    mod = _module_from(_load(args.input))
    if not mod.quiver.group.is_cyclic:
        raise UsageError("--input: monads are built from cyclic-group data")
    d = quiver_to_adhm(mod)
    md = build_monad(d)
    checks = {"composite_zero": composite_vanishes(md)}
    pts = sample_points(args.samples, args.seed) + sample_points(args.infinity_samples, args.seed + 1, at_infinity=True)
    results = [monad_fiber_check(md, p, args.tol) for p in pts]
    checks["a_injective"] = all(r[0] for r in results)
    checks["b_surjective"] = all(r[1] for r in results)
    if d.r == 0 and d.weight_dims()[0] == 0:
        checks["koszul_middle"] = koszul_middle_check(d, sample_points(args.samples, args.seed + 2), args.tol)
        if d.dim == 1:
            checks["no_invariant_sections"] = invariant_sections_check(d, args.degree_bound or 6)
    ok = all(checks.values())
    out = {
        "schema": ser.SCHEMA,
        "kind": "monad_check",
        "dims": list(md.dims),
        "points": len(pts),
        "seed": args.seed,
        "tol": args.tol,
        "checks": checks,
    }
    if args.emit_monad:
        out["monad"] = ser.monad_json(md)
    return _emit(out, "monad checks: " + ", ".join(f"{k}={v}" for k, v in checks.items()), ok)


def _ideal_from_args(args) -> EquivariantIdeal:
    if args.generators is not None:
        g = _group(args.group or "A1")
        if not g.is_cyclic:
            raise UsageError("--group: ideals are handled for cyclic groups")
        gens = [s for s in args.generators.split(",") if s.strip()]
        try:
            return EquivariantIdeal.from_generators(gens, g.m)
        except ValueError as exc:
            raise UsageError(f"--generators: {exc}") from exc
    obj = _load(args.input)
    if isinstance(obj, dict) and obj.get("kind") == "ideal":
        return ser.parse_ideal(obj)
    mod = _module_from(obj)
    return adhm_to_ideal(quiver_to_adhm(concentrate(mod)), args.degree_bound)


def cmd_ideal2adhm(args) -> int:
    ideal = _ideal_from_args(args)
    d = ideal_to_adhm(ideal)
    out = ser.adhm_json(d)
    out["isotypic"] = list(isotypic_decomposition(ideal))
    return _emit(out, f"colength {ideal.colength}, isotypic {list(isotypic_decomposition(ideal))}")


def cmd_adhm2ideal(args) -> int:
    obj = _load(args.input)
    if isinstance(obj, dict) and obj.get("kind") == "adhm":
        d = ser.parse_adhm(obj)
    else:
        d = quiver_to_adhm(_module_from(obj))
    ideal = adhm_to_ideal(d, args.degree_bound)
    out = ser.ideal_json(ideal)
    out["isotypic"] = list(isotypic_decomposition(ideal))
    return _emit(out, f"ideal of colength {ideal.colength}: {', '.join(ideal.generator_strings())}")


def cmd_descend(args) -> int:
    ideal = _ideal_from_args(args)
    j = descend_ideal(ideal, args.degree_bound)
    n = colength(j)
    return _emit(ser.invariant_ideal_json(j, n), f"descended ideal of colength {n}")


def cmd_tangent_dim(args) -> int:
    mod = _module_from(_load(args.input))
    dim = tangent_dimension(mod)
    expected = 2 * mod.quiver.r * mod.dims[0]
    out = {
        "schema": ser.SCHEMA,
        "kind": "tangent_dimension",
        "dims": _dims_list(mod),
        "r": mod.quiver.r,
        "tangent_dimension": dim,
        "expected_2rn": expected,
    }
    return _emit(out, f"tangent dimension {dim} (2rn = {expected})", dim == expected)


def cmd_support(args) -> int:
    obj = _load(args.input)
    if isinstance(obj, dict) and obj.get("kind") == "adhm":
        d = ser.parse_adhm(obj)
    else:
        d = quiver_to_adhm(_module_from(obj))
    cycle = support_cycle(d, args.tol)
    return _emit(ser.support_json(cycle), f"support cycle of total multiplicity {cycle.total}")


COMMANDS = {
    "mckay": cmd_mckay,
    "check-module": cmd_check_module,
    "stability": cmd_stability,
    "concentrate": cmd_concentrate,
    "requiv": cmd_requiv,
    "monad-check": cmd_monad_check,
    "ideal2adhm": cmd_ideal2adhm,
    "adhm2ideal": cmd_adhm2ideal,
    "descend": cmd_descend,
    "witness": cmd_witness,
    "tangent-dim": cmd_tangent_dim,
    "support": cmd_support,
}


def _positive_float(text: str) -> float:
    try:
        val = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected a number") from exc
    if not val > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return val


def _nonneg_int(text: str) -> int:
    try:
        val = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected an integer") from exc
    if val < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return val


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kql", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, input_=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--tol", type=_positive_float, default=la.DEFAULT_TOL)
        p.add_argument("--seed", type=_nonneg_int, default=0)
        if input_:
            p.add_argument("--input", default="-", help="JSON file, '-' for stdin")
        return p

    p = add("mckay", "McKay quiver of a group", input_=False)
    p.add_argument("--group", required=True)
    p.add_argument("--r", type=int, default=None, help="also list framing arrows")

    p = add("witness", "module of n free orbits", input_=False)
    p.add_argument("--group", required=True)
    p.add_argument("--points", default=None, help='e.g. "(1,2),(3,1)"')
    p.add_argument("--n", type=_nonneg_int, default=None, help="random orbits (uses --seed)")
    p.add_argument("--r", type=int, default=1)

    add("check-module", "preprojective relations")
    p = add("stability", "stability verdicts")
    p.add_argument("--theta", default="zero")
    add("concentrate", "theta_0 concentrated module")
    p = sub.add_parser("requiv", help="R- and S-equivalence")
    p.add_argument("--input", action="append", default=[], required=True)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--tol", type=_positive_float, default=la.DEFAULT_TOL)

    p = add("monad-check", "monad composite and fibre ranks")
    p.add_argument("--samples", type=_nonneg_int, default=200)
    p.add_argument("--infinity-samples", type=_nonneg_int, default=20)
    p.add_argument("--degree-bound", type=_nonneg_int, default=None)
    p.add_argument("--emit-monad", action="store_true")

    for name, help_text in (("ideal2adhm", "ideal to ADHM datum"), ("descend", "invariant-ring descent")):
        p = add(name, help_text)
        p.add_argument("--group", default=None)
        p.add_argument("--generators", default=None, help='e.g. "x^2,y"')
        p.add_argument("--degree-bound", type=_nonneg_int, default=None)
    p = add("adhm2ideal", "ADHM datum to ideal")
    p.add_argument("--degree-bound", type=_nonneg_int, default=None)
    add("tangent-dim", "dimension of the quiver variety at a module")
    add("support", "support cycle of a rank-one datum")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return COMMANDS[args.command](args)
    except (ser.SchemaError, UsageError, StabilityError, ValueError, NotImplementedError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
