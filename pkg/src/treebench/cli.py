"""Command-line front end.

One verb per operation, human-readable text by default, a JSON envelope
behind --json.  Exit codes: 0 success, 1 domain/input error, 2 parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .errors import ParseError, WorkbenchError
from .words import FiniteWord, Mode
from .groups import (
    GammaTable,
    VnTable,
    abelianize_gamma,
    act,
    classify_normal_closure,
    cocycle_degree,
    compose,
    factor_commuting,
    fixed_structure,
    inverse,
    kernel_permutation,
    lift,
    normalize,
    pi_project,
    sign_vn,
)
from .algebra import (
    AlgebraMode,
    Functional,
    fock_apply,
    is_unitary,
    matrix_check,
    phi_functional,
)
from .crossed import Expectation, cp_expectation, cp_mul, homogeneous_decompose
from .states import (
    GammaGround,
    check_ground_condition,
    check_kms_condition,
    check_trace_invariance,
    eval_state,
)
from .parsing import (
    parse_algebra_element,
    parse_algebra_matrix,
    parse_boundary_point,
    parse_cp_element,
    parse_gamma_table,
    parse_simple_function,
    parse_state_spec,
    parse_table,
    parse_trace,
    parse_vn_table,
    parse_word,
)


def _algebra_mode(args) -> AlgebraMode | None:
    name = getattr(args, "mode", None)
    if name is None:
        return None
    return {
        "toeplitz": AlgebraMode.toeplitz,
        "cuntz": AlgebraMode.cuntz,
        "infinite": AlgebraMode.infinite,
    }[name](args.n)


def _point_or_word(text: str, n: int):
    if "(" in text:
        return parse_boundary_point(text, n)
    return parse_word(text, n)


def _fmt_fock(out: dict) -> str:
    if not out:
        return "0"
    items = sorted(out.items(), key=lambda kv: kv[0].shortlex)
    return " + ".join(f"d[{w}]" if str(c) == "1" else f"({c})*d[{w}]" for w, c in items)


def _perm_as_payload(perm) -> dict:
    return {"pairs": [[str(a), str(b)] for a, b in perm.pairs],
            "cycles": str(perm)}


class _Output:
    """Accumulates the command result for text or JSON rendering."""

    def __init__(self, args):
        self.json = args.json
        self.n = getattr(args, "n", None)
        self.mode = getattr(args, "mode", None)
        self.lines: list[str] = []
        self.payload = None

    def emit(self, text: str, payload=None) -> None:
        self.lines.append(text)
        self.payload = payload if payload is not None else text

    def render(self) -> str:
        if self.json:
            envelope = {
                "version": __version__,
                "n": self.n,
                "mode": self.mode,
                "payload": self.payload,
            }
            return json.dumps(envelope, sort_keys=True)
        return "\n".join(self.lines)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treebench",
        description="exact workbench for prefix-replacement groups and their "
                    "symbolic operator algebras")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="alphabet size (default 2)")
    common.add_argument("--json", action="store_true", help="JSON envelope output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--depth", type=int, default=3, help="depth for randomized suites")
    common.add_argument("--t", type=str, default=None, help="rational value for t")
    common.add_argument("--mode", choices=["toeplitz", "cuntz", "infinite"], default=None,
                        help="algebra flavour (default: inferred)")
    common.add_argument("--trace", type=str, default="canonical", help="trace spec")
    common.add_argument("--state", type=str, default=None, help="state spec")

    sub = parser.add_subparsers(dest="verb", required=True)

    def add(verb, *names, help=""):
        p = sub.add_parser(verb, parents=[common], help=help)
        for name in names:
            p.add_argument(name)
        return p

    add("normalize", "table", help="canonical form of a table")
    add("compose", "g", "h", help="table of g after h")
    add("inv", "table", help="inverse table")
    add("act", "table", "point", help="apply a table to a word or boundary point")
    add("pi", "table", help="project a G table to its V table")
    add("lift", "table", help="canonical section from a V table to a G table")
    add("sign", "table", help="Z/2 class of a V table")
    add("ab", "table", help="Z/2 abelianization class of a G table")
    add("classify", "table", help="normal closure of a G table element")
    add("factor", "h", "g", help="split g = c.k with c commuting with the permutation h")
    add("fixed", "table", help="identity cylinders and fixed vertices of a G table")
    add("cocycle", "table", "point", help="length cocycle of the row applying at a point")
    add("alg-eval", "expr", help="normal form of an algebra expression")
    add("alg-equal", "a", "b", help="equality of two algebra expressions")
    add("unitary", "expr", help="is the element unitary?")
    add("fock", "expr", "word", help="apply an element to a basis vector")
    p = add("phi", "expr", help="evaluate a distinguished functional")
    p.add_argument("--which", choices=["toeplitz-kms", "cuntz-kms", "ground"],
                   default="toeplitz-kms")
    add("matrix-check", "A", "B", "C", "expected",
        help="verify A.B.C = expected entrywise (JSON arrays of element strings)")
    add("cp-mul", "x", "y", help="product of crossed-product elements")
    p = add("cp-expect", "x", help="conditional expectation of a crossed-product element")
    p.add_argument("--which", choices=["functions", "sgroup"], default="functions")
    add("grade", "x", help="homogeneous decomposition of a crossed-product element")
    add("kms-eval", "statespec", "x", help="value of a state on an element")
    add("kms-check", "statespec", "a", "b", help="check the equilibrium identity")
    add("ground-check", "statespec", "a", "b",
        help="check annihilation of a negative-degree homogeneous element")
    add("trace-check", "g", "h", help="conjugation invariance of a trace (--trace)")
    p = add("selftest", help="run the acceptance suites")
    p.add_argument("--only", type=str, default=None, help="comma-separated criterion ids")
    return parser


def _dispatch(args, out: _Output) -> int:
    verb = args.verb
    n = args.n

    if verb == "normalize":
        g = parse_table(args.table)
        out.emit(str(normalize(g)))
    elif verb == "compose":
        g, h = parse_table(args.g), parse_table(args.h)
        out.emit(str(compose(g, h)))
    elif verb == "inv":
        out.emit(str(inverse(parse_table(args.table))))
    elif verb == "act":
        g = parse_table(args.table)
        out.emit(str(act(g, _point_or_word(args.point, g.n))))
    elif verb == "pi":
        out.emit(str(pi_project(parse_gamma_table(args.table))))
    elif verb == "lift":
        out.emit(str(lift(parse_vn_table(args.table))))
    elif verb == "sign":
        out.emit(str(sign_vn(parse_vn_table(args.table))))
    elif verb == "ab":
        out.emit(str(abelianize_gamma(parse_gamma_table(args.table))))
    elif verb == "classify":
        out.emit(classify_normal_closure(parse_gamma_table(args.table)))
    elif verb == "factor":
        h_table = parse_gamma_table(args.h)
        perm = kernel_permutation(h_table)
        if perm is None:
            raise WorkbenchError("h must be a finite permutation (a kernel element)")
        c, k = factor_commuting(perm, parse_gamma_table(args.g))
        out.emit(f"c = {c}\nk = {k.as_gamma_table()}",
                 {"c": str(c), "k": str(k.as_gamma_table()), "k_cycles": str(k)})
    elif verb == "fixed":
        fs = fixed_structure(parse_gamma_table(args.table))
        cyls = [str(w) for w in fs.identity_cylinders]
        pts = [str(w) for w in fs.fixed_singletons]
        out.emit(f"identity_cylinders = {cyls}\nfixed_singletons = {pts}",
                 {"identity_cylinders": cyls, "fixed_singletons": pts})
    elif verb == "cocycle":
        g = parse_table(args.table)
        out.emit(str(cocycle_degree(g, _point_or_word(args.point, g.n))))
    elif verb == "alg-eval":
        out.emit(str(parse_algebra_element(args.expr, n, _algebra_mode(args))))
    elif verb == "alg-equal":
        mode = _algebra_mode(args)
        a = parse_algebra_element(args.a, n, mode)
        b = parse_algebra_element(args.b, n, mode or a.mode)
        out.emit(str(a.equals(b)).lower(), a.equals(b))
    elif verb == "unitary":
        result = is_unitary(parse_algebra_element(args.expr, n, _algebra_mode(args)))
        out.emit(str(result).lower(), result)
    elif verb == "fock":
        a = parse_algebra_element(args.expr, n, _algebra_mode(args))
        result = fock_apply(a, parse_word(args.word, a.mode.n))
        out.emit(_fmt_fock(result), {str(w): str(c) for w, c in result.items()})
    elif verb == "phi":
        a = parse_algebra_element(args.expr, n, _algebra_mode(args))
        value = phi_functional(a, Functional(args.which))
        out.emit(str(value))
    elif verb == "matrix-check":
        mode = _algebra_mode(args)
        mats = [parse_algebra_matrix(text, n, mode)
                for text in (args.A, args.B, args.C, args.expected)]
        result = matrix_check(*mats)
        out.emit(str(result).lower(), result)
    elif verb == "cp-mul":
        out.emit(str(cp_mul(parse_cp_element(args.x), parse_cp_element(args.y))))
    elif verb == "cp-expect":
        which = Expectation.TO_FUNCTIONS if args.which == "functions" else Expectation.TO_S_GROUP
        out.emit(str(cp_expectation(parse_cp_element(args.x), which)))
    elif verb == "grade":
        parts = homogeneous_decompose(parse_cp_element(args.x))
        lines = [f"{k}: {v}" for k, v in parts.items()]
        out.emit("\n".join(lines) if lines else "0",
                 {str(k): str(v) for k, v in parts.items()})
    elif verb == "kms-eval":
        spec = parse_state_spec(args.statespec)
        result = eval_state(spec, parse_cp_element(args.x))
        out.emit(json.dumps(result.as_dict(), sort_keys=True), result.as_dict())
    elif verb == "kms-check":
        spec = parse_state_spec(args.statespec)
        report = check_kms_condition(spec, parse_cp_element(args.a), parse_cp_element(args.b))
        out.emit(str(report), report.as_dict())
        return 0 if report.equal else 1
    elif verb == "ground-check":
        spec = parse_state_spec(args.statespec)
        if not isinstance(spec, GammaGround):
            raise WorkbenchError("ground-check needs a gamma-ground state spec")
        ok, value = check_ground_condition(spec, parse_cp_element(args.a),
                                           parse_cp_element(args.b))
        out.emit(f"{str(ok).lower()} (value = {value})",
                 {"ok": ok, "value": value.as_dict()})
        return 0 if ok else 1
    elif verb == "trace-check":
        trace = parse_trace(args.trace)
        result = check_trace_invariance(trace, parse_gamma_table(args.g),
                                        parse_gamma_table(args.h))
        out.emit(str(result).lower(), result)
        return 0 if result else 1
    elif verb == "selftest":
        from .selftest import run_selftest
        only = args.only.split(",") if args.only else None
        results = run_selftest(seed=args.seed, only=only)
        payload = []
        failures = 0
        for crit_id, name, ok, detail in results:
            status = "PASS" if ok else "FAIL"
            out.lines.append(f"{status} {crit_id}: {name} ({detail})")
            payload.append({"id": crit_id, "name": name, "ok": ok, "detail": detail})
            failures += 0 if ok else 1
        out.lines.append(f"{len(results) - failures}/{len(results)} criteria passed")
        out.payload = payload
        return 0 if failures == 0 else 1
    else:  # pragma: no cover
        raise WorkbenchError(f"unknown verb {verb!r}")
    return 0


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return int(ex.code or 0)
    out = _Output(args)
    try:
        code = _dispatch(args, out)
    except ParseError as ex:
        print(f"parse error: {ex}", file=sys.stderr)
        return 2
    except WorkbenchError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1
    rendered = out.render()
    if rendered:
        print(rendered)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
