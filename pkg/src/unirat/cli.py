"""Batch command-line front end.

One job per invocation: parse a field presentation, dispatch to the
requested computation, and print either aligned text or a stable JSON
document.  Exit codes: 0 success, 2 not algebraic, 3 budget exceeded,
4 parse error, 1 other errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .coeffs import QQ, PrimeField
from .errors import (
    BudgetExceededError,
    NotAlgebraicError,
    ParseError,
    UniratError,
)
from .exprparse import parse_expression
from .fields import AlgExt, AmbientField, EPoly, ExtPoly, FieldPresentation, RatFunc
from .factor import factor_over_extension
from .poly import MultiPoly
from .subfields import (
    intermediate_fields,
    is_normal_extension,
    monodromy_fix_group,
    reduce_dimension,
)
from .unirational import (
    INFINITE,
    NOT_MEMBER,
    TRANSCENDENTAL,
    algebraic_degree,
    infinite_family_witness,
    jacobian_trdeg,
    membership_express,
    minimal_polynomial,
    separating_basis,
    tag_basis,
    trdeg_groebner,
    uni_multivariate_decompose,
)


def _split_list(text):
    return [part.strip() for part in text.split(",") if part.strip()]


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="unirat",
        description="Exact computations with unirational field extensions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, gens=True):
        p.add_argument("--vars", required=True, help="ambient variables, comma separated")
        if gens:
            p.add_argument("--gens", required=True, help="generator expressions, comma separated")
        p.add_argument("--relations", default="", help="ambient relation polynomials (uppercase variable aliases)")
        p.add_argument("--prime", type=int, default=0, help="work over F_p instead of Q")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--timings", action="store_true", help="include timings in JSON output")
        p.add_argument("--max-pairs", type=int, default=None, help="S-pair budget for basis computations")
        p.add_argument("--max-subsets", type=int, default=None, help="subset budget for factor recombination")

    common(sub.add_parser("trdeg", help="transcendence degree of K(gens) over K"))
    common(sub.add_parser("degree", help="algebraic degree of the ambient field over K(gens)"))

    p = sub.add_parser("minpoly", help="minimal polynomial of an element over K(gens)")
    common(p)
    p.add_argument("--elem", required=True, help="the element")

    p = sub.add_parser("member", help="express an element in the generators, if possible")
    common(p)
    p.add_argument("--elem", required=True)

    p = sub.add_parser("sepbasis", help="separating transcendence basis via the Jacobian")
    common(p)

    p = sub.add_parser("subfields", help="lattice of intermediate fields")
    common(p)
    p.add_argument("--dot", action="store_true", help="also emit a dot-format edge list")

    p = sub.add_parser("normality", help="is the extension normal?")
    common(p)
    p.add_argument("--route", choices=("auto", "monodromy", "splitting"), default="auto")

    p = sub.add_parser("witness", help="infinite family of intermediate fields, when transcendental")
    common(p)

    p = sub.add_parser("decompose-uni", help="common inner polynomial of several polynomials")
    common(p)

    p = sub.add_parser("reduce-dim", help="monomorphism into trdeg-many variables")
    common(p)

    p = sub.add_parser("factor-ext", help="factor a polynomial over E[a] = E[z]/(minpoly)")
    p.add_argument("--base-vars", required=True, help="variables of the base rational function field E")
    p.add_argument("--ext-var", default="a", help="name standing for the extension generator")
    p.add_argument("--var", default="z", help="main variable of the polynomial")
    p.add_argument("--minpoly", required=True, help="monic minimal polynomial in --var over E")
    p.add_argument("--poly", required=True, help="polynomial in --var over E[ext-var]")
    p.add_argument("--json", action="store_true")
    p.add_argument("--timings", action="store_true")
    p.add_argument("--max-subsets", type=int, default=None)
    return parser


def _ambient_from_args(args):
    vars = tuple(_split_list(args.vars))
    if not vars:
        raise ParseError("no variables declared")
    field = PrimeField(args.prime) if args.prime else QQ
    relations = []
    if args.relations:
        aliases = tuple(v.upper() for v in vars)
        if len(set(aliases)) != len(aliases) or (set(aliases) & set(vars)) and aliases != vars:
            # mixed-case universes fall back to literal names
            aliases = vars
        for text in _split_list(args.relations):
            rel = parse_expression(text, aliases, field)
            if not rel.is_polynomial():
                raise ParseError("relations must be polynomial")
            poly = rel.as_poly()
            relations.append(
                MultiPoly(field, vars, dict(poly.terms), _clean=True)
            )
    return AmbientField(field, vars, relations)


def _presentation_from_args(args):
    amb = _ambient_from_args(args)
    gens = [parse_expression(g, amb.vars, amb.field) for g in _split_list(args.gens)]
    return FieldPresentation(amb, gens)


def _epoly_str(mp) -> str:
    if isinstance(mp, str):
        return mp
    return str(mp)


def run_command(args) -> tuple:
    """Execute one job; returns (payload dict, human text lines)."""
    cmd = args.command
    if cmd == "factor-ext":
        return _run_factor_ext(args)
    P = _presentation_from_args(args)
    inputs = {
        "vars": list(P.ambient.vars),
        "gens": [str(g) for g in P.generators],
        "relations": [str(r) for r in P.ambient.relations],
        "prime": getattr(args, "prime", 0) or None,
    }

    if cmd == "trdeg":
        T = tag_basis(P, max_pairs=args.max_pairs)
        value = trdeg_groebner(T)
        return {"command": cmd, "inputs": inputs, "result": {"trdeg": value}}, [
            f"trdeg = {value}"
        ]
    if cmd == "degree":
        T = tag_basis(P, max_pairs=args.max_pairs)
        value = algebraic_degree(T, max_pairs=args.max_pairs)
        return {"command": cmd, "inputs": inputs, "result": {"degree": value}}, [
            f"degree = {value}"
        ]
    if cmd == "minpoly":
        inputs["elem"] = args.elem
        c = parse_expression(args.elem, P.ambient.vars, P.ambient.field)
        T = tag_basis(P, max_pairs=args.max_pairs)
        mp = minimal_polynomial(c, T, max_pairs=args.max_pairs)
        text = _epoly_str(mp)
        return {"command": cmd, "inputs": inputs, "result": {"minpoly": text}}, [
            f"minpoly = {text}"
        ]
    if cmd == "member":
        inputs["elem"] = args.elem
        c = parse_expression(args.elem, P.ambient.vars, P.ambient.field)
        T = tag_basis(P, max_pairs=args.max_pairs)
        expr = membership_express(c, T, max_pairs=args.max_pairs)
        text = str(expr) if not isinstance(expr, str) else expr
        return {"command": cmd, "inputs": inputs, "result": {"expression": text}}, [
            f"expression = {text}"
        ]
    if cmd == "sepbasis":
        report = jacobian_trdeg(P)
        basis = separating_basis(P)
        payload = {
            "rank": report.rank,
            "trdeg_extension": report.trdeg,
            "basis": list(basis),
            "separable_certified": report.separable_certified,
        }
        return {"command": cmd, "inputs": inputs, "result": payload}, [
            f"rank = {report.rank}",
            f"trdeg of ambient over K(gens) = {report.trdeg}",
            f"basis = {{{', '.join(basis)}}}",
        ]
    if cmd == "subfields":
        lattice = intermediate_fields(
            P, max_pairs=args.max_pairs, max_subsets=args.max_subsets
        )
        fields_payload = []
        lines = []
        for i, f in enumerate(lattice.fields):
            gens = [str(g) for g in f.generators_ambient]
            kind = f.trivial or "proper"
            fields_payload.append(
                {
                    "degree_over_base": lattice.diagram.degree_top // f.degree_over_E,
                    "degree_over_E": f.degree_over_E,
                    "kind": kind,
                    "generators": gens,
                }
            )
            lines.append(f"field {i} ({kind}): degree {f.degree_over_E}; generators: " + ", ".join(gens))
        lines.append(f"hasse edges: {lattice.hasse_edges}")
        payload = {"fields": fields_payload, "hasse_edges": lattice.hasse_edges}
        if getattr(args, "dot", False):
            payload["dot"] = lattice.dot()
            lines.append(lattice.dot())
        return {"command": cmd, "inputs": inputs, "result": payload}, lines
    if cmd == "normality":
        value = is_normal_extension(
            P, route=args.route, max_pairs=args.max_pairs, max_subsets=args.max_subsets
        )
        return {"command": cmd, "inputs": inputs, "result": {"normal": value}}, [
            f"normal = {value}"
        ]
    if cmd == "witness":
        w = infinite_family_witness(P, max_pairs=args.max_pairs)
        if w is None:
            payload = {"witness": None}
            lines = ["extension is algebraic: no infinite family"]
        else:
            payload = {"witness": {"variable": w.variable, "family": w.description}}
            lines = [f"transcendental variable: {w.variable}", f"family: {w.description}"]
        return {"command": cmd, "inputs": inputs, "result": payload}, lines
    if cmd == "decompose-uni":
        polys = []
        for g in P.generators:
            if not g.is_polynomial():
                raise ParseError("decompose-uni expects polynomial inputs")
            polys.append(g.as_poly())
        res = uni_multivariate_decompose(polys, max_pairs=args.max_pairs)
        if res is None:
            return {"command": cmd, "inputs": inputs, "result": {"inner": None}}, [
                "no common inner polynomial"
            ]
        inner, qs = res
        payload = {"inner": str(inner), "outer": [str(q) for q in qs]}
        lines = [f"inner = {inner}"] + [f"q_{i+1} = {q}" for i, q in enumerate(qs)]
        return {"command": cmd, "inputs": inputs, "result": payload}, lines
    if cmd == "reduce-dim":
        red = reduce_dimension(P, max_pairs=args.max_pairs)
        payload = {
            "steps": [
                {"eliminated": s.eliminated, "into": s.into, "power": s.power}
                for s in red.steps
            ],
            "final_vars": list(red.final_vars),
            "images": [str(g) for g in red.images],
            "trdeg": red.trdeg,
        }
        lines = (
            ["identity (generators already live in trdeg-many variables)"]
            if red.is_identity
            else [f"substitute {s.eliminated} -> {s.into}^{s.power}" for s in red.steps]
        )
        lines += [f"images: {', '.join(str(g) for g in red.images)}"]
        return {"command": cmd, "inputs": inputs, "result": payload}, lines
    raise UniratError(f"unknown command {cmd}")


def _run_factor_ext(args):
    base_vars = tuple(_split_list(args.base_vars))
    ext_var = args.ext_var
    var = args.var
    mp_expr = parse_expression(args.minpoly, base_vars + (var,))
    if not mp_expr.is_polynomial():
        raise ParseError("minimal polynomial must be polynomial")
    minpoly = EPoly.from_multipoly(mp_expr.as_poly(), var, out_vars=base_vars)
    ext = AlgExt(minpoly)
    poly_expr = parse_expression(args.poly, base_vars + (ext_var, var))
    if not poly_expr.is_polynomial():
        raise ParseError("input polynomial must be polynomial")
    p = poly_expr.as_poly()
    # collect coefficients in var, each a polynomial in base vars and ext_var
    from .poly import coeffs_in

    coeffs = []
    for i in range(p.degree_in(var) + 1):
        c = coeffs_in(p, var).get(i)
        if c is None:
            coeffs.append(ext.zero_elem())
            continue
        elem = ext.zero_elem()
        for m, coef in c.terms.items():
            e_alpha = m[len(base_vars)]
            mono = m[: len(base_vars)]
            base_poly = MultiPoly(p.field, base_vars, {mono: coef}, _clean=True)
            elem = elem + (ext.alpha() ** e_alpha).scale(RatFunc.from_poly(base_poly))
        coeffs.append(elem)
    f = ExtPoly(ext, coeffs, var=var)
    fac = factor_over_extension(f, max_subsets=args.max_subsets)
    inputs = {
        "base_vars": list(base_vars),
        "ext_var": ext_var,
        "var": var,
        "minpoly": args.minpoly,
        "poly": args.poly,
    }
    factors_payload = [
        {"factor": str(g), "degree": g.degree(), "multiplicity": m} for g, m in fac.factors
    ]
    lines = [f"unit = {fac.unit}"] + [
        f"factor (deg {g.degree()}, mult {m}): {g}" for g, m in fac.factors
    ]
    return (
        {
            "command": "factor-ext",
            "inputs": inputs,
            "result": {"unit": str(fac.unit), "factors": factors_payload},
        },
        lines,
    )


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        payload, lines = run_command(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 4
    except NotAlgebraicError as exc:
        print(f"not algebraic: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except UniratError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if getattr(args, "json", False):
        if getattr(args, "timings", False):
            payload["timings"] = {"seconds": round(time.monotonic() - started, 3)}
        print(json.dumps(payload, sort_keys=True, indent=2, default=str))
    else:
        for line in lines:
            print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
