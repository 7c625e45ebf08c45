"""Command-line front end.

Every subcommand echoes its resolved configuration (seed included) into
the emitted document, prints exact integers or exact rationals as
num/den, and is byte-identical across repeated invocations.  Exit
status: 0 success, 1 domain error (rank too small, cap exceeded,
missing data, failed --check), 2 usage error.

Where an independent oracle exists a subcommand takes --oracle (run the
oracle instead) and --check (run both, fail nonzero on mismatch).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import census, flagfix, genlab, report
from .embed import embed_almost_free, klein_subgroup, parse_two_group
from .errors import DomainError
from .forms import formed_space
from .groups import atlas as make_atlas, group_order, parse_group
from .matrix import Matrix


def _emit(config: dict, payload, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps({"config": config, "result": payload}, sort_keys=True, indent=2))
        return
    header = " ".join(f"{k}={v}" for k, v in sorted(config.items()))
    print(f"# {header}")
    if fmt == "csv":
        if isinstance(payload, dict) and "rows" in payload:
            print(",".join(str(c) for c in payload["columns"]))
            for row in payload["rows"]:
                print(",".join(str(c) for c in row))
        else:
            print("value")
            print(_scalar(payload))
        return
    # text
    if isinstance(payload, dict):
        for k, v in payload.items():
            if k in ("rows", "columns"):
                continue
            print(f"{k} = {_scalar(v)}")
        if "rows" in payload:
            for row in payload["rows"]:
                print(" ".join(str(c) for c in row))
    elif isinstance(payload, list):
        for item in payload:
            print(_scalar(item))
    else:
        print(_scalar(payload))


def _scalar(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def _frac_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def _eps_arg(text: str | None) -> int | None:
    if text is None:
        return None
    return {"+": 1, "-": -1, "o": 0}[text]


def _space_from_args(args):
    return formed_space(args.n, args.kind, args.q, _eps_arg(args.eps))


def _witness(spec: str, atlas):
    """Witness grammar: embed:GROUP:x|y|K or file:PATH (matrix text lines)."""
    parts = spec.split(":")
    if parts[0] == "embed" and len(parts) == 3:
        emb = embed_almost_free(parse_two_group(parts[1]), atlas)
        if parts[2] == "x":
            return emb.involution_image()
        if parts[2] == "y":
            return emb.order4_image()
        if parts[2] == "K":
            return klein_subgroup(emb)
        raise DomainError("witness role must be x, y or K")
    if parts[0] == "file" and len(parts) == 2:
        mats = genlab.load_generators_file(parts[1])
        return mats[0] if len(mats) == 1 else tuple(mats)
    raise DomainError("cannot parse witness %r" % spec)


# -- subcommand handlers -----------------------------------------------------

def _cmd_psi(args) -> tuple[dict, object]:
    cfg = {"subcommand": "psi", "b": args.b, "c": args.c, "d": args.d, "q": args.q,
           "oracle": args.oracle, "check": args.check}
    if args.check:
        lhs = census.psi(args.b, args.c, args.d, args.q)
        rhs = census.psi_oracle(args.b, args.c, args.d, args.q, args.cap)
        if lhs != rhs:
            raise DomainError("psi mismatch: formula %d oracle %d" % (lhs, rhs))
        return cfg, {"value": lhs, "oracle": rhs, "match": True}
    if args.oracle:
        return cfg, census.psi_oracle(args.b, args.c, args.d, args.q, args.cap)
    return cfg, census.psi(args.b, args.c, args.d, args.q)


def _cmd_count(args) -> tuple[dict, object]:
    cfg = {"subcommand": "count", "s": args.s, "oracle": args.oracle, "check": args.check}
    if args.group:
        cfg["group"] = args.group
        if args.oracle or args.check:
            raise DomainError(
                "group element counts are a single exhaustive enumeration; "
                "--oracle/--check apply to the symmetric-group path")
        gens = make_atlas(args.group).generators
        return cfg, census.count_order_elements(gens, args.s, args.cap)
    if args.sn_order4 is None:
        raise DomainError("count needs --group or --sn-order4")
    cfg["sn_order4"] = args.sn_order4
    if args.check:
        lhs = census.sn_order4_count(args.sn_order4)
        rhs = census.sn_order4_brute(args.sn_order4)
        if lhs != rhs:
            raise DomainError("j4 mismatch: formula %d brute %d" % (lhs, rhs))
        return cfg, {"value": lhs, "oracle": rhs, "match": True}
    if args.oracle:
        return cfg, census.sn_order4_brute(args.sn_order4)
    return cfg, census.sn_order4_count(args.sn_order4)


def _cmd_klein(args) -> tuple[dict, object]:
    cfg = {"subcommand": "klein", "oracle": args.oracle, "check": args.check,
           "method": args.method}
    if args.group:
        cfg["group"] = args.group
        gens = make_atlas(args.group).generators
        if args.check:
            a = census.count_klein_subgroups(gens, args.cap, method="pairs")
            b = census.count_klein_subgroups(gens, args.cap, method="classes")
            if a != b:
                raise DomainError("klein count mismatch: pairs %d classes %d" % (a, b))
            return cfg, {"value": a, "oracle": b, "match": True}
        return cfg, census.count_klein_subgroups(gens, args.cap, method=args.method)
    if args.sn is None:
        raise DomainError("klein needs --group or --sn")
    cfg["sn"] = args.sn
    if args.check:
        lhs = census.sn_klein_count(args.sn)
        rhs = census.sn_klein_brute(args.sn)
        if lhs != rhs:
            raise DomainError("klein mismatch: formula %d brute %d" % (lhs, rhs))
        return cfg, {"value": lhs, "oracle": rhs, "match": True}
    if args.oracle:
        return cfg, census.sn_klein_brute(args.sn)
    return cfg, census.sn_klein_count(args.sn)


def _cmd_subspaces(args) -> tuple[dict, object]:
    cfg = {"subcommand": "subspaces", "kind": args.kind, "n": args.n, "q": args.q,
           "eps": args.eps, "m": args.m, "oracle": args.oracle, "check": args.check,
           "list": args.list}
    space = _space_from_args(args)
    if args.list:
        rows = []
        for basis in flagfix.enumerate_totally_singular(space, args.m, args.cap):
            rows.append([Matrix(space.field, basis.rows).to_text() if basis.rows
                         else "0 %d %d;" % (space.n, space.field.q)])
        return cfg, {"columns": ["basis"], "rows": rows, "count": len(rows)}
    if args.check:
        lhs = census.totally_singular_count(space, args.m)
        rhs = sum(1 for _ in flagfix.enumerate_totally_singular(space, args.m, args.cap))
        if lhs != rhs:
            raise DomainError("subspace count mismatch: formula %d stream %d" % (lhs, rhs))
        return cfg, {"value": lhs, "oracle": rhs, "match": True}
    if args.oracle:
        return cfg, sum(1 for _ in flagfix.enumerate_totally_singular(space, args.m, args.cap))
    return cfg, census.totally_singular_count(space, args.m)


def _cmd_fix(args) -> tuple[dict, object]:
    cfg = {"subcommand": "fix", "group": args.group, "m": args.m, "witness": args.witness}
    at = make_atlas(args.group)
    w = _witness(args.witness, at)
    elements = [w] if isinstance(w, Matrix) else list(w)
    return cfg, flagfix.fix_count(elements, at.form, args.m, args.cap)


def _cmd_fpr(args) -> tuple[dict, object]:
    cfg = {"subcommand": "fpr", "group": args.group, "m": args.m,
           "witness": args.witness, "partner": args.partner, "mode": args.mode}
    at = make_atlas(args.group)
    w = _witness(args.witness, at)
    if args.partner:
        partner = _witness(args.partner, at)
        if not isinstance(w, Matrix):
            raise DomainError("the first witness of a bound report must be an element")
        rep = flagfix.parabolic_bound_report(w, partner, at, args.m, args.mode)
        return cfg, rep.to_json()
    rep = flagfix.fpr_check(w, at, args.m, args.cap, args.cap)
    out = rep.to_json()
    out["fpr"] = _frac_str(rep.fpr)
    return cfg, out


def _cmd_embed(args) -> tuple[dict, object]:
    cfg = {"subcommand": "embed", "two_group": args.two_group, "target": args.target}
    emb = embed_almost_free(parse_two_group(args.two_group), args.target)
    dec = emb.decomposition
    rows = [[emb.images[u].to_text()] for u in range(emb.group.order)]
    return cfg, {"n": dec.n, "a": dec.a, "k": dec.k, "s": dec.s,
                 "fixed_dimension": emb.fixed_space_dimension(),
                 "columns": ["image"], "rows": rows}


def _cmd_order(args) -> tuple[dict, object]:
    cfg = {"subcommand": "order", "group": args.group, "check": args.check}
    spec = parse_group(args.group)
    value = group_order(spec)
    if args.check:
        got = make_atlas(args.group).bsgs_order()
        if got != value:
            raise DomainError("order mismatch: formula %d bsgs %d" % (value, got))
        return cfg, {"value": value, "oracle": got, "match": True}
    return cfg, value


def _cmd_generate(args) -> tuple[dict, object]:
    cfg = {"subcommand": "generate", "group": args.group, "A": args.A, "B": args.B,
           "trials": args.trials, "seed": args.seed, "walk": args.walk}
    exp = genlab.run_generation_experiment(
        args.group, parse_two_group(args.A), parse_two_group(args.B),
        args.trials, args.seed, args.walk)
    return cfg, exp.to_json()


def _cmd_zeta(args) -> tuple[dict, object]:
    cfg = {"subcommand": "zeta", "catalog": args.catalog, "s": args.s,
           "precision": args.precision}
    catalog = genlab.load_catalog(args.catalog)
    value = genlab.zeta(catalog, args.s)
    return cfg, f"{value:.{args.precision}f}"


def _cmd_criterion(args) -> tuple[dict, object]:
    cfg = {"subcommand": "criterion", "catalog": args.catalog,
           "x_class": args.x_class, "y_class": args.y_class, "mode": args.mode}
    catalog = genlab.load_catalog(args.catalog)
    value = genlab.criterion_sum(catalog, args.x_class, args.y_class, args.mode)
    return cfg, {"value": _frac_str(value), "less_than_one": value < 1}


def _cmd_report(args) -> tuple[dict, object]:
    out_dir = args.out_dir or os.environ.get("FINCLASS_OUT_DIR") or "."
    cfg = {"subcommand": "report", "groups": args.groups, "out_dir": out_dir}
    labels = [g.strip() for g in args.groups.split(",") if g.strip()]
    reports = report.build_reports(labels, cap=args.cap)
    os.makedirs(out_dir, exist_ok=True)
    csv_path = report.write_csv(reports, os.path.join(out_dir, "exponents.csv"))
    fig_path = report.write_figure(reports, os.path.join(out_dir, "exponents.png"))
    rows = [[r.group, r.statistic, r.value,
             "" if r.exponent is None else f"{float(r.exponent):.6f}", r.window]
            for r in reports]
    return cfg, {"csv": str(csv_path), "figure": str(fig_path),
                 "columns": ["group", "statistic", "value", "exponent", "window"],
                 "rows": rows}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finclass",
        description="Exact counting and generation experiments in classical groups "
                    "over small fields")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", choices=("json", "csv", "text"), default="text",
                        help="output document format")
    common.add_argument("--cap", type=int, default=10**7,
                        help="enumeration budget override")
    sub = parser.add_subparsers(dest="subcommand", required=True,
                                parser_class=lambda **kw: argparse.ArgumentParser(
                                    parents=[common], **kw))

    p = sub.add_parser("psi", help="count pairs (A,B) with AB=0 over GF(q)")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--check", action="store_true")
    p.set_defaults(fn=_cmd_psi)

    p = sub.add_parser("count", help="count elements of exact order s")
    p.add_argument("--group")
    p.add_argument("--sn-order4", type=int, dest="sn_order4",
                   help="count elements of order dividing 4 in S_t")
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--check", action="store_true")
    p.set_defaults(fn=_cmd_count)

    p = sub.add_parser("klein", help="count Klein four-subgroups")
    p.add_argument("--group")
    p.add_argument("--sn", type=int)
    p.add_argument("--method", choices=("auto", "pairs", "classes"), default="auto")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--check", action="store_true")
    p.set_defaults(fn=_cmd_klein)

    p = sub.add_parser("subspaces", help="totally singular m-subspace counts")
    p.add_argument("--kind", choices=("zero", "symplectic", "quadratic", "unitary"),
                   required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--eps", choices=("+", "-", "o"))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--list", action="store_true")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--check", action="store_true")
    p.set_defaults(fn=_cmd_subspaces)

    p = sub.add_parser("fix", help="count invariant totally singular m-spaces")
    p.add_argument("--group", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--witness", required=True,
                   help="embed:GROUP:x|y|K or file:PATH")
    p.set_defaults(fn=_cmd_fix)

    p = sub.add_parser("fpr", help="fixed-point-ratio double-counting report")
    p.add_argument("--group", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--witness", required=True)
    p.add_argument("--partner", help="second witness: emit the parabolic bound report")
    p.add_argument("--mode", choices=("order4", "klein"), default="order4")
    p.set_defaults(fn=_cmd_fpr)

    p = sub.add_parser("embed", help="almost-free embedding images")
    p.add_argument("--two-group", dest="two_group", required=True)
    p.add_argument("--target", required=True)
    p.set_defaults(fn=_cmd_embed)

    p = sub.add_parser("order", help="group order by formula (--check: BSGS)")
    p.add_argument("group")
    p.add_argument("--check", action="store_true")
    p.set_defaults(fn=_cmd_order)

    p = sub.add_parser("generate", help="conjugate-pair generation experiment")
    p.add_argument("--group", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--walk", type=int, default=50)
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("zeta", help="catalog zeta value sum cc * index^-s")
    p.add_argument("--catalog", required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--precision", type=int, default=6)
    p.set_defaults(fn=_cmd_zeta)

    p = sub.add_parser("criterion", help="exact criterion sum over a catalog")
    p.add_argument("--catalog", required=True)
    p.add_argument("--x-class", dest="x_class", type=int, required=True)
    p.add_argument("--y-class", dest="y_class", type=int, required=True)
    p.add_argument("--mode", choices=("order4", "klein"), default="order4")
    p.set_defaults(fn=_cmd_criterion)

    p = sub.add_parser("report", help="exponent diagnostics: CSV + figure")
    p.add_argument("--groups", required=True, help="comma-separated group labels")
    p.add_argument("--out-dir", dest="out_dir")
    p.set_defaults(fn=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config, payload = args.fn(args)
        config["out"] = args.out
        _emit(config, payload, args.out)
        return 0
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
