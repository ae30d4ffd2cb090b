"""Command-line front end: verification suites, page charts, basis listings,
and one-shot evaluation of the algebraic operations.

Exit codes: 0 pass, 1 verification failure, 2 usage or configuration error,
3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import sys

from .charts import build_chart, chart_to_json, chart_to_svg, chart_to_tsv
from .comparison import gamma_star
from .config import RunConfig, SUITES
from .errors import (
    ConfigError,
    ResourceBudgetError,
    ThhTateError,
    VerificationFailure,
)
from .exprs import parse_expression
from .fpcore import mono_degree, mono_to_str, monomials_of_degree
from .models import build_h_bp, build_h_mu, build_h_thh
from .reports import canonical_json
from .singer import Window, epsilon_star, tower_filtration
from .steenrod import DualSteenrodAlgebra
from .tatess import d2_element, e2_page, e3_page, page_table_for
from .verify import build_models, run_suite, steenrod_k_for


def _add_common(sub):
    sub.add_argument("--p", type=int, default=3, help="odd prime")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--format", "-f", dest="fmt", default=None)
    sub.add_argument("--out", default=None, help="write output to this path")


def _add_model_args(sub):
    sub.add_argument("--spectrum", default="mu")
    sub.add_argument("--ell-max", type=int, default=3)
    sub.add_argument("--k-max", type=int, default=2)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="thhtate",
        description="Exact mod-p Tate spectral sequence toolkit for Hochschild homology models",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    v = subs.add_parser("verify", help="run a verification suite")
    v.add_argument("suite_pos", nargs="?", default=None, metavar="SUITE")
    v.add_argument("--suite", default=None, choices=SUITES)
    _add_model_args(v)
    v.add_argument("--degree-max", type=int, default=40)
    v.add_argument("--degree-min", type=int, default=0)
    v.add_argument("--floor", type=int, default=-24)
    v.add_argument("--smax", type=int, default=0)
    _add_common(v)

    c = subs.add_parser("chart", help="emit a Tate page chart")
    c.add_argument("--spectrum", default="thh-mu")
    c.add_argument("--page", type=int, default=3, choices=(2, 3))
    c.add_argument("--ell-max", type=int, default=2)
    c.add_argument("--k-max", type=int, default=1)
    c.add_argument("--smin", type=int, default=-12)
    c.add_argument("--smax", type=int, default=0)
    c.add_argument("--degree-max", type=int, default=24)
    c.add_argument("--degree-min", type=int, default=None)
    _add_common(c)

    t = subs.add_parser("tate-ss", help="Tate spectral sequence commands")
    tsubs = t.add_subparsers(dest="subcommand", required=True)
    tp = tsubs.add_parser("page", help="emit a page chart")
    tp.add_argument("--spectrum", default="thh-mu")
    tp.add_argument("--page", type=int, default=3, choices=(2, 3))
    tp.add_argument("--ell-max", type=int, default=2)
    tp.add_argument("--k-max", type=int, default=1)
    tp.add_argument("--smin", type=int, default=-12)
    tp.add_argument("--smax", type=int, default=0)
    tp.add_argument("--degree-max", type=int, default=24)
    tp.add_argument("--degree-min", type=int, default=None)
    _add_common(tp)

    e = subs.add_parser("eval", help="evaluate one operation on a class expression")
    e.add_argument("--op", required=True, choices=("coproduct", "sp", "epsilon", "gamma", "d2"))
    e.add_argument("--class", dest="class_expr", required=True)
    e.add_argument("--r", type=int, default=None)
    _add_model_args(e)
    _add_common(e)

    s = subs.add_parser("steenrod", help="dual Steenrod algebra commands")
    ssubs = s.add_subparsers(dest="subcommand", required=True)
    sc = ssubs.add_parser("coproduct")
    sc.add_argument("--class", dest="class_expr", required=True)
    sc.add_argument("--k-max", type=int, default=3)
    _add_common(sc)
    sj = ssubs.add_parser("conjugate")
    sj.add_argument("--k", type=int, required=True)
    sj.add_argument("--k-max", type=int, default=None)
    _add_common(sj)
    sp = ssubs.add_parser("sp")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--class", dest="class_expr", required=True)
    sp.add_argument("--k-max", type=int, default=3)
    _add_common(sp)

    m = subs.add_parser("model", help="homology model commands")
    msubs = m.add_subparsers(dest="subcommand", required=True)
    mb = msubs.add_parser("basis")
    mb.add_argument("--spectrum", default="mu", help="mu, bp, thh-mu or thh-bp")
    mb.add_argument("--max-degree", type=int, required=True)
    mb.add_argument("--ell-max", type=int, default=3)
    mb.add_argument("--k-max", type=int, default=2)
    _add_common(mb)

    g = subs.add_parser("singer", help="Singer construction commands")
    gsubs = g.add_subparsers(dest="subcommand", required=True)
    ge = gsubs.add_parser("epsilon")
    ge.add_argument("--class", dest="class_expr", required=True)
    ge.add_argument("--spectrum", default="mu")
    ge.add_argument("--ell-max", type=int, default=3)
    ge.add_argument("--k-max", type=int, default=2)
    ge.add_argument("--filtration-floor", type=int, default=None)
    _add_common(ge)
    return parser


def _emit(text, out):
    data = text if isinstance(text, bytes) else text.encode()
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _resolve_models(spectrum, p, ell_max, k_max):
    base_name = spectrum[4:] if spectrum.startswith("thh-") else spectrum
    cfg = RunConfig(p=p, spectrum=base_name, ell_max=ell_max, k_max=k_max).validate()
    _, base, thh = build_models(cfg)
    return base, thh


def _pretty_unit(unit):
    if unit.is_plain():
        if unit.scalar == 1:
            return "+"
        if unit.scalar == unit.p - 1:
            return "-"
        return f"{unit.scalar}*"
    return f"{unit!r}*"


def _pretty_page_term(pt_table, mono, coeff=1):
    ut = []
    vert = []
    for pos, e in mono:
        name = pt_table.name_at(pos)
        if name in ("u", "t"):
            ut.append(name if e == 1 else f"{name}^{e}")
        else:
            vert.append(name if e == 1 else f"{name}^{e}")
    left = " ".join(ut) if ut else "1"
    right = " * ".join(vert) if vert else "1"
    prefix = "" if coeff == 1 else f"{coeff}*"
    return f"{prefix}{left} ⊗ {right}"


def _pretty_singer(elt, floor=None):
    parts = []
    model = elt.model
    for (i, r, mono), c in elt.sorted_terms():
        if floor is not None and tower_filtration(model, i, r, mono) < floor:
            continue
        ut = []
        if i:
            ut.append("u")
        if r:
            ut.append("t" if r == 1 else f"t^{r}")
        left = " ".join(ut) if ut else "1"
        prefix = "" if c == 1 else f"{c}*"
        parts.append(f"{prefix}{left} ⊗ {mono_to_str(mono, model.table)}")
    return " + ".join(parts) if parts else "0"


def cmd_verify(args):
    suite = args.suite or args.suite_pos or "all"
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}; choose from {SUITES}")
    cfg = RunConfig(
        p=args.p,
        spectrum=args.spectrum,
        ell_max=args.ell_max,
        k_max=args.k_max,
        degree_max=args.degree_max,
        degree_min=args.degree_min,
        floor=args.floor,
        s_max=args.smax,
        seed=args.seed,
        fmt=args.fmt or "text",
    ).validate()
    report = run_suite(suite, cfg)
    if (args.fmt or "text") == "json":
        _emit(report.to_json(), args.out)
    else:
        _emit(report.to_text(), args.out)
    return 0 if report.passed else 1


def _chart_command(args):
    spectrum = args.spectrum if args.spectrum.startswith("thh-") else f"thh-{args.spectrum}"
    base_name = spectrum[4:]
    cfg = RunConfig(
        p=args.p, spectrum=base_name, ell_max=args.ell_max, k_max=args.k_max
    ).validate()
    _, _, thh = build_models(cfg)
    d_min = args.degree_min if args.degree_min is not None else args.smin
    window = Window(d_min, args.degree_max, args.smin, args.smax)
    page = e2_page(thh, window)
    if args.page == 3:
        page = e3_page(page)
    obj = build_chart(page, spectrum)
    fmt = args.fmt or "json"
    if fmt == "json":
        _emit(chart_to_json(obj), args.out)
    elif fmt == "tsv":
        _emit(chart_to_tsv(obj), args.out)
    elif fmt == "svg":
        _emit(chart_to_svg(obj), args.out)
    else:
        raise ConfigError(f"chart format {fmt!r} not in (json, tsv, svg)")
    return 0


def cmd_eval(args):
    fmt = args.fmt or "text"
    if args.op == "coproduct":
        st = DualSteenrodAlgebra(args.p, args.k_max if args.k_max else 3)
        x = parse_expression(args.class_expr, st.conj_table)
        psi = st.coproduct(x)
        _emit(psi.to_str() + "\n", args.out)
        return 0
    if args.op == "sp":
        if args.r is None:
            raise ConfigError("--r is required for the power operation")
        st = DualSteenrodAlgebra(args.p, args.k_max if args.k_max else 3)
        x = parse_expression(args.class_expr, st.conj_table)
        _emit(st.sp_on_conj(args.r, x).to_str() + "\n", args.out)
        return 0
    cfg = RunConfig(
        p=args.p, spectrum=args.spectrum, ell_max=args.ell_max, k_max=args.k_max
    ).validate()
    _, base, thh = build_models(cfg)
    if args.op == "epsilon":
        x = parse_expression(args.class_expr, base.table)
        eps = epsilon_star(base, x)
        if fmt == "json":
            _emit(canonical_json(eps.to_json()), args.out)
        else:
            _emit(_pretty_singer(eps) + "\n", args.out)
        return 0
    if args.op == "gamma":
        x = parse_expression(args.class_expr, thh.table)
        if len(x.terms) != 1:
            raise ConfigError("the leading-term comparison map applies to monomials")
        ((mono, coeff),) = x.terms.items()
        out = gamma_star(thh, mono)
        if out is None:
            _emit("0\n", args.out)
            return 0
        unit, page_mono_ = out
        unit = unit * coeff
        pt = page_table_for(thh)
        filt = -sum(
            e * (1 if pt.name_at(pos) == "u" else 2)
            for pos, e in page_mono_
            if pt.name_at(pos) in ("u", "t")
        )
        body = _pretty_page_term(pt, page_mono_).replace("⊗", "*")
        text = f"{_pretty_unit(unit)} {body}  [leading term, filtration {filt}]\n"
        _emit(text, args.out)
        return 0
    if args.op == "d2":
        pt = page_table_for(thh)
        x = parse_expression(args.class_expr, pt)
        out = d2_element(thh, x)
        if out.is_zero():
            _emit("0\n", args.out)
            return 0
        parts = [
            _pretty_page_term(pt, mono, coeff) for mono, coeff in out.sorted_terms()
        ]
        _emit(" + ".join(parts) + "\n", args.out)
        return 0
    raise ConfigError(f"unknown op {args.op!r}")


def cmd_steenrod(args):
    if args.subcommand == "coproduct":
        st = DualSteenrodAlgebra(args.p, args.k_max)
        x = parse_expression(args.class_expr, st.conj_table)
        _emit(st.coproduct(x).to_str() + "\n", args.out)
        return 0
    if args.subcommand == "conjugate":
        k_max = args.k_max if args.k_max is not None else max(args.k, 1)
        st = DualSteenrodAlgebra(args.p, k_max)
        _emit(st.conjugate_to_milnor(args.k).to_str() + "\n", args.out)
        return 0
    if args.subcommand == "sp":
        st = DualSteenrodAlgebra(args.p, args.k_max)
        x = parse_expression(args.class_expr, st.conj_table)
        out = st.sp_on_conj(args.r, x)
        if (args.fmt or "text") == "json":
            _emit(canonical_json(out.to_json()), args.out)
        else:
            _emit(out.to_str() + "\n", args.out)
        return 0
    raise ConfigError(f"unknown steenrod subcommand {args.subcommand!r}")


def cmd_model(args):
    base, thh = _resolve_models(args.spectrum, args.p, args.ell_max, args.k_max)
    target = thh if args.spectrum.startswith("thh-") else base
    fmt = args.fmt or "json"
    basis = {}
    for d in range(args.max_degree + 1):
        ms = monomials_of_degree(target.table, d)
        basis[str(d)] = [mono_to_str(m, target.table) for m in ms]
    if fmt == "json":
        obj = {
            "schema": "thhtate.basis@1",
            "spectrum": args.spectrum,
            "p": args.p,
            "max_degree": args.max_degree,
            "basis": basis,
        }
        _emit(canonical_json(obj), args.out)
    else:
        lines = ["degree\tdim\tclasses"]
        for d in range(args.max_degree + 1):
            names = basis[str(d)]
            lines.append(f"{d}\t{len(names)}\t" + " ".join(names))
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_singer(args):
    cfg = RunConfig(
        p=args.p, spectrum=args.spectrum, ell_max=args.ell_max, k_max=args.k_max
    ).validate()
    _, base, _ = build_models(cfg)
    x = parse_expression(args.class_expr, base.table)
    eps = epsilon_star(base, x)
    floor = args.filtration_floor
    if (args.fmt or "text") == "json":
        out = []
        for (i, r, mono), c in eps.sorted_terms():
            if floor is not None and tower_filtration(base, i, r, mono) < floor:
                continue
            out.append([int(c), int(i), int(r), mono_to_str(mono, base.table)])
        _emit(canonical_json(out), args.out)
    else:
        _emit(_pretty_singer(eps, floor) + "\n", args.out)
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "chart": _chart_command,
    "eval": cmd_eval,
    "steenrod": cmd_steenrod,
    "model": cmd_model,
    "singer": cmd_singer,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    if command == "tate-ss":
        command = "chart"
    try:
        code = COMMANDS[command](args)
    except ResourceBudgetError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except ThhTateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
