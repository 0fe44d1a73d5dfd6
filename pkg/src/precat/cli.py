"""Batch front end.

Exit codes: 0 success, 1 domain error (including an undecided verdict when
--require-decided was given), 2 usage.  Reports are byte-stable for
identical inputs; randomized corpus generation takes an explicit seed.
The engine is a pure sequential computation, so --jobs never changes any
output (it is validated and accepted for interface compatibility).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .theta import ThetaError, ThetaObject, zero
from .presheaf import (
    PrecatError, Presentation, SearchCeiling, evaluate, level_censuses,
    present_table, tabulate,
)
from .standard import (
    SigmaShape, indiscrete_table, interval_bar, interval_chain, interval_I,
    phi, sigma, sigma_nu, spine, upsilon,
)
from .engine import EngineConfig, Marking, bigcat_bounded, cat_bounded
from .structure import is_easy_bounded, segal_map, weak_equiv_bounded
from .model import (
    LiftingProblem, factor_cm51_bounded, factor_cm52, lift_search,
    properness_counterexample,
)
from .svk import (
    cohomology_classes, groupoid_equiv_bounded, pi1_presented, svk_pushout,
)
from . import io as pio


@dataclass
class Plan:
    subcommand: str
    inputs: dict = field(default_factory=dict)
    config: EngineConfig = EngineConfig()
    outputs: dict = field(default_factory=dict)
    report_format: str = "json"
    options: dict = field(default_factory=dict)


def positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("bound must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="precat",
                                 description="desk-scale engine for presheaves "
                                             "on Theta^n")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=positive_int, default=1,
                        help="worker hint; output is independent of this value")
    common.add_argument("--format", choices=("json", "text"), default="json")
    sub = ap.add_subparsers(dest="subcommand", required=True,
                            parser_class=lambda **kw: argparse.ArgumentParser(
                                parents=[common], **kw))

    mk = sub.add_parser("make", help="build a standard object")
    mk.add_argument("target", choices=("sigma", "upsilon", "sigmanu", "h",
                                       "spine", "interval", "indiscrete",
                                       "jbar1"))
    mk.add_argument("--n", type=positive_int, default=1)
    mk.add_argument("--M", default="", help="comma-separated prefix")
    mk.add_argument("--m", type=int, default=2)
    mk.add_argument("--k", type=int, default=-1)
    mk.add_argument("--kind", default="I", help="interval kind: I, chain, ibar")
    mk.add_argument("--size", type=positive_int, default=2)
    mk.add_argument("--bound", type=positive_int, default=3)
    mk.add_argument("--phi", action="store_true",
                    help="emit the canonical map Sigma -> h instead")
    mk.add_argument("--out")

    ev = sub.add_parser("eval", help="evaluate a presentation")
    ev.add_argument("--in", dest="infile", required=True)
    ev.add_argument("--level", help="object such as '2,1'; default: censuses")
    ev.add_argument("--degree", type=positive_int, default=3)

    for name in ("cat", "bigcat"):
        c = sub.add_parser(name, help=f"run {name} within bounds")
        c.add_argument("--in", dest="infile", required=True)
        c.add_argument("--degree", type=positive_int, default=3)
        c.add_argument("--stages", type=positive_int, default=6)
        c.add_argument("--mmax", type=positive_int, default=3)
        c.add_argument("--strategy", default="full")
        c.add_argument("--out")
        c.add_argument("--marking")

    sg = sub.add_parser("segal", help="Segal map verdict")
    sg.add_argument("--in", dest="infile", required=True)
    sg.add_argument("--m", type=positive_int, default=2)
    sg.add_argument("--degree", type=positive_int, default=3)

    ez = sub.add_parser("easy-check", help="easy-category check within bounds")
    ez.add_argument("--in", dest="infile", required=True)
    ez.add_argument("--degree", type=positive_int, default=3)
    ez.add_argument("--stages", type=positive_int, default=6)
    ez.add_argument("--mmax", type=positive_int, default=3)

    eq = sub.add_parser("equiv", help="weak equivalence verdict for a map")
    eq.add_argument("--f", dest="mapfile", required=True)
    eq.add_argument("--require-decided", action="store_true")
    eq.add_argument("--word-bound", type=positive_int, default=8)

    lf = sub.add_parser("lift", help="search a lifting problem")
    lf.add_argument("--i", dest="ifile", required=True)
    lf.add_argument("--p", dest="pfile", required=True)
    lf.add_argument("--square", dest="sqfile", required=True)

    fa = sub.add_parser("factor", help="CM5 factorizations")
    fa.add_argument("--mode", choices=("cm51", "cm52"), required=True)
    fa.add_argument("--in", dest="infile", required=True)
    fa.add_argument("--degree", type=positive_int, default=2)
    fa.add_argument("--stages", type=positive_int, default=5)
    fa.add_argument("--mmax", type=positive_int, default=2)

    sv = sub.add_parser("svk", help="Seifert-Van Kampen pushout groupoid")
    sv.add_argument("--x", dest="xfile", required=True)
    sv.add_argument("--u", dest="ufile", required=True)
    sv.add_argument("--v", dest="vfile", required=True)
    sv.add_argument("--w", dest="wfile", required=True)
    sv.add_argument("--bound", type=positive_int, default=4)
    sv.add_argument("--basepoint")
    sv.add_argument("--dot")

    co = sub.add_parser("cohomology", help="H(X, A) class census at n=1")
    co.add_argument("--x", dest="xfile", required=True)
    co.add_argument("--coeff", dest="coeff", required=True)
    co.add_argument("--bound", type=positive_int, default=6)

    sub.add_parser("properness-demo",
                   help="the explicit right-properness counterexample")

    xd = sub.add_parser("export-dot", help="DOT graph of a complex groupoid")
    xd.add_argument("--in", dest="infile", required=True)
    xd.add_argument("--dot", required=True)

    return ap


def parse_args(argv) -> Plan:
    ns = build_parser().parse_args(argv)
    plan = Plan(subcommand=ns.subcommand, report_format=ns.format)
    opts = vars(ns)
    plan.options = opts
    degree = opts.get("degree")
    if degree is not None:
        plan.config = EngineConfig(degree_bound=degree,
                                   stage_bound=opts.get("stages", 6) or 6,
                                   m_max=opts.get("mmax", 3) or 3,
                                   strategy=_strategy(opts.get("strategy", "full")))
    return plan


def _strategy(text):
    if text in (None, "full", "fix"):
        return text or "full"
    if text.startswith("gen:"):
        int(text.split(":", 1)[1])
        return text
    raise SystemExit(2)


def _load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _save(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(pio.dumps(payload))


def _parse_prefix(text):
    text = text.strip()
    if not text:
        return ()
    return tuple(int(t) for t in text.split(","))


def execute(plan: Plan):
    """Run the planned operation; returns (report dict, exit code)."""
    o = plan.options
    cmd = plan.subcommand

    if cmd == "make":
        return _run_make(plan)

    if cmd == "eval":
        A = pio.presentation_from_json(_load(o["infile"]))
        if o.get("level"):
            M = ThetaObject(A.n, _parse_prefix(o["level"]))
            elements = [x.text() for x in evaluate(A, M)]
            return {"level": M.text(), "elements": elements,
                    "count": len(elements)}, 0
        census = {M.text(): c for M, c in level_censuses(A, o["degree"]).items()}
        return {"censuses": census}, 0

    if cmd in ("cat", "bigcat"):
        A = pio.presentation_from_json(_load(o["infile"]))
        if cmd == "cat":
            out, marking, stable = cat_bounded(A, plan.config)
        else:
            out, marking, stable = bigcat_bounded(A, plan.config)
        if o.get("out"):
            _save(o["out"], pio.presentation_to_json(out))
        if o.get("marking"):
            _save(o["marking"], pio.marking_to_json(marking))
        census = {M.text(): c
                  for M, c in level_censuses(out, plan.config.degree_bound).items()}
        return {"stabilized": stable, "generators": len(out.generators),
                "censuses": census, "marked": len(marking)}, 0

    if cmd == "segal":
        A = pio.presentation_from_json(_load(o["infile"]))
        verdict, details = segal_map(A, o["m"], bound=o["degree"])
        return {"verdict": verdict,
                "levels": {M.text(): list(v) for M, v in details.items()}}, 0

    if cmd == "easy-check":
        A = pio.presentation_from_json(_load(o["infile"]))
        return {"easy_within_bounds": is_easy_bounded(A, plan.config)}, 0

    if cmd == "equiv":
        pm = pio.map_from_json(_load(o["mapfile"]))
        v = weak_equiv_bounded(pm, word_bound=o["word_bound"])
        code = 1 if (o["require_decided"] and v.value == "unknown") else 0
        return v.as_dict(), code

    if cmd == "lift":
        i = pio.map_from_json(_load(o["ifile"]))
        p = pio.map_from_json(_load(o["pfile"]))
        sq = _load(o["sqfile"])
        top = pio.map_from_json(sq["top"])
        bottom = pio.map_from_json(sq["bottom"])
        prob = LiftingProblem(i=i, p=p, top=top, bottom=bottom)
        got = lift_search(prob)
        if got is None:
            return {"lift": None}, 0
        return {"lift": pio.map_to_json(got)}, 0

    if cmd == "factor":
        pm = pio.map_from_json(_load(o["infile"]))
        if o["mode"] == "cm51":
            i, p, stable = factor_cm51_bounded(pm, plan.config)
            return {"stabilized": stable,
                    "middle_generators": len(i.target.generators),
                    "i": pio.map_to_json(i), "p": pio.map_to_json(p)}, 0
        j, q, M = factor_cm52(pm, bound=o["degree"])
        return {"middle_generators": len(M.generators),
                "j": pio.map_to_json(j), "q": pio.map_to_json(q)}, 0

    if cmd == "svk":
        X = pio.complex_from_json(_load(o["xfile"]))
        U = pio.complex_from_json(_load(o["ufile"]))
        V = pio.complex_from_json(_load(o["vfile"]))
        W = pio.complex_from_json(_load(o["wfile"]))
        pg = svk_pushout(U, V, W)
        direct = pi1_presented(X)
        L = o["bound"]
        base = o.get("basepoint") or X.vertices[0]
        report = {
            "basepoint": base,
            "endo_census": [pg.endo_census(base, ell) for ell in range(L + 1)],
            "pi1_census": [direct.endo_census(base, ell) for ell in range(L + 1)],
            "agreement": groupoid_equiv_bounded(pg.groupoid, direct.groupoid,
                                                L).as_dict(),
        }
        if o.get("dot"):
            with open(o["dot"], "w", encoding="utf-8") as fh:
                fh.write(pio.groupoid_to_dot(pg.groupoid))
        return report, 0

    if cmd == "cohomology":
        X = pio.complex_from_json(_load(o["xfile"]))
        A = pio.model_from_json(_load(o["coeff"]))
        classes = cohomology_classes(X, A, word_bound=o["bound"])
        return {"classes": len(classes),
                "caveat": "coefficients are used as a finite strict model; "
                          "fibrant replacement is not applied at n=1"}, 0

    if cmd == "properness-demo":
        return properness_counterexample(), 0

    if cmd == "export-dot":
        X = pio.complex_from_json(_load(o["infile"]))
        pg = pi1_presented(X)
        with open(o["dot"], "w", encoding="utf-8") as fh:
            fh.write(pio.groupoid_to_dot(pg.groupoid))
        return {"written": o["dot"]}, 0

    raise PrecatError(f"unknown subcommand {cmd}")


def _run_make(plan: Plan):
    o = plan.options
    n = o["n"]
    target = o["target"]
    prefix = _parse_prefix(o["M"])
    out = None
    if target == "sigma":
        shape = SigmaShape(n, prefix, o["m"], o["k"])
        if o["phi"]:
            out = pio.map_to_json(phi(shape))
        else:
            out = pio.presentation_to_json(sigma(shape))
    elif target == "upsilon":
        out = pio.presentation_to_json(upsilon(n, prefix, o["m"], max(o["k"], 0)))
    elif target == "sigmanu":
        out = pio.presentation_to_json(sigma_nu(n, o["m"], max(o["k"], 0)))
    elif target == "h":
        out = pio.presentation_to_json(
            Presentation(n, (ThetaObject(n, prefix),), ()))
    elif target == "spine":
        out = pio.presentation_to_json(spine(n, o["m"]))
    elif target == "interval":
        kind = o["kind"]
        if kind == "I":
            out = pio.presentation_to_json(interval_I(n))
        elif kind == "chain":
            out = pio.presentation_to_json(interval_chain(n, o["m"]))
        elif kind == "ibar":
            out = pio.table_to_json(interval_bar(n, o["bound"]))
        else:
            raise PrecatError(f"unknown interval kind {kind!r}")
    elif target == "indiscrete":
        out = pio.table_to_json(indiscrete_table(range(o["size"]), n, o["bound"]))
    elif target == "jbar1":
        out = {"schema": "groupoid-presentation/v1",
               "objects": [0, 1],
               "generators": [{"name": "u", "src": 0, "dst": 1},
                              {"name": "u~", "src": 1, "dst": 0}],
               "relations": [["u", "u~"], ["u~", "u"]]}
    if o.get("out"):
        _save(o["out"], out)
        return {"written": o["out"]}, 0
    return out, 0


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        plan = parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0
    try:
        report, code = execute(plan)
    except (PrecatError, ThetaError, SearchCeiling, OSError,
            json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    if plan.report_format == "json":
        sys.stdout.write(pio.dumps(report))
    else:
        sys.stdout.write(_text_report(report) + "\n")
    return code


def _text_report(report, indent=0) -> str:
    pad = "  " * indent
    if isinstance(report, dict):
        lines = []
        for k in sorted(report):
            v = report[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_text_report(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(report, list):
        return "\n".join(f"{pad}- {item}" if not isinstance(item, (dict, list))
                         else _text_report(item, indent) for item in report)
    return f"{pad}{report}"


if __name__ == "__main__":
    sys.exit(main())
