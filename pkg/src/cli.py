from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional

import pandas as pd

from .arraycode import load_code, paper_example, save_code
from .bounds import bound_report, bound_table, lower_formulas
from .constructions import best_construction, construction2, describe_types, get_construction
from .constructions.registry import family_names
from .designs import load_steiner
from .emulator import emulate_trials
from .errors import (
    CapacityError,
    ConstructionInvariantError,
    DesignError,
    FormatError,
    ParameterError,
)
from .export import bound_table_frame, save_table
from .pipeline import Instance, run_grid
from .settings import load_cfg
from .utils import family_slug, frac_str, parse_rational
from .verifier import check_certificate, exact_k, load_certificate, save_certificate

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3
EXAMPLE_CERT_PATH = os.path.join(os.path.dirname(os.path.dirname(__file__)), "data", "example_7x4.cert.json")


def _read(path: str) -> bytes:
    with open(path, "rb") as f:
        return f.read()


def _write(path: str, data: bytes) -> None:
    with open(path, "wb") as f:
        f.write(data)


def _emit(args, text: str, doc: Dict) -> None:
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True))
    else:
        print(text)


def _cert_path(out: str) -> str:
    stem, _ext = os.path.splitext(out)
    return stem + ".cert.json"


def _s_of(args) -> Fraction:
    if args.s is not None:
        return parse_rational(args.s)
    if args.t is not None and args.d is not None:
        return 1 + Fraction(args.d, args.t)
    raise ParameterError("give --s, or --t with --d")


# ---------------------------------------------------------------------------
# subcommands

def cmd_construct(args) -> int:
    if args.t is None:
        raise ParameterError("--t is required")
    s = _s_of(args)
    name = args.family
    if name == "auto":
        name = best_construction(s, args.t)
        if name is None:
            raise ParameterError(f"no family handles s={frac_str(s)}, t={args.t}")
        logger.info("auto-selected family %s", name)
    if args.steiner and name != "c2":
        raise ParameterError(f"--steiner only applies to family c2, not {name}")
    if name == "c2" and args.steiner:
        sys_ = load_steiner(_read(args.steiner))
        d = (s - 1) * args.t
        if d.denominator != 1:
            raise ParameterError(f"s={frac_str(s)} with t={args.t} does not give an integer d")
        out = construction2(args.t, int(d), sys_, args.max_servers)
    else:
        out = get_construction(name).build(s, args.t, max_servers=args.max_servers)

    code_path = args.out or f"{family_slug(out.family)}.json"
    cert_path = args.cert or _cert_path(code_path)
    _write(code_path, save_code(out.code))
    _write(cert_path, save_certificate(out.certificate))

    matches = [label for label, v in lower_formulas(s, args.t) if v == out.rate]
    text = f"m={out.predicted_m} k={out.predicted_k} rate={frac_str(out.rate)}"
    if matches:
        text += "\nmatches: " + ", ".join(matches)
    for row in describe_types(out):
        text += f"\n  {row['type']}: {row['singletons']} singletons, sum of {row['sum_size']}, eta={row['eta']}, servers={row['servers']}"
    text += f"\nwrote {code_path} and {cert_path}"
    _emit(args, text, {
        "family": out.family,
        "m": out.predicted_m,
        "k": out.predicted_k,
        "rate": frac_str(out.rate),
        "matches": matches,
        "types": describe_types(out),
        "code": code_path,
        "cert": cert_path,
    })
    return EXIT_OK


def cmd_verify(args) -> int:
    code = load_code(_read(args.code))
    report = exact_k(code, exact_limit=args.exact_limit, node_budget=args.node_budget)
    mode = "exact" if report.exact else "lower bound"
    lines = [f"x_{r.part + 1}: {r.max_disjoint}" + ("" if r.exact else " (lower bound)") for r in report.parts]
    lines.append(f"k={report.k} ({mode}) rate={frac_str(report.rate)}")
    _emit(args, "\n".join(lines), {
        "m": report.m,
        "k": report.k,
        "exact": report.exact,
        "rate": frac_str(report.rate),
        "parts": [{"part": r.part + 1, "max_disjoint": r.max_disjoint, "exact": r.exact} for r in report.parts],
    })
    return EXIT_OK


def cmd_certify(args) -> int:
    code = load_code(_read(args.code))
    cert = load_certificate(_read(args.cert))
    ok, violation = check_certificate(code, cert)
    if ok:
        text = f"pass k={cert.claimed_k} rate={frac_str(Fraction(cert.claimed_k, code.m))}"
    else:
        text = f"fail: {violation}"
    _emit(args, text, {
        "ok": ok,
        "claimed_k": cert.claimed_k,
        "violation": None if ok else {
            "part": violation.part + 1,
            "set": None if violation.set_index is None else violation.set_index + 1,
            "kind": violation.kind,
            "detail": violation.detail,
        },
    })
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bounds(args) -> int:
    rep = bound_report(parse_rational(args.s), args.t)
    lines = [f"s={frac_str(rep.s)} t={rep.t}"]
    lines += [f"  lower {label}: {frac_str(v)}" for label, v in rep.lower]
    lines += [f"  upper {label}: {frac_str(v)}" for label, v in rep.upper]
    if rep.limit is not None:
        lines.append(f"  {rep.limit[0]}: {frac_str(rep.limit[1])}")
    if rep.tight:
        lines.append(f"tight g={frac_str(rep.best_lower)}")
    elif rep.best_lower is not None:
        lines.append(f"gap lower={frac_str(rep.best_lower)} upper={frac_str(rep.best_upper)}")
    if rep.notes:
        lines.append(f"note: {rep.notes}")
    _emit(args, "\n".join(lines), {
        "s": frac_str(rep.s),
        "t": rep.t,
        "lower": [[label, frac_str(v)] for label, v in rep.lower],
        "upper": [[label, frac_str(v)] for label, v in rep.upper],
        "limit": [rep.limit[0], frac_str(rep.limit[1])] if rep.limit is not None else None,
        "best_lower": frac_str(rep.best_lower) if rep.best_lower is not None else None,
        "best_upper": frac_str(rep.best_upper),
        "tight": rep.tight,
        "notes": rep.notes,
    })
    return EXIT_OK


def _s_list(text: str) -> List[Fraction]:
    return [parse_rational(x) for x in text.split(",") if x.strip()]


def cmd_table(args) -> int:
    reports = bound_table(_s_list(args.s_list), range(args.t_min, args.t_max + 1))
    df = bound_table_frame(reports)
    if args.csv:
        save_table(df, args.csv)
        logger.info("wrote %d rows to %s", len(df), args.csv)
    _emit(args, df.to_string(index=False), {"rows": json.loads(df.to_json(orient="records"))})
    return EXIT_OK


def cmd_emulate(args) -> int:
    code = load_code(_read(args.code))
    cert = load_certificate(_read(args.cert))
    ok, violation = check_certificate(code, cert)
    if not ok:
        _emit(args, f"invalid certificate: {violation}", {"ok": False, "violation": str(violation)})
        return EXIT_FAIL
    report = emulate_trials(code, cert, trials=args.trials, seed=args.seed, word_bits=args.word_bits)
    lines = [
        f"databases={report.databases} recoveries={report.recoveries} failures={len(report.failures)}",
        f"stored words={report.stored_words} storage overhead={frac_str(Fraction(report.stored_words, code.p))}",
    ]
    lines += [f"  {f}" for f in report.failures[:20]]
    _emit(args, "\n".join(lines), {
        "ok": report.ok,
        "databases": report.databases,
        "recoveries": report.recoveries,
        "failures": [str(f) for f in report.failures],
        "stored_words": report.stored_words,
    })
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_example(args) -> int:
    code = paper_example()
    if args.out:
        cert_path = args.cert or _cert_path(args.out)
        _write(args.out, save_code(code))
        _write(cert_path, _read(EXAMPLE_CERT_PATH))
        text = f"wrote {args.out} and {cert_path}"
    else:
        text = save_code(code).decode("utf-8").rstrip()
    _emit(args, text, {"p": code.p, "t": code.t, "m": code.m, "out": args.out})
    return EXIT_OK


def cmd_grid(args) -> int:
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    t_values = range(args.t_min, args.t_max + 1)
    instances = [Instance(f, s, t) for f in families for s in _s_list(args.s_list) for t in t_values]
    rows = run_grid(instances, verify_limit=args.verify_limit, max_servers=args.max_servers)
    df = pd.DataFrame(rows)
    if args.out:
        save_table(df, args.out)
    _emit(args, df.to_string(index=False), {"rows": rows})
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pirarray", description="PIR array codes: construct, verify, bound, emulate")
    ap.add_argument("--format", choices=["text", "json"], default="text")
    ap.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING ... (default from config.yaml)")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a code family and its recovery certificate")
    c.add_argument("--family", choices=family_names() + ["auto"], required=True)
    c.add_argument("--t", type=int)
    c.add_argument("--d", type=int)
    c.add_argument("--s")
    c.add_argument("--steiner", help="Steiner system file for c2 (generated when omitted)")
    c.add_argument("--out")
    c.add_argument("--cert")
    c.add_argument("--max-servers", type=int)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="compute k of a code file")
    v.add_argument("--code", required=True)
    v.add_argument("--exact-limit", type=int)
    v.add_argument("--node-budget", type=int)
    v.set_defaults(func=cmd_verify)

    ce = sub.add_parser("certify", help="check a recovery certificate against a code")
    ce.add_argument("--code", required=True)
    ce.add_argument("--cert", required=True)
    ce.set_defaults(func=cmd_certify)

    b = sub.add_parser("bounds", help="lower and upper rate bounds for one (s, t)")
    b.add_argument("--s", required=True)
    b.add_argument("--t", type=int, required=True)
    b.set_defaults(func=cmd_bounds)

    tb = sub.add_parser("table", help="bound table over a grid of (s, t)")
    tb.add_argument("--s-list", required=True)
    tb.add_argument("--t-min", type=int, default=1)
    tb.add_argument("--t-max", type=int, required=True)
    tb.add_argument("--csv", help="output file (.csv or .xlsx)")
    tb.set_defaults(func=cmd_table)

    e = sub.add_parser("emulate", help="recover every part from every certificate set over random databases")
    e.add_argument("--code", required=True)
    e.add_argument("--cert", required=True)
    e.add_argument("--seed", type=int)
    e.add_argument("--trials", type=int)
    e.add_argument("--word-bits", type=int)
    e.set_defaults(func=cmd_emulate)

    ex = sub.add_parser("example", help="the bundled [7x4, 12] 3-PIR example")
    ex.add_argument("--out")
    ex.add_argument("--cert")
    ex.set_defaults(func=cmd_example)

    g = sub.add_parser("grid", help="build and certify a grid of instances")
    g.add_argument("--families", default="auto", help="comma-separated family names or auto")
    g.add_argument("--s-list", required=True)
    g.add_argument("--t-min", type=int, default=2)
    g.add_argument("--t-max", type=int, required=True)
    g.add_argument("--verify-limit", type=int, default=0, help="exact-verify instances with m up to this")
    g.add_argument("--max-servers", type=int)
    g.add_argument("--out", help="output file (.csv or .xlsx)")
    g.set_defaults(func=cmd_grid)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = args.log_level or load_cfg()["logging"]["level"]
    logging.basicConfig(level=str(level).upper(), stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConstructionInvariantError as e:
        logger.error("internal error: %s", e)
        return EXIT_INTERNAL
    except (ParameterError, FormatError, DesignError, CapacityError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
