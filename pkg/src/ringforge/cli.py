"""Command line front end: ``ringforge <command> ...``."""

import argparse
import json
import re
import sys

from .builtin import BUILTIN_DEFINITIONS
from .closedness import EXHAUSTIVE_BUDGET, SAMPLE_COUNT
from .errors import BudgetExceeded, DefinitionError, RingforgeError
from .ideals import enumerate_spectrum, prime_handle
from .parser import load_definitions, parse_definitions, parse_list
from .rings import GaloisFieldRing, ProductRing, ZModRing
from .spectrum import (check_iip, filter_spectrum_semilocal, join_locality_check, polygon_spectrum,
                       poly_prime, search_polygons)
from . import suites
from .suites import Budgets, ReportLine

COMMANDS = ("spec", "check-nadic", "check-iip", "classify-sum", "semilocal", "join", "validate-polygon",
            "search-polygons", "extract-witness", "colimit", "run-suite")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# subjects


def _prime_power(q):
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                raise UsageError(f"{q} is not a prime power")
            return p, k
    raise UsageError(f"bad field size {q}")


def resolve_ring(text, defs):
    """A declared ring name, or inline 'zmod12', 'Z/12', 'gf(4)', 'gf 3 2', joined by '*' for products."""
    text = text.strip()
    if text in defs.rings:
        return defs.rings[text]
    if "*" in text:
        return ProductRing([resolve_ring(t, defs) for t in text.split("*")])
    m = re.fullmatch(r"(?:zmod\s*\(?\s*|z/)(\d+)\)?", text, re.I)
    if m:
        return ZModRing(int(m.group(1)))
    m = re.fullmatch(r"gf\s*\(?\s*(\d+)\s*\)?", text, re.I)
    if m:
        p, k = _prime_power(int(m.group(1)))
        return GaloisFieldRing(p, k)
    m = re.fullmatch(r"gf\s+(\d+)\s+(\d+)", text, re.I)
    if m:
        return GaloisFieldRing(int(m.group(1)), int(m.group(2)))
    raise UsageError(f"unknown ring {text!r}")


def _lookup(table, name, kind):
    if name not in table:
        known = ", ".join(sorted(table)) or "none"
        raise UsageError(f"unknown {kind} {name!r} (known: {known})")
    return table[name]


def _finite_prime(ring, text):
    gens = parse_list(text) if text.strip().startswith("[") else [text]
    return prime_handle(ring, [ring.parse(g) for g in gens])


def _poly_gens(R, text):
    gens = parse_list(text) if text.strip().startswith("[") else [text]
    return [R(g) for g in gens]


def _spectrum_prime(spec, R, text):
    """The declared prime of ``spec`` equal to the ideal written in ``text``."""
    from .groebner import PolyIdeal
    I = PolyIdeal(R, _poly_gens(R, text))
    for P in spec.primes:
        if P.ideal == I:
            return P
    raise UsageError(f"({text}) is not a declared prime of the spectrum")


# ---------------------------------------------------------------------------
# commands


def cmd_spec(args, defs, budgets):
    if args.ring:
        rings = [resolve_ring(args.ring, defs)]
    elif args.spectrum:
        spec = _lookup(defs.spectra, args.spectrum, "spectrum")
        primes = ", ".join(f"{P.ideal} [{P.certification}]" for P in spec.primes)
        maxi = ", ".join(str(spec.primes[i].ideal) for i in spec.maximal())
        return [ReportLine("spectrum", "declared-spectrum", args.spectrum, "PASS",
                           f"primes {primes}; maximal {maxi}")]
    else:
        rings = list(defs.rings.values())
        if not rings:
            raise UsageError("give --ring or --spectrum, or declare rings in a definitions file")
    return [line for R in rings for line in suites.spectrum_lines(R, budgets)]


def cmd_check_nadic(args, defs, budgets):
    R = resolve_ring(args.ring, defs)
    return suites.nadic_claim_lines(R, args.n, budgets)


def cmd_check_iip(args, defs, budgets):
    return suites.iip_lines(resolve_ring(args.ring, defs), budgets)


def cmd_classify_sum(args, defs, budgets):
    if args.ring:
        R = resolve_ring(args.ring, defs)
        p, q = _finite_prime(R, args.p), _finite_prime(R, args.q)
        subject = R.name
    else:
        if not args.polyring:
            raise UsageError("classify-sum needs --ring or --polyring")
        R = _lookup(defs.polyrings, args.polyring, "polyring")
        level = "user-asserted" if args.assert_prime else None
        p = poly_prime(R, _poly_gens(R, args.p), level)
        q = poly_prime(R, _poly_gens(R, args.q), level)
        subject = args.polyring
    return suites.classify_lines(p, q, subject)[0]


def cmd_semilocal(args, defs, budgets):
    if args.spectrum:
        spec = _lookup(defs.spectra, args.spectrum, "spectrum")
        R = spec.primes[0].ideal.ring
        keep = [_spectrum_prime(spec, R, "[" + ",".join(g) + "]") for g in parse_list(args.primes)]
        kept = filter_spectrum_semilocal(spec, keep)
        maxi = ", ".join(str(kept.primes[i].ideal) for i in kept.maximal())
        return [ReportLine("semilocal", "semilocal-spectrum", args.spectrum, "PASS",
                           f"survivors {', '.join(str(P.ideal) for P in kept.primes)}; maximal {maxi}")]
    R = resolve_ring(args.ring, defs)
    chosen = [prime_handle(R, [R.parse(g) for g in gens]) for gens in parse_list(args.primes)]
    ok, detail, _ = suites.semilocal_check(R, chosen)
    return [ReportLine("semilocal", "semilocal-spectrum", R.name, "PASS" if ok else "FAIL", detail)]


def cmd_join(args, defs, budgets):
    if args.spectrum:
        spec = _lookup(defs.spectra, args.spectrum, "spectrum")
        R = spec.primes[0].ideal.ring
        P, Q = _spectrum_prime(spec, R, args.p), _spectrum_prime(spec, R, args.q)
        rep = join_locality_check(spec, P, Q)
        return [ReportLine("spectrum", "join-locality", args.spectrum, suites.join_verdict(rep, None),
                           suites.join_detail(rep))]
    R = resolve_ring(args.ring, defs)
    spec = enumerate_spectrum(R)
    rep = join_locality_check(spec, _finite_prime(R, args.p), _finite_prime(R, args.q))
    return [ReportLine("spectrum", "join-locality", R.name, suites.join_verdict(rep, check_iip(R).holds),
                       suites.join_detail(rep))]


def cmd_validate_polygon(args, defs, budgets):
    names = [args.name] if args.name else sorted(defs.polygons)
    return [line for n in names for line in suites.polygon_lines(_lookup(defs.polygons, n, "polygon"))]


def cmd_search_polygons(args, defs, budgets):
    if args.ring:
        R = resolve_ring(args.ring, defs)
        return suites.polygon_absence_lines(R, [args.n])
    if args.spectrum:
        spec, subject = _lookup(defs.spectra, args.spectrum, "spectrum"), args.spectrum
    elif args.polygon:
        spec, subject = polygon_spectrum(_lookup(defs.polygons, args.polygon, "polygon")), args.polygon
    else:
        raise UsageError("search-polygons needs --ring, --spectrum or --polygon")
    found = search_polygons(spec, args.n)
    detail = f"{len(found)} polygons up to rotation and reflection"
    if found:
        detail += "; first: edges " + ", ".join(str(e) for e in found[0].edges)
    return [ReportLine("polygon", "polygon-search", f"{subject} n={args.n}", "PASS", detail)]


def cmd_extract_witness(args, defs, budgets):
    desc = _lookup(defs.polygons, args.name, "polygon")
    lines, rep = suites.witness_lines(desc, args.mode, args.n)
    if rep is not None and args.emit:
        doc = dict(polygon=desc.name, characteristic=rep.characteristic, confidence=rep.confidence,
                   witness=rep.witness_text(), power=rep.power_text(), records=rep.records(),
                   verdict=lines[0].verdict, narrative=rep.narrative())
        with open(args.emit, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, ensure_ascii=False, default=str)
            fh.write("\n")
    if rep is not None and args.narrative:
        args.extra_text = rep.narrative()
    return lines


def cmd_colimit(args, defs, budgets):
    seed = budgets.seed if budgets.seed is not None else 0
    if args.ring:
        return suites.constant_system_lines(resolve_ring(args.ring, defs), n=args.n, seed=seed)
    T = _lookup(defs.towers, args.tower, "tower")
    if T.levels[-1] > budgets.max_tower_level:
        return [ReportLine("colimit", "colimit-splitting", T.name, "UNDECIDED",
                           f"top level {T.levels[-1]} exceeds --max-tower-level {budgets.max_tower_level}")]
    return suites.colimit_lines(T, count=args.count, degree=args.degree, seed=seed)


def cmd_run_suite(args, defs, budgets):
    if args.which != "all":
        raise UsageError("only 'run-suite all' is available")
    if budgets.seed is None:
        budgets.seed = 0
    return suites.run_all(defs, budgets)


# ---------------------------------------------------------------------------
# entry point


def build_parser():
    ap = argparse.ArgumentParser(prog="ringforge", description="Finite and polynomial ring verifiers.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--defs", action="append", default=[], help="definitions file (repeatable)")
    common.add_argument("--format", choices=("human", "records"), default="human")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--budget-exhaustive", type=int, default=EXHAUSTIVE_BUDGET)
    common.add_argument("--sample-count", type=int, default=SAMPLE_COUNT)
    common.add_argument("--max-tower-level", type=int, default=24)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spec", parents=[common], help="prime spectrum with the brute-force oracle")
    p.add_argument("--ring")
    p.add_argument("--spectrum")
    p.set_defaults(func=cmd_spec)

    p = sub.add_parser("check-nadic", parents=[common], help="is every monic of degree n solvable")
    p.add_argument("--ring", required=True)
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=cmd_check_nadic)

    p = sub.add_parser("check-iip", parents=[common], help="irreducible intersection property")
    p.add_argument("--ring", required=True)
    p.set_defaults(func=cmd_check_iip)

    p = sub.add_parser("classify-sum", parents=[common], help="classify the sum of two primes")
    p.add_argument("--ring")
    p.add_argument("--polyring")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--assert-prime", action="store_true", help="accept the polynomial primes as asserted")
    p.set_defaults(func=cmd_classify_sum)

    p = sub.add_parser("semilocal", parents=[common], help="semi-localize at incomparable primes")
    p.add_argument("--ring")
    p.add_argument("--spectrum")
    p.add_argument("--primes", required=True, help="e.g. [[2],[3]]")
    p.set_defaults(func=cmd_semilocal)

    p = sub.add_parser("join", parents=[common], help="locality of the primes below p and q")
    p.add_argument("--ring")
    p.add_argument("--spectrum")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.set_defaults(func=cmd_join)

    p = sub.add_parser("validate-polygon", parents=[common], help="check a declared polygon")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_validate_polygon)

    p = sub.add_parser("search-polygons", parents=[common], help="search a spectrum for polygons")
    p.add_argument("--ring")
    p.add_argument("--spectrum")
    p.add_argument("--polygon")
    p.add_argument("--n", type=int, default=3)
    p.set_defaults(func=cmd_search_polygons)

    p = sub.add_parser("extract-witness", parents=[common], help="certify a polygon quotient is not closed")
    p.add_argument("name")
    p.add_argument("--mode", choices=("quadratic", "2n"), default="quadratic")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--emit", help="write the structured certificate to this path")
    p.add_argument("--narrative", action="store_true", help="print the proof narrative (human format)")
    p.set_defaults(func=cmd_extract_witness)

    p = sub.add_parser("colimit", parents=[common], help="colimit coherence and preservation suites")
    p.add_argument("--tower", default="fpbar2")
    p.add_argument("--ring", help="use the constant system on this ring instead of a tower")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=cmd_colimit)

    p = sub.add_parser("run-suite", parents=[common], help="run every suite")
    p.add_argument("which", choices=("all",))
    p.set_defaults(func=cmd_run_suite)
    return ap


def load_all(paths):
    defs = parse_definitions(BUILTIN_DEFINITIONS)
    for path in paths:
        extra = load_definitions(path)
        for kind in ("rings", "polyrings", "spectra", "polygons", "towers", "localizations"):
            getattr(defs, kind).update(getattr(extra, kind))
    return defs


def emit(lines, fmt, out):
    for line in lines:
        if fmt == "records":
            out.write(json.dumps(line.record(), ensure_ascii=False) + "\n")
        else:
            out.write(line.human() + "\n")


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    args.extra_text = None
    budgets = Budgets(args.budget_exhaustive, args.sample_count, args.seed, args.max_tower_level)
    try:
        defs = load_all(args.defs)
        lines = args.func(args, defs, budgets)
    except DefinitionError as exc:
        print(f"ringforge: definition error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, RingforgeError, ValueError, OSError) as exc:
        if isinstance(exc, BudgetExceeded):
            lines = [ReportLine(args.command, "budget", "-", "UNDECIDED", str(exc))]
        else:
            print(f"ringforge: {exc}", file=sys.stderr)
            return 2
    emit(lines, args.format, out)
    if args.extra_text and args.format == "human":
        out.write(args.extra_text + "\n")
    return 1 if any(line.verdict == "FAIL" for line in lines) else 0


if __name__ == "__main__":
    sys.exit(main())
