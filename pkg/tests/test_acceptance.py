"""The twelve acceptance criteria, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time

import pytest

from ringforge.builtin import BUILTIN_DEFINITIONS
from ringforge.closedness import (check_n_adically_closed, check_two_unit_equivalence, minimal_m,
                                  verify_root_free)
from ringforge.colimit import build_fpbar_tower
from ringforge.ideals import enumerate_spectrum
from ringforge.parser import parse_definitions
from ringforge.spectrum import (IIP_MODES, check_iip, classify_prime_sum, finite_polygon_search,
                                recheck_sum_classification, validate_polygon)
from ringforge.suites import (brute_force_primes, colimit_lines, constant_system_lines, corpus, gluing_trial,
                              is_field, semilocal_lines)
from ringforge.rings import ZModRing
from ringforge.witness import certify_not_closed, verify_certificate

CORPUS = corpus(full=True)
DEFS = parse_definitions(BUILTIN_DEFINITIONS)


def _key(I):
    return I.mask.tobytes()


def spectrum_oracle():
    for R in CORPUS:
        got = {_key(P.ideal) for P in enumerate_spectrum(R).primes}
        want = {_key(I) for I in brute_force_primes(R)}
        if got != want:
            return False, f"{R.name}: {len(got)} primes by idempotents, {len(want)} by definition"
    return True, f"{len(CORPUS)} rings"


def iip_equivalence():
    for R in CORPUS:
        for mode in IIP_MODES:
            r = check_iip(R, mode)
            if not (r.holds and r.equivalent):
                return False, f"{R.name} {mode}: verdicts {r.verdicts}"
    return True, f"{len(CORPUS)} rings, 3 criteria"


def fields_not_closed():
    count = 0
    for R in (R for R in CORPUS if is_field(R)):
        for n in (2, 3, 4):
            r = check_n_adically_closed(R, n, seed=0)
            if r.verdict != "not-closed" or not verify_root_free(R, r.counterexample):
                return False, f"{R.name} n={n}: {r.verdict}"
            if R.size ** n <= 1 << 20 and not r.exhaustive:
                return False, f"{R.name} n={n}: sampled although exhaustive was within budget"
            count += 1
    return True, f"{count} field/degree pairs"


def two_unit():
    count = 0
    for R in CORPUS:
        if not R.is_unit(R.from_int(2)):
            continue
        r = check_two_unit_equivalence(R)
        if not r.holds:
            return False, f"{R.name}: closed {r.quadratically_closed}, squaring onto {r.squaring_surjective}"
        count += 1
    return True, f"{count} rings with 2 a unit"


def arithmetic_fact():
    for n in range(2, 13):
        m = next(m for m in range(1, 100) if (n - 1) ** m < n ** (m - 1))
        if minimal_m(n) != m:
            return False, f"n={n}: {minimal_m(n)} != {m}"
    values = [minimal_m(n) for n in (2, 3, 4)]
    return values == [2, 3, 5], f"m(2), m(3), m(4) = {values}"


def _triangle_ok(desc, beta, mode="quadratic", n=None):
    if not validate_polygon(desc).valid or desc.n != 3:
        return False, f"{desc.name} does not validate"
    rep = certify_not_closed(desc, mode, n)
    R = desc.edge_ideal(0).ring
    if rep.beta != R(beta):
        return False, f"{desc.name}: beta = {rep.beta}"
    cert = rep.certificate
    branches = {cand.values[1] for cand in cert.candidates if cand.failure is not None}
    if cert.root_found or branches != set(cert.root_sets[1]):
        return False, f"{desc.name}: a branch is not refuted"
    for order in ("grevlex", "lex"):
        v = verify_certificate(rep, order)
        if not v:
            return False, f"{desc.name} {order}: {v.failure}"
    return True, rep


def triangle_pipeline():
    for name, beta in (("triangle", "x*y + y^2 + y"), ("triangle3", "x*y + y^2 - y")):
        ok, info = _triangle_ok(DEFS.polygons[name], beta)
        if not ok:
            return False, info
    return True, "F_2 and F_3 triangles certified in both orders"


def power_extension():
    for n in (2, 3):
        ok, rep = _triangle_ok(DEFS.polygons["triangle"], "x*y + y^2 + y", "2n", n)
        if not ok:
            return False, rep
        if not rep.reducedness or len(rep.power_witness) != 2 * n + 1:
            return False, f"n={n}: power witness incomplete"
    return True, "n = 2, 3"


def crt_gluing():
    rng = random.Random(2024)
    kinds = ("zmod30", "zmod60", "poly")
    for t in range(200):
        ok, detail = gluing_trial(rng, kinds[t % 3])
        if not ok:
            return False, detail
    return True, "200 problems over Z/30, Z/60, F_2[x,y]"


def semilocalization():
    for R in CORPUS:
        line = semilocal_lines(R, double_cap=64)[0]
        if line.verdict != "PASS":
            return False, f"{R.name}: {line.detail}"
    return True, f"{len(CORPUS)} rings"


def colimit_suites():
    T = build_fpbar_tower(2, [1, 2, 6, 24])
    lines = colimit_lines(T, count=100, degree=6, seed=0)
    lines += constant_system_lines(ZModRing(6))[:1]
    bad = [l for l in lines if l.verdict != "PASS"]
    if bad:
        return False, f"{bad[0].lemma}: {bad[0].detail}"
    return True, lines[2].detail


def polygon_absence():
    for R in CORPUS:
        if not enumerate_spectrum(R).is_antichain():
            return False, f"{R.name}: spectrum is not an antichain"
        for n in (3, 4, 5):
            if finite_polygon_search(R, n):
                return False, f"{R.name}: {n}-gon found"
    return True, f"{len(CORPUS)} rings, n = 3, 4, 5"


def sum_classification():
    parabola, crossing = DEFS.spectra["parabola"], DEFS.spectra["crossing"]
    p, q = parabola.primes
    c = classify_prime_sum(p, q)
    if c.verdict != "ProperNonPrime" or c.via != "zero-dimensional-bridge" or not recheck_sum_classification(c, p, q):
        return False, f"(y - x^2) + (y - 1): {c.verdict} via {c.via}"
    x, y = crossing.primes
    c = classify_prime_sum(x, y)
    if c.verdict != "Prime" or c.via != "zero-dimensional-bridge":
        return False, f"(x) + (y): {c.verdict} via {c.via}"
    return True, "ProperNonPrime and Prime through the bridge"


CRITERIA = [
    (1, "spectrum oracle equivalence", spectrum_oracle, 10),
    (2, "IIP criterion equivalence", iip_equivalence, 30),
    (3, "finite fields not n-adically closed", fields_not_closed, 60),
    (4, "two-unit equivalence", two_unit, 5),
    (5, "arithmetic fact", arithmetic_fact, 1),
    (6, "triangle pipeline", triangle_pipeline, 10),
    (7, "2n extension", power_extension, 5),
    (8, "CRT gluing", crt_gluing, 30),
    (9, "semi-localization", semilocalization, 60),
    (10, "colimit suites", colimit_suites, 120),
    (11, "polygon absence on finite spectra", polygon_absence, 10),
    (12, "sum-of-primes classification", sum_classification, 5),
]


def run_criterion(fn, limit):
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:       # a crash is a failed criterion, not a harness error
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if ok and elapsed > limit:
        ok, detail = False, f"{detail}; took {elapsed:.2f}s, limit {limit}s"
    return ok, str(detail), elapsed


def line(num, name, ok, detail, elapsed):
    return f"criterion {num:>2} {'PASS' if ok else 'FAIL'}  {name} ({elapsed:.2f}s): {detail}"


@pytest.mark.parametrize("num,name,fn,limit", CRITERIA, ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(num, name, fn, limit, capsys):
    ok, detail, elapsed = run_criterion(fn, limit)
    with capsys.disabled():
        print("\n" + line(num, name, ok, detail, elapsed))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num, name, fn, limit in CRITERIA:
        ok, detail, elapsed = run_criterion(fn, limit)
        failed += not ok
        print(line(num, name, ok, detail, elapsed))
    sys.exit(1 if failed else 0)
