"""Report lines and the lemma suites behind the command line."""

import itertools
import random
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .closedness import (EXHAUSTIVE_BUDGET, SAMPLE_COUNT, check_conditional_hypothesis,
                         check_decreasing_degree, check_n_adically_closed, check_two_unit_equivalence,
                         minimal_m, radical_descent, verify_root_free)
from .colimit import (DirectedSystem, build_fpbar_tower, check_embedding_coherence,
                      check_representative_independence, run_preservation_suite)
from .errors import BudgetExceeded, CertificateError, RingforgeError, RootOracleFailure
from .groebner import PolyIdeal, PolyRing, intersect_all, zero_dim_check
from .ideals import (IDEAL_LATTICE_CAP, LocalizationSpec, classify_ideal, enumerate_spectrum,
                     ideal_combine, ideal_expand, ideal_lattice, localize_finite, quotient_ring)
from .rings import GaloisFieldRing, ProductRing, ZModRing, find_isomorphism
from .spectrum import (IIP_MODES, check_iip, classify_prime_sum, join_locality_check,
                       recheck_sum_classification, search_polygons, validate_polygon)
from .witness import GluingProblem, certify_not_closed, glue_many, verify_certificate

VERDICTS = ("PASS", "FAIL", "VACUOUS", "UNDECIDED", "HYPOTHESIS-NOT-MET")


@dataclass(frozen=True)
class ReportLine:
    suite: str
    lemma: str
    subject: str
    verdict: str
    detail: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    def record(self):
        return asdict(self)

    def human(self):
        return f"{self.verdict:<18} {self.suite}/{self.lemma} [{self.subject}] {self.detail}".rstrip()


@dataclass
class Budgets:
    exhaustive: int = EXHAUSTIVE_BUDGET
    sample_count: int = SAMPLE_COUNT
    seed: Optional[int] = None
    max_tower_level: int = 24
    lattice_cap: int = IDEAL_LATTICE_CAP


def guarded(suite, lemma, subject, fn):
    """Run ``fn`` (returning lines); budget exhaustion becomes an UNDECIDED line."""
    try:
        return list(fn())
    except BudgetExceeded as exc:
        return [ReportLine(suite, lemma, subject, "UNDECIDED", f"budget exceeded: {exc}")]


def _fmt_ideal(I):
    return str(getattr(I, "ideal", I))


# ---------------------------------------------------------------------------
# corpus


def is_field(ring):
    return ring.size > 1 and all(ring.is_unit(x) for x in ring.elements if x != ring.zero)


def corpus(full=False):
    """Finite rings exercised by the suites; ``full`` is the acceptance corpus."""
    Z = ZModRing
    if full:
        rings = [Z(n) for n in range(2, 65)]
        rings += [GaloisFieldRing(p, k) for p, k in ((2, 2), (2, 3), (2, 4), (3, 2))]
    else:
        rings = [Z(n) for n in (2, 3, 4, 6, 8, 9, 12, 30)]
        rings += [GaloisFieldRing(2, 2), GaloisFieldRing(2, 3), GaloisFieldRing(3, 2)]
    rings += [
        ProductRing([Z(2), Z(3)]),
        ProductRing([Z(2), Z(2)]),
        ProductRing([Z(4), Z(2)]),
        ProductRing([Z(2), GaloisFieldRing(2, 2)]),
        ProductRing([Z(3), Z(3)]),
        ProductRing([Z(2), Z(3), Z(5)]),
        ProductRing([Z(9), Z(2)]),
        quotient_ring(Z(12), ideal_expand(Z(12), [4])),
        quotient_ring(Z(36), ideal_expand(Z(36), [6])),
        quotient_ring(Z(60), ideal_expand(Z(60), [20])),
    ]
    if full:
        rings += [
            ProductRing([Z(4), Z(4)]),
            ProductRing([GaloisFieldRing(2, 2), GaloisFieldRing(2, 2)]),
            quotient_ring(ProductRing([Z(4), Z(6)]), ideal_expand(ProductRing([Z(4), Z(6)]), [(2, 3)])),
        ]
    return rings


# ---------------------------------------------------------------------------
# spectrum and IIP


def brute_force_primes(ring, cap=IDEAL_LATTICE_CAP):
    """Prime ideals by the definition, over the whole ideal lattice."""
    return [I for I in ideal_lattice(ring, cap=cap) if I.is_proper and classify_ideal(ring, I).prime]


def spectrum_lines(ring, budgets=None):
    b = budgets or Budgets()

    def run():
        spec = enumerate_spectrum(ring)
        got = {P.ideal.mask.tobytes() for P in spec.primes}
        want = {I.mask.tobytes() for I in brute_force_primes(ring, b.lattice_cap)}
        names = ", ".join(_fmt_ideal(P) for P in spec.primes)
        maxi = ", ".join(_fmt_ideal(spec.primes[i]) for i in spec.maximal())
        verdict = "PASS" if got == want else "FAIL"
        detail = f"primes {names}; maximal {maxi}"
        if got != want:
            detail += f"; brute force finds {len(want)} primes, idempotent decomposition {len(got)}"
        yield ReportLine("spectrum", "spectrum-oracle", ring.name, verdict, detail)
    return guarded("spectrum", "spectrum-oracle", ring.name, run)


def iip_lines(ring, budgets=None):
    b = budgets or Budgets()

    def run():
        rep = check_iip(ring, lattice_cap=b.lattice_cap)
        for mode in IIP_MODES:
            if rep.verdicts[mode]:
                yield ReportLine("iip", f"iip-{mode}", ring.name, "PASS", f"{len(rep.pairs)} prime pairs")
            else:
                yield ReportLine("iip", f"iip-{mode}", ring.name, "FAIL",
                                 f"counterexample {_describe(rep.counterexamples[mode])}")
        yield ReportLine("iip", "iip-criteria-agree", ring.name, "PASS" if rep.equivalent else "FAIL",
                         ", ".join(f"{m}={rep.verdicts[m]}" for m in IIP_MODES))
    return guarded("iip", "iip-criteria", ring.name, run)


def _describe(cex):
    if len(cex) == 3:
        p, q, c = cex
        w = "" if c.witness is None else f" witness {c.witness}"
        return f"{_fmt_ideal(p)} + {_fmt_ideal(q)} is {c.verdict}{w}"
    I, r = cex
    return f"ideal {I}: maximal primes below {[_fmt_ideal(P) for P in r.maxima]}"


# ---------------------------------------------------------------------------
# closedness


def nadic_claim_lines(ring, n, budgets=None):
    """The claim 'ring is n-adically closed' (FAIL carries the root-free monic)."""
    b = budgets or Budgets()

    def run():
        r = check_n_adically_closed(ring, n, b.exhaustive, b.sample_count, b.seed)
        how = "exhaustive" if r.exhaustive else f"sampled, seed {r.seed}"
        if r.verdict == "closed":
            yield ReportLine("closedness", "n-adic-closed", ring.name, "PASS",
                             f"every monic of degree {n} has a root ({r.coverage} checked, {how})")
        elif r.verdict == "not-closed":
            yield ReportLine("closedness", "n-adic-closed", ring.name, "FAIL",
                             f"{r.text} has no root in {ring.name} ({how}, found after {r.coverage})")
        else:
            yield ReportLine("closedness", "n-adic-closed", ring.name, "UNDECIDED",
                             f"no counterexample among {r.coverage} samples (seed {r.seed})")
    return guarded("closedness", "n-adic-closed", ring.name, run)


def finite_field_lines(ring, n, budgets=None):
    """Finite fields are never n-adically closed: PASS means a verified root-free monic."""
    b = budgets or Budgets()

    def run():
        r = check_n_adically_closed(ring, n, b.exhaustive, b.sample_count, b.seed)
        subject = f"{ring.name} n={n}"
        if r.verdict == "not-closed" and verify_root_free(ring, r.counterexample):
            yield ReportLine("closedness", "finite-field-not-closed", subject, "PASS", f"{r.text} has no root")
        elif r.verdict == "closed":
            yield ReportLine("closedness", "finite-field-not-closed", subject, "FAIL",
                             "every monic has a root")
        else:
            yield ReportLine("closedness", "finite-field-not-closed", subject, "UNDECIDED",
                             f"no counterexample among {r.coverage} samples (seed {r.seed})")
    return guarded("closedness", "finite-field-not-closed", ring.name, run)


def two_unit_lines(ring):
    r = check_two_unit_equivalence(ring)
    if not r.hypothesis_met:
        return [ReportLine("closedness", "two-unit", ring.name, "HYPOTHESIS-NOT-MET", "2 is not a unit")]
    detail = f"quadratically closed={r.quadratically_closed}, squaring onto={r.squaring_surjective}"
    if r.non_square is not None:
        detail += f", non-square {ring.format(r.non_square)}"
    return [ReportLine("closedness", "two-unit", ring.name, "PASS" if r.holds else "FAIL", detail)]


def power_inequality_lines(ns=range(2, 13)):
    out = []
    for n in ns:
        m = minimal_m(n)
        oracle = next(k for k in itertools.count(1) if (n - 1) ** k < n ** (k - 1))
        ok = m == oracle and (n - 1) ** m < n ** (m - 1)
        out.append(ReportLine("closedness", "power-inequality", f"n={n}", "PASS" if ok else "FAIL",
                              f"m={m}, k={n ** (m - 1) - (n - 1) ** m}"))
    return out


def descent_lines(ring, n):
    """p + q radical via descent certificates; finite rings are never n-adically closed."""
    def run():
        closed = check_n_adically_closed(ring, n, seed=0).closed
        primes = enumerate_spectrum(ring).primes
        certified = oracle_missing = 0
        for P, Q in itertools.combinations_with_replacement(primes, 2):
            S = ideal_combine(ring, P.ideal, Q.ideal, "sum")
            for x in ring.elements:
                if ring.pow(x, n) not in S.expansion:
                    continue
                try:
                    radical_descent(ring, P.ideal, Q.ideal, x, n)
                    certified += 1
                except RootOracleFailure:
                    oracle_missing += 1
                except CertificateError as exc:
                    return [ReportLine("closedness", "radical-descent", ring.name, "FAIL", str(exc))]
        detail = f"n={n}: {certified} certificates, {oracle_missing} blocked by a missing n-th root"
        verdict = ("PASS" if not oracle_missing else "FAIL") if closed else "VACUOUS"
        return [ReportLine("closedness", "radical-descent", ring.name, verdict, detail)]
    return guarded("closedness", "radical-descent", ring.name, run)


def conditional_lines(ring, n):
    def run():
        r = check_conditional_hypothesis(ring, n)
        subject = f"{ring.name} n={n}"
        if not r.hypothesis:
            P, a, b = r.counterexample
            yield ReportLine("closedness", "conditional-roots", subject, "VACUOUS",
                             f"T^{n} + {ring.format(a)}*T^{n - 1} + {ring.format(b)} has no root outside {_fmt_ideal(P)}")
        elif r.sums_primary:
            yield ReportLine("closedness", "conditional-roots", subject, "PASS", "proper prime sums are primary")
        else:
            P, Q = r.non_primary
            yield ReportLine("closedness", "conditional-roots", subject, "FAIL",
                             f"{_fmt_ideal(P)} + {_fmt_ideal(Q)} is not primary")
    return guarded("closedness", "conditional-roots", ring.name, run)


_DD = {"skipped": "HYPOTHESIS-NOT-MET", "vacuous": "VACUOUS", "undecided": "UNDECIDED", "pass": "PASS",
       "fail": "FAIL"}


def decreasing_degree_lines(ring, n, budgets=None):
    b = budgets or Budgets()

    def run():
        r = check_decreasing_degree(ring, n, b.exhaustive, b.sample_count, b.seed if b.seed is not None else 0)
        detail = r.reason or ", ".join(f"m={m}: {v}" for m, v in r.divisors.items())
        yield ReportLine("closedness", "decreasing-degree", f"{ring.name} n={n}", _DD[r.verdict], detail)
    return guarded("closedness", "decreasing-degree", ring.name, run)


# ---------------------------------------------------------------------------
# semi-localization and joins


def incomparable_subsets(spec, limit=None):
    """Non-empty pairwise incomparable sets of primes (indices), smallest first."""
    k = len(spec.primes)
    out = []
    for r in range(1, k + 1):
        for sub in itertools.combinations(range(k), r):
            if all(not spec.contains(a, b) for a, b in itertools.permutations(sub, 2)):
                out.append(sub)
                if limit and len(out) >= limit:
                    return out
    return out


def semilocal_prediction(spec, chosen):
    """Prime avoidance: survivors are the primes below a chosen one; the chosen are the maximal ones."""
    surv = [i for i in range(len(spec.primes)) if any(spec.contains(i, c) for c in chosen)]
    return surv, sorted(chosen)


def semilocal_check(ring, chosen_primes, spec=None):
    """(ok, detail, result) comparing a semi-localization against the prediction."""
    spec = spec or enumerate_spectrum(ring)
    chosen = [next(i for i, P in enumerate(spec.primes) if P.ideal.mask.tobytes() == Q.ideal.mask.tobytes())
              for Q in chosen_primes]
    res = localize_finite(ring, LocalizationSpec.semi_local_at([spec.primes[i] for i in chosen]))
    surv, maxi = semilocal_prediction(spec, chosen)
    key = lambda P: P.ideal.mask.tobytes()
    got_surv = sorted(key(P) for P in res.survivors)
    got_max = sorted(key(res.survivors[i]) for i in res.maximal)
    ok = got_surv == sorted(key(spec.primes[i]) for i in surv) and \
        got_max == sorted(key(spec.primes[i]) for i in maxi)
    detail = (f"at {[_fmt_ideal(spec.primes[i]) for i in chosen]}: |S^-1 R| = {res.ring.size}, "
              f"survivors {[_fmt_ideal(P) for P in res.survivors]}")
    return ok, detail, res


def double_localization_check(ring, res, base_prime, image_prime):
    """(S^-1 R) localized at the image of p is isomorphic to R_p."""
    direct = localize_finite(ring, LocalizationSpec.semi_local_at([base_prime])).ring
    twice = localize_finite(res.ring, LocalizationSpec.semi_local_at([image_prime])).ring
    return find_isomorphism(twice, direct) is not None


def semilocal_lines(ring, double_cap=64, subset_limit=None):
    def run():
        spec = enumerate_spectrum(ring)
        subsets = incomparable_subsets(spec, subset_limit)
        bad, iso_checked = [], 0
        for sub in subsets:
            ok, detail, res = semilocal_check(ring, [spec.primes[i] for i in sub], spec)
            if not ok:
                bad.append(detail)
                continue
            if ring.size <= double_cap:
                for P, img in zip(res.survivors, res.images):
                    iso_checked += 1
                    if not double_localization_check(ring, res, P, img):
                        bad.append(f"localizing again at {_fmt_ideal(P)} is not R_p")
        lines = [ReportLine("semilocal", "semilocal-spectrum", ring.name, "FAIL" if bad else "PASS",
                            bad[0] if bad else f"{len(subsets)} prime sets, {iso_checked} double localizations")]
        return lines
    return guarded("semilocal", "semilocal-spectrum", ring.name, run)


def join_verdict(report, iip_holds):
    if report.status == "local":
        return "PASS"
    if report.status == "empty":
        return "VACUOUS"
    if iip_holds is None:
        return "UNDECIDED"
    return "FAIL" if iip_holds else "HYPOTHESIS-NOT-MET"


def join_detail(report):
    surv = ", ".join(_fmt_ideal(P) for P in report.survivors) or "none"
    maxi = ", ".join(_fmt_ideal(P) for P in report.maximal) or "none"
    return f"{report.status}: survivors {surv}; maximal {maxi}"


def join_lines(ring):
    def run():
        spec = enumerate_spectrum(ring)
        holds = check_iip(ring).holds
        counts = {"local": 0, "empty": 0, "not-local": 0}
        first_bad = None
        for P, Q in itertools.combinations_with_replacement(spec.primes, 2):
            r = join_locality_check(spec, P, Q)
            counts[r.status] += 1
            if r.status == "not-local" and first_bad is None:
                first_bad = f"{_fmt_ideal(P)}, {_fmt_ideal(Q)}: {join_detail(r)}"
        if counts["not-local"]:
            verdict = "FAIL" if holds else "HYPOTHESIS-NOT-MET"
            detail = first_bad
        else:
            verdict = "PASS" if counts["local"] else "VACUOUS"
            detail = ", ".join(f"{k} {v}" for k, v in counts.items())
        return [ReportLine("spectrum", "join-locality", ring.name, verdict, detail)]
    return guarded("spectrum", "join-locality", ring.name, run)


# ---------------------------------------------------------------------------
# polygons, sums, witnesses


def polygon_lines(desc):
    rep = validate_polygon(desc)
    detail = "all containments and distinctness checks hold" if rep.valid else "; ".join(rep.failures()[:4])
    return [ReportLine("polygon", "polygon-valid", desc.name, "PASS" if rep.valid else "FAIL", detail)]


def polygon_absence_lines(ring, ns=(3, 4, 5)):
    def run():
        spec = enumerate_spectrum(ring)
        for n in ns:
            found = search_polygons(spec, n)
            detail = "no polygon" if not found else f"{len(found)} polygons, first {found[0]}"
            yield ReportLine("polygon", "finite-polygon-absent", f"{ring.name} n={n}",
                             "PASS" if not found else "FAIL", detail)
    return guarded("polygon", "finite-polygon-absent", ring.name, run)


def classify_lines(p, q, subject):
    c = classify_prime_sum(p, q)
    detail = f"{_fmt_ideal(p)} + {_fmt_ideal(q)}: {c.verdict} via {c.via}"
    if c.witness is not None:
        detail += f", witness {tuple(str(w) for w in c.witness)}"
    if c.verdict == "Undecided":
        return [ReportLine("spectrum", "prime-sum", subject, "UNDECIDED", detail)], c
    ok = recheck_sum_classification(c, p, q)
    return [ReportLine("spectrum", "prime-sum", subject, "PASS" if ok else "FAIL", detail)], c


def witness_lines(desc, mode="quadratic", n=None, orders=("grevlex", "lex")):
    """Extract and independently re-verify the obstruction certificate."""
    try:
        rep = certify_not_closed(desc, mode, n)
    except (RingforgeError, ValueError) as exc:
        return [ReportLine("witness", "polygon-obstruction", desc.name, "FAIL", str(exc))], None
    lemma = "polygon-obstruction" if mode == "quadratic" else "polygon-power-obstruction"
    failures = [f"{o}: {v.failure}" for o in orders for v in [verify_certificate(rep, o)] if not v.ok]
    text = rep.power_text() if mode == "2n" else rep.witness_text()
    detail = (f"beta = {rep.beta}, {text} has no root over R/(P_0 ∩ ... ∩ P_{desc.n - 1}), "
              f"char {rep.characteristic}, {rep.confidence}")
    if not rep.ok or failures:
        return [ReportLine("witness", lemma, desc.name, "FAIL",
                           "; ".join(failures) or "a root candidate survives")], rep
    return [ReportLine("witness", lemma, desc.name, "PASS", detail)], rep


# ---------------------------------------------------------------------------
# gluing


_POINTS = ((0, 0), (1, 0), (0, 1), (1, 1))


def random_gluing_problem(rng, kind):
    """A random solvable GluingProblem: kind is 'zmod30', 'zmod60' or 'poly'."""
    if kind in ("zmod30", "zmod60"):
        N, parts = (30, [2, 3, 5]) if kind == "zmod30" else (60, [4, 3, 5])
        R = ZModRing(N)
        k = rng.randint(2, 3)
        blocks = [[] for _ in range(k)]
        order = parts[:]
        rng.shuffle(order)
        for i, q in enumerate(order):
            blocks[i if i < k else rng.randrange(k)].append(q)
        mods = [int(np.prod(b)) for b in blocks]
        ideals = [ideal_expand(R, [m]) for m in mods]
        residues = [rng.randrange(N) for _ in range(k)]
        return GluingProblem.build(ideals, residues)
    R = PolyRing(2, ["x", "y"])
    x, y = R.gens
    k = rng.randint(2, 3)
    pts = rng.sample(_POINTS, k)
    ideals = []
    for a, b in pts:
        u, v = x + a, y + b
        shape = rng.choice([[u, v], [u * u, v], [u, v * v]])
        ideals.append(PolyIdeal(R, shape))
    monos = [R.one, x, y, x * y, x * x, y * y]
    residues = [sum((m for m in monos if rng.random() < 0.5), R.zero) for _ in range(k)]
    return GluingProblem.build(ideals, residues)


def exhaustive_solutions(problem):
    """Every solution of the congruences inside a transversal of the intersection."""
    I = problem.ideals
    if hasattr(I[0], "expansion"):
        R = I[0].ring
        return [a for a in R.elements if problem.satisfied_by(a)]
    J = intersect_all(list(I))
    zd = zero_dim_check(J)
    R = J.ring
    monos = [R.monomial(e) for e in zd.staircase]
    out = []
    for coeffs in itertools.product(range(R.p), repeat=len(monos)):
        f = sum((m.scale(c) for m, c in zip(monos, coeffs) if c), R.zero)
        if problem.satisfied_by(f):
            out.append(f)
    return out


def gluing_trial(rng, kind):
    """(ok, detail) for one random problem against exhaustive search."""
    prob = random_gluing_problem(rng, kind)
    got = glue_many(prob)
    sols = exhaustive_solutions(prob)
    if hasattr(prob.ideals[0], "expansion"):
        R = prob.ideals[0].ring
        ok = got in sols and got == min(sols, key=R.index)
    else:
        ok = sols == [got] if len(sols) == 1 else False
    return ok, f"{kind}: glued {got}, exhaustive {[str(s) for s in sols[:3]]}"


def gluing_lines(count=30, seed=0):
    rng = random.Random(seed)
    kinds = ("zmod30", "zmod60", "poly")
    bad = []
    for t in range(count):
        ok, detail = gluing_trial(rng, kinds[t % 3])
        if not ok:
            bad.append(detail)
    return [ReportLine("gluing", "crt-gluing", f"{count} problems seed {seed}", "FAIL" if bad else "PASS",
                       bad[0] if bad else "every glued element matches exhaustive search")]


# ---------------------------------------------------------------------------
# colimits


def colimit_lines(system, count=100, degree=6, seed=0):
    out = []
    probs = check_embedding_coherence(system)
    out.append(ReportLine("colimit", "embedding-coherence", system.name, "FAIL" if probs else "PASS",
                          probs[0] if probs else f"{len(system.maps)} maps"))
    probs = check_representative_independence(system, seed=seed)
    out.append(ReportLine("colimit", "representative-independence", system.name, "FAIL" if probs else "PASS",
                          probs[0] if probs else "sums and products agree on every lift"))
    rep = run_preservation_suite("n-adic", system, n=degree, count=count, seed=seed)
    detail = (f"{rep.passed}/{rep.instances} monics of degree <= {degree} split (seed {seed}, "
              f"{len(rep.rejected)} outside the chain rejected)")
    out.append(ReportLine("colimit", "colimit-splitting", system.name, "PASS" if rep.ok else "FAIL",
                          detail if rep.ok else f"{detail}; first failure {rep.failures[:1]}"))
    return out


def constant_system_lines(ring, n=2, count=20, seed=0):
    system = DirectedSystem.constant(ring)
    out = []
    rep = run_preservation_suite("iip", system)
    out.append(ReportLine("colimit", "colimit-iip", system.name, "PASS" if rep.ok else "FAIL",
                          f"{rep.passed}/{rep.instances} prime pairs"))
    rep = run_preservation_suite("n-adic", system, n=n, count=count, seed=seed)
    if rep.node_failures:
        label, text = rep.node_failures[0]
        out.append(ReportLine("colimit", "colimit-n-adic", system.name, "HYPOTHESIS-NOT-MET",
                              f"level {label} is not {n}-adically closed: {text} has no root"))
    else:
        out.append(ReportLine("colimit", "colimit-n-adic", system.name, "PASS" if rep.ok else "FAIL",
                              f"{rep.passed}/{rep.instances} monics"))
    return out


# ---------------------------------------------------------------------------
# the whole suite


def run_all(defs=None, budgets=None):
    """Every suite over the default corpus plus the declared objects; deterministic given the seed."""
    b = budgets or Budgets(seed=0)
    seed = b.seed if b.seed is not None else 0
    lines = []
    rings = corpus()
    if defs is not None:
        rings += [R for R in defs.rings.values()]
    for R in rings:
        lines += spectrum_lines(R, b)
        lines += iip_lines(R, b)
        lines += two_unit_lines(R)
        lines += conditional_lines(R, 2)
        lines += decreasing_degree_lines(R, 2, b)
        lines += semilocal_lines(R)
        lines += join_lines(R)
        lines += polygon_absence_lines(R)
        if R.size <= 16:
            lines += descent_lines(R, 2)
    for R in rings:
        if is_field(R):
            for n in (2, 3, 4):
                lines += finite_field_lines(R, n, b)
    lines += power_inequality_lines()
    lines += gluing_lines(seed=seed)
    if defs is not None:
        for desc in defs.polygons.values():
            lines += polygon_lines(desc)
            if validate_polygon(desc).valid:
                for mode, n in (("quadratic", None), ("2n", 2), ("2n", 3)):
                    lines += witness_lines(desc, mode, n)[0]
        for name, (p, q) in _declared_sums(defs):
            lines += classify_lines(p, q, name)[0]
        for T in defs.towers.values():
            if T.levels[-1] <= b.max_tower_level:
                lines += colimit_lines(T, seed=seed)
    lines += constant_system_lines(ZModRing(6), seed=seed)
    return lines


def _declared_sums(defs):
    """Pairs of declared spectrum primes (the first two of each spectrum)."""
    out = []
    for name, spec in defs.spectra.items():
        if len(spec.primes) >= 2:
            out.append((name, (spec.primes[0], spec.primes[1])))
    return out
