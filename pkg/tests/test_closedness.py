import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from ringforge.closedness import (check_conditional_hypothesis, check_decreasing_degree, check_descent_certificate,
                                  check_n_adically_closed, check_two_unit_equivalence, descent_chain,
                                  eval_monic, format_monic, is_reduced, minimal_m, radical_descent,
                                  roots_of_monic, split_monic_over_product, split_monic_over_tower,
                                  verify_root_free)
from ringforge.errors import RootOracleFailure
from ringforge.fields import GF
from ringforge.ideals import enumerate_spectrum, ideal_expand, zero_ideal
from ringforge.rings import GaloisFieldRing, ProductRing, ZModRing
from ringforge.suites import corpus, is_field

F4 = GaloisFieldRing(2, 2)


def loop_m(n):
    return next(m for m in itertools.count(1) if (n - 1) ** m < n ** (m - 1))


# closedness scan


def test_nadic_examples():
    r = check_n_adically_closed(F4, 2)
    assert r.verdict == "not-closed" and r.exhaustive
    assert r.text == "T^2 + T + w"
    assert verify_root_free(F4, r.counterexample)
    for ring in (ZModRing(6), F4, ZModRing(9)):
        assert check_n_adically_closed(ring, 1).closed
    F2 = ZModRing(2)
    r = check_n_adically_closed(F2, 3)
    assert r.verdict == "not-closed" and r.text == "T^3 + T + 1"


def test_zero_degree_rejected():
    with pytest.raises(ValueError):
        check_n_adically_closed(F4, 0)


def test_sampling_needs_seed():
    with pytest.raises(ValueError):
        check_n_adically_closed(GaloisFieldRing(2, 4), 4, budget=100)


def test_sampling_is_seeded():
    F16 = GaloisFieldRing(2, 4)
    a = check_n_adically_closed(F16, 4, budget=100, sample_count=500, seed=7)
    b = check_n_adically_closed(F16, 4, budget=100, sample_count=500, seed=7)
    assert not a.exhaustive and a.seed == 7
    assert (a.verdict, a.counterexample, a.coverage) == (b.verdict, b.counterexample, b.coverage)
    if a.counterexample:
        assert verify_root_free(F16, a.counterexample)


def brute_closed(ring, n):
    for coeffs in itertools.product(ring.elements, repeat=n):
        if not roots_of_monic(ring, coeffs):
            return False
    return True


@pytest.mark.parametrize("ring", [ZModRing(2), ZModRing(4), ZModRing(6), F4, ProductRing([ZModRing(2), ZModRing(2)])],
                         ids=lambda r: r.name)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_scan_matches_brute_force(ring, n):
    assert check_n_adically_closed(ring, n).closed == brute_closed(ring, n)


@pytest.mark.parametrize("ring", [r for r in corpus() if is_field(r)], ids=lambda r: r.name)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_finite_fields_not_closed(ring, n):
    r = check_n_adically_closed(ring, n, seed=0)
    assert r.verdict == "not-closed" and verify_root_free(ring, r.counterexample)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=4), st.integers(0, 3))
def test_eval_monic_matches_naive(cs, t):
    coeffs = tuple(F4.elements[c] for c in cs)
    t = F4.elements[t]
    n = len(coeffs)
    naive = F4.pow(t, n)
    for k, c in enumerate(coeffs):
        naive = F4.add(naive, F4.mul(c, F4.pow(t, k)))
    assert eval_monic(F4, coeffs, t) == naive


def test_format_monic():
    Z5 = ZModRing(5)
    assert format_monic(Z5, (0, 0)) == "T^2"
    assert format_monic(Z5, (3, 2)) == "T^2 + 2*T + 3"


# two is a unit


def test_two_unit_examples():
    r = check_two_unit_equivalence(GaloisFieldRing(3, 2))
    assert r.hypothesis_met and r.quadratically_closed is False and r.squaring_surjective is False and r.holds
    r = check_two_unit_equivalence(ZModRing(3))
    assert r.holds and not r.quadratically_closed
    assert check_two_unit_equivalence(F4).holds is None


@pytest.mark.parametrize("ring", corpus(), ids=lambda r: r.name)
def test_two_unit_over_corpus(ring):
    r = check_two_unit_equivalence(ring)
    if ring.is_unit(ring.from_int(2)):
        assert r.holds
    else:
        assert not r.hypothesis_met


# arithmetic fact


@pytest.mark.parametrize("n", range(2, 13))
def test_minimal_m(n):
    m = minimal_m(n)
    assert m == loop_m(n)
    assert (n - 1) ** m < n ** (m - 1)
    assert all((n - 1) ** j >= n ** (j - 1) for j in range(1, m))


def test_minimal_m_values():
    assert [minimal_m(n) for n in (2, 3, 4)] == [2, 3, 5]
    with pytest.raises(ValueError):
        minimal_m(1)


# radical descent


def prime_by_gen(ring, gen):
    I = ideal_expand(ring, [gen])
    return next(P.ideal for P in enumerate_spectrum(ring).primes if P.ideal == I)


def test_descent_z4():
    Z4 = ZModRing(4)
    p = prime_by_gen(Z4, 2)
    cert = radical_descent(Z4, p, p, 2, 2)
    assert check_descent_certificate(cert)
    assert cert.final_split[0] in p.expansion and Z4.add(*cert.final_split) == 2


def test_descent_precondition():
    # x^n must lie in p + q
    Z0 = zero_ideal(F4)
    with pytest.raises(ValueError):
        radical_descent(F4, Z0, Z0, F4.one, 3)
    with pytest.raises(ValueError):
        radical_descent(F4, Z0, Z0, F4.one, 1)


def test_descent_chain_in_f4():
    # Frobenius is bijective on F_4, so chains of square roots exist
    chain = descent_chain(F4, F4.parse("w"), 2)
    assert len(chain) == 2 and F4.pow(chain[1], 2) == chain[0]


def test_root_oracle_failure():
    Z9 = ZModRing(9)
    with pytest.raises(RootOracleFailure):
        descent_chain(Z9, 2, 2, 3)


@pytest.mark.parametrize("ring,n,kinds", [
    (ProductRing([F4, F4]), 2, {"direct"}),
    (ZModRing(10), 2, {"direct", "chain"}),
    (ProductRing([GaloisFieldRing(3, 2), ZModRing(2)]), 2, {"direct", "chain"}),
    (ProductRing([ZModRing(13), ZModRing(2)]), 2, {"direct", "chain"}),
    (ProductRing([ZModRing(5), ZModRing(2)]), 3, {"direct"}),
], ids=str)
def test_descent_certificates_check(ring, n, kinds):
    """Every decomposition of x^n in every prime pair; roots that do not exist are reported."""
    spec = enumerate_spectrum(ring)
    seen = set()
    for P, Q in itertools.product(spec.primes, repeat=2):
        p, q = P.ideal, Q.ideal
        for x in ring.elements:
            xn = ring.pow(x, n)
            for a in p.sorted_elements():
                b = ring.sub(xn, a)
                if b not in q.expansion:
                    continue
                try:
                    cert = radical_descent(ring, p, q, x, n, split=(a, b))
                except RootOracleFailure:
                    continue
                assert check_descent_certificate(cert)
                assert cert.k == n ** (cert.m - 1) - (n - 1) ** cert.m >= 1
                seen.add(cert.kind)
    assert seen == kinds


def _chain_certificate():
    ring = ZModRing(10)
    primes = [P.ideal for P in enumerate_spectrum(ring).primes]
    for p, q in itertools.permutations(primes, 2):
        for x in ring.elements:
            for a in p.sorted_elements():
                if ring.sub(ring.pow(x, 2), a) not in q.expansion:
                    continue
                try:
                    cert = radical_descent(ring, p, q, x, 2, split=(a, ring.sub(ring.pow(x, 2), a)))
                except RootOracleFailure:
                    continue
                if cert.kind == "chain":
                    return cert
    raise AssertionError("no chain certificate")


@pytest.mark.parametrize("forge", ["k", "chain", "split"])
def test_forged_certificate_rejected(forge):
    cert = _chain_certificate()
    assert check_descent_certificate(cert)
    R = cert.ring
    if forge == "k":
        cert.k += 1
    elif forge == "chain":
        cert.chain = (cert.chain[0], R.add(cert.chain[1], R.one)) + cert.chain[2:]
    else:
        a, b = cert.final_split
        cert.final_split = (R.add(a, R.one), R.sub(b, R.one))
    assert not check_descent_certificate(cert)


# conditional hypothesis and decreasing degree


@pytest.mark.parametrize("ring", [ZModRing(2), F4, ZModRing(3)], ids=lambda r: r.name)
def test_conditional_examples(ring):
    r = check_conditional_hypothesis(ring, 2)
    assert r.hypothesis and r.sums_primary


@pytest.mark.parametrize("ring", [ZModRing(6), ZModRing(14), ZModRing(15)], ids=lambda r: r.name)
@pytest.mark.parametrize("n", [2, 3])
def test_conditional_failure_has_witness(ring, n):
    r = check_conditional_hypothesis(ring, n)
    assert not r.hypothesis
    P, a, b = r.counterexample
    assert a not in P.ideal.expansion and b in P.ideal.expansion
    coeffs = (b,) + (ring.zero,) * (n - 2) + (a,)     # T^n + a T^(n-1) + b
    assert all(t in P.ideal.expansion for t in roots_of_monic(ring, coeffs))


def test_decreasing_degree_examples():
    r = check_decreasing_degree(F4, 4)
    assert r.verdict == "vacuous"
    assert check_decreasing_degree(ZModRing(6), 1).verdict == "pass"
    r = check_decreasing_degree(ZModRing(4), 2)
    assert r.verdict == "skipped" and not is_reduced(ZModRing(4))


# tower splitting


def test_split_examples():
    F2 = GF(2, 1)
    r = split_monic_over_tower(F2, [1, 1, 1], 24)
    assert r.ok and r.level == 2 and len(r.roots) == 2
    assert all(r.field.poly_eval([1, 1, 1], a) == 0 for a in r.roots)
    r = split_monic_over_tower(F2, [0, 0, 1], 24)
    assert r.ok and r.roots == (0, 0)
    roots, parts = split_monic_over_product([GF(2, 1), GF(3, 1)], [[0, 1, 1], [0, 2, 1]], 6)
    assert sorted(r for r, _ in roots) == [0, 1] and sorted(s for _, s in roots) == [0, 1]
    for k, part in enumerate(parts):
        f = [[0, 1, 1], [0, 2, 1]][k]
        assert all(part.field.poly_eval(f, t[k]) == 0 for t in roots)


def test_split_reports_needed_level():
    r = split_monic_over_tower(GF(2, 1), [1, 1, 0, 1], 2)
    assert not r.ok and r.needed == 3
    with pytest.raises(ValueError):
        split_monic_over_tower(GF(3, 1), [1, 2], 4)


def test_split_respects_levels():
    r = split_monic_over_tower(GF(2, 1), [1, 1, 0, 1], 24, levels=[1, 2, 6, 24])
    assert r.ok and r.level == 6


@pytest.mark.parametrize("seed", range(4))
def test_random_splits_over_f4(seed):
    rng = random.Random(seed)
    base = GF(2, 2)
    for _ in range(25):
        d = rng.randint(1, 5)
        f = [rng.randrange(4) for _ in range(d)] + [1]
        r = split_monic_over_tower(base, f, 120)
        assert r.ok and r.level % 2 == 0
        assert base.d * math.lcm(*base.factor_degrees(f)) == r.level
        assert len(r.roots) == d
