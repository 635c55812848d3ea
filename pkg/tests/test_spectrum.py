import itertools

import pytest

from ringforge.builtin import BUILTIN_DEFINITIONS
from ringforge.groebner import PolyIdeal, PolyRing
from ringforge.ideals import enumerate_spectrum, ideal_expand
from ringforge.parser import parse_definitions
from ringforge.rings import GaloisFieldRing, ProductRing, ZModRing
from ringforge.spectrum import (PolygonDescriptor, certify_poly_prime, check_iip, classify_prime_sum,
                                filter_spectrum_semilocal, finite_polygon_search, ideal_eq, ideal_le,
                                join_locality_check, poly_prime, poly_spectrum, polygon_spectrum,
                                recheck_sum_classification, search_polygons, unique_maximal_below,
                                validate_polygon)
from ringforge.suites import corpus

R2 = PolyRing(2, ["x", "y"])
R3 = PolyRing(3, ["x", "y"])
DEFS = parse_definitions(BUILTIN_DEFINITIONS)
TRIANGLE = DEFS.polygons["triangle"]


def prime_of(ring, gen):
    spec = enumerate_spectrum(ring)
    target = ideal_expand(ring, [gen])
    return next(P for P in spec.primes if P.ideal == target)


# sum classification


def test_sum_examples():
    c = classify_prime_sum(poly_prime(R2, [R2("x")]), poly_prime(R2, [R2("y")]))
    assert c.verdict == "Prime"
    c = classify_prime_sum(poly_prime(R3, [R3("y - x^2")]), poly_prime(R3, [R3("y - 1")]))
    assert c.verdict == "ProperNonPrime"
    x, y = c.witness
    assert {str(x.monic()), str(y.monic())} == {str(R3("x - 1")), str(R3("x + 1"))}
    assert recheck_sum_classification(c, poly_prime(R3, [R3("y - x^2")]), poly_prime(R3, [R3("y - 1")]))
    Z12 = ZModRing(12)
    p, q = prime_of(Z12, 2), prime_of(Z12, 3)
    c = classify_prime_sum(p, q)
    assert c.verdict == "Unit" and recheck_sum_classification(c, p, q)


def test_poly_unit_sum_has_certificate():
    p, q = poly_prime(R2, [R2("x"), R2("y")]), poly_prime(R2, [R2("x"), R2("y + 1")])
    c = classify_prime_sum(p, q)
    assert c.verdict == "Unit" and recheck_sum_classification(c, p, q)


def test_undecided_is_reported():
    R = PolyRing(3, ["x", "y", "z"])
    c = classify_prime_sum(poly_prime(R, [R("x^2 + y^2 + 1")]), poly_prime(R, [R("x*z + 1")]))
    assert c.verdict == "Undecided" and c.via == "positive-dimensional"


@pytest.mark.parametrize("ring", corpus(), ids=lambda r: r.name)
def test_self_sum_is_prime(ring):
    for P in enumerate_spectrum(ring).primes:
        c = classify_prime_sum(P, P)
        assert c.verdict == "Prime"
        assert c.sum_ideal == P.ideal


@pytest.mark.parametrize("name", ["axes", "parabola", "crossing"])
def test_declared_self_sums(name):
    for P in DEFS.spectra[name].primes:
        assert classify_prime_sum(P, P).verdict == "Prime"


def test_certification_levels():
    assert certify_poly_prime(PolyIdeal(R2, [R2("x"), R2("y")])) == "certified-linear"
    assert certify_poly_prime(PolyIdeal(R3, [R3("y - x^2")])) == "certified-graph"
    assert certify_poly_prime(PolyIdeal(R2, [R2("x^2 + x + 1"), R2("y")])) == "zero-dimensional"
    with pytest.raises(ValueError):
        certify_poly_prime(PolyIdeal(R3, [R3("x^2 - 1"), R3("y - 1")]))
    with pytest.raises(ValueError):
        certify_poly_prime(PolyIdeal(R2, [R2("1")]))


# IIP


@pytest.mark.parametrize("ring", [ZModRing(12), GaloisFieldRing(2, 2), ProductRing([ZModRing(2), ZModRing(3)])],
                         ids=lambda r: r.name)
def test_iip_examples(ring):
    r = check_iip(ring)
    assert r.holds and r.equivalent and all(r.verdicts.values())


def test_product_primes_are_comaximal():
    Z6 = ProductRing([ZModRing(2), ZModRing(3)])
    p, q = enumerate_spectrum(Z6).primes
    assert classify_prime_sum(p, q).verdict == "Unit"


@pytest.mark.parametrize("ring", corpus(), ids=lambda r: r.name)
def test_iip_over_corpus(ring):
    for mode in ("pairwise", "criterion-b", "criterion-c"):
        r = check_iip(ring, mode)
        assert r.holds and r.equivalent


def test_iip_mode_validated():
    with pytest.raises(ValueError):
        check_iip(ZModRing(4), "criterion-z")


# unique maximal below


def test_unique_maximal_examples():
    Z12 = ZModRing(12)
    spec = enumerate_spectrum(Z12)
    r = unique_maximal_below(spec, ideal_expand(Z12, [2]))
    assert r.status == "unique" and r.prime.ideal == ideal_expand(Z12, [2])
    assert unique_maximal_below(spec, ideal_expand(Z12, [6])).status == "empty"
    s = poly_spectrum(R2, [[R2("x")], [R2("y")], [R2("x"), R2("y")]])
    r = unique_maximal_below(s, PolyIdeal(R2, [R2("x"), R2("y")]))
    assert r.status == "unique" and ideal_eq(r.prime, PolyIdeal(R2, [R2("x"), R2("y")]))


def test_multiple_maxima_returned_as_data():
    s = poly_spectrum(R2, [[R2("x")], [R2("y")]])
    r = unique_maximal_below(s, PolyIdeal(R2, [R2("x"), R2("y")]))
    assert r.status == "multiple" and len(r.maxima) == 2


# semi-local filter and joins


def test_filter_examples():
    spec = polygon_spectrum(TRIANGLE)
    f = filter_spectrum_semilocal(spec, list(TRIANGLE.vertices))
    assert len(f.primes) == 6
    assert sorted(str(f.primes[i]) for i in f.maximal()) == sorted(str(Q) for Q in TRIANGLE.vertices)
    Z12 = ZModRing(12)
    s = enumerate_spectrum(Z12)
    f = filter_spectrum_semilocal(s, [prime_of(Z12, 2)])
    assert [P.ideal for P in f.primes] == [ideal_expand(Z12, [2])]
    for ring in corpus():
        s = enumerate_spectrum(ring)
        f = filter_spectrum_semilocal(s, [s.primes[i] for i in s.maximal()])
        assert f.primes == s.primes and f.containment == s.containment


def test_filter_rejects_comparable():
    s = DEFS.spectra["axes"]
    with pytest.raises(ValueError):
        filter_spectrum_semilocal(s, [s.primes[1], s.primes[3]])


def test_join_examples():
    s = DEFS.spectra["axes"]
    r = join_locality_check(s, s.primes[1], s.primes[2])
    assert r.local and [str(p) for p in r.survivors] == [str(s.primes[0])]
    Z12 = ZModRing(12)
    sp = enumerate_spectrum(Z12)
    for P in sp.primes:
        r = join_locality_check(sp, P, P)
        assert r.local and r.maximal == [P]
    Z6 = ProductRing([ZModRing(2), ZModRing(3)])
    sp = enumerate_spectrum(Z6)
    assert join_locality_check(sp, sp.primes[0], sp.primes[1]).status == "empty"


# polygons


def test_triangle_valid():
    r = validate_polygon(TRIANGLE)
    assert r.valid and not r.failures()
    assert len(r.cells) == 9
    for c in r.cells:
        for g, ev in c.evidence:
            if c.contained:
                assert ev.verify()


@pytest.mark.parametrize("name", ["triangle", "triangle3", "square"])
def test_builtin_polygons_valid(name):
    assert validate_polygon(DEFS.polygons[name]).valid


def test_broken_triangle_invalid():
    bad = PolygonDescriptor.from_generators(R2, [["y"], ["x"], ["x+y+1"]], [["x", "y"], ["x", "y"], ["x+1", "y"]])
    r = validate_polygon(bad)
    assert not r.valid and r.failures()


def test_small_n_rejected():
    with pytest.raises(ValueError):
        PolygonDescriptor.from_generators(R2, [["y"], ["x"]], [["x", "y"], ["x", "y+1"]])
    with pytest.raises(ValueError):
        search_polygons(DEFS.spectra["axes"], 2)


def test_search_examples():
    spec = polygon_spectrum(TRIANGLE)
    found = search_polygons(spec, 3)
    assert len(found) == 1 and validate_polygon(found[0]).valid
    assert search_polygons(spec, 4) == []
    sq = search_polygons(polygon_spectrum(DEFS.polygons["square"]), 4)
    assert len(sq) == 1 and validate_polygon(sq[0]).valid


@pytest.mark.parametrize("ring", corpus(), ids=lambda r: r.name)
def test_no_polygons_in_finite_rings(ring):
    assert enumerate_spectrum(ring).is_antichain()
    for n in (3, 4):
        assert finite_polygon_search(ring, n) == []


@pytest.mark.parametrize("name", ["triangle", "triangle3", "square"])
def test_polygon_localization_properties(name):
    desc = DEFS.polygons[name]
    n = desc.n
    f = filter_spectrum_semilocal(polygon_spectrum(desc), list(desc.vertices))
    assert validate_polygon(desc).valid
    edges = [f.index_of(P) for P in desc.edges]
    for i, k in itertools.combinations(range(n), 2):
        if (k - i) % n in (1, n - 1):
            continue
        below = [t for t in range(len(f.primes)) if f.contains(t, edges[i]) and f.contains(t, edges[k])]
        assert below == []


@pytest.mark.parametrize("name", ["triangle", "triangle3", "square"])
def test_adjacent_edges_sum_to_vertex(name):
    desc = DEFS.polygons[name]
    for i in range(desc.n):
        c = classify_prime_sum(desc.edges[i], desc.edges[(i + 1) % desc.n])
        assert c.verdict == "Prime"
        assert ideal_eq(c.sum_ideal, desc.vertex_ideal(i))
        assert ideal_le(desc.edge_ideal(i), c.sum_ideal)
