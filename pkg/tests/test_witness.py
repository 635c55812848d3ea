import copy
import random

import pytest

from ringforge.builtin import BUILTIN_DEFINITIONS
from ringforge.errors import CertificateError, NotComaximal
from ringforge.groebner import PolyIdeal, PolyRing
from ringforge.ideals import PrimeIdealHandle, enumerate_spectrum, ideal_expand
from ringforge.parser import parse_definitions
from ringforge.rings import ZModRing
from ringforge.spectrum import PolygonDescriptor, poly_prime, search_polygons
from ringforge.suites import corpus, exhaustive_solutions, gluing_trial, random_gluing_problem
from ringforge.witness import (GluingProblem, build_beta, build_c, certify_not_closed, edge_sum,
                               extract_no_root_certificate, glue_many, glue_pair, propagation_order,
                               verify_certificate)

DEFS = parse_definitions(BUILTIN_DEFINITIONS)
TRIANGLE = DEFS.polygons["triangle"]
TRIANGLE3 = DEFS.polygons["triangle3"]
SQUARE = DEFS.polygons["square"]
R2 = PolyRing(2, ["x", "y"])
Z30 = ZModRing(30)


def zideal(m, ring=Z30):
    return ideal_expand(ring, [m])


# gluing


def test_glue_pair_examples():
    assert glue_pair(zideal(2), zideal(3), 1, 2) == 5
    assert glue_pair(zideal(2), zideal(3), 7, 7) == 7 % 6
    I0, I1 = PolyIdeal(R2, [R2("x"), R2("y")]), PolyIdeal(R2, [R2("x"), R2("y + 1")])
    assert glue_pair(I0, I1, R2.one, R2.zero) == R2("y + 1")


def test_glue_pair_rejects_bad_input():
    with pytest.raises(NotComaximal):
        glue_pair(zideal(2), zideal(6), 1, 0)
    with pytest.raises(CertificateError):
        glue_pair(zideal(2), zideal(3), 1, 2, split=(1, 0))


def test_glue_many_examples():
    prob = GluingProblem.build([zideal(2), zideal(3), zideal(5)], [1, 2, 3])
    assert prob.check()
    assert glue_many(prob) == 23
    prob = GluingProblem.build([zideal(2), zideal(3), zideal(5)], [4, 4, 4])
    assert glue_many(prob) == 4
    P = [TRIANGLE.edge_ideal(i) for i in range(3)]
    prob = GluingProblem.build(P, [R2.zero, R2("y^2 + y"), R2.zero])
    assert glue_many(prob) == R2("x*y + y^2 + y")


def test_missing_triple_certificate():
    with pytest.raises(NotComaximal):
        GluingProblem.build([zideal(6), zideal(2), zideal(10)], [0, 0, 0])
    R = PolyRing(2, ["x", "y"])
    with pytest.raises(NotComaximal):
        GluingProblem.build([PolyIdeal(R, [R("x")]), PolyIdeal(R, [R("y")]), PolyIdeal(R, [R("x + y")])],
                            [R.zero, R.zero, R.zero])


def test_forged_problem_fails_check():
    prob = GluingProblem.build([zideal(2), zideal(3), zideal(5)], [1, 2, 3])
    key = next(iter(prob.triple_certs))
    u, v, w = prob.triple_certs[key]
    prob.triple_certs[key] = (u, v, Z30.add(w, 1))
    assert not prob.check()


@pytest.mark.parametrize("kind", ["zmod30", "zmod60", "poly"])
@pytest.mark.parametrize("seed", range(10))
def test_gluing_matches_exhaustive(kind, seed):
    ok, detail = gluing_trial(random.Random(seed), kind)
    assert ok, detail


@pytest.mark.parametrize("seed", range(10))
def test_glued_element_satisfies_congruences(seed):
    rng = random.Random(100 + seed)
    prob = random_gluing_problem(rng, "poly")
    assert prob.check()
    a = glue_many(prob, canonical=False)
    assert prob.satisfied_by(a)
    assert exhaustive_solutions(prob) == [glue_many(prob)]


# c and beta


def test_build_c_examples():
    c, (m1, m2) = build_c(edge_sum(TRIANGLE, 0, 1), edge_sum(TRIANGLE, 1, 2))
    assert c == R2("y + 1") and m1.check() and m2.check()
    c, (m1, m2) = build_c(zideal(2), zideal(3))
    assert c % 3 == 0 and (1 - c) % 2 == 0 and m1.check() and m2.check()
    with pytest.raises(NotComaximal):
        build_c(zideal(2), zideal(2))


def test_build_beta_examples():
    beta, ev, prob = build_beta(TRIANGLE, R2("y + 1"))
    assert beta == R2("x*y + y^2 + y") and all(m.check() for m in ev) and prob.check()
    R3 = TRIANGLE3.edge_ideal(0).ring
    c, _ = build_c(edge_sum(TRIANGLE3, 0, 1), edge_sum(TRIANGLE3, 1, 2))
    beta, ev, _ = build_beta(TRIANGLE3, c)
    assert all(m.check() for m in ev)
    assert beta == R3("x*y + y^2 - y")


def test_build_beta_degenerate():
    # c^2 - c ∈ P_1: the glued element lies in every edge prime
    beta, ev, _ = build_beta(TRIANGLE, R2.zero)
    for i in range(3):
        assert TRIANGLE.edge_ideal(i).basis.contains(beta)


# no-root certificate


def test_triangle_branches():
    c, beta = R2("y + 1"), R2("x*y + y^2 + y")
    cert = extract_no_root_certificate(TRIANGLE, c, beta)
    assert not cert.root_found and len(cert.candidates) == 8
    assert cert.root_sets[1] == (c, R2.one - c)
    for cand in cert.candidates:
        i, j, diff, nf = cand.failure
        assert nf and edge_sum(TRIANGLE, i, j).basis.reduce(diff) == nf


def test_propagation_order():
    assert propagation_order(3) == [(0, 1), (2, 0), (1, 2)]
    assert propagation_order(4) == [(0, 1), (3, 0), (2, 3), (1, 2)]


def test_unit_vertex_lets_a_root_through():
    # edges (y), (x), (x+1) with P_1 + P_2 = (1): the congruence at that vertex is vacuous
    edges = tuple(poly_prime(R2, [R2(g)]) for g in ("y", "x", "x + 1"))
    verts = tuple(PrimeIdealHandle(PolyIdeal(R2, [R2(g) for g in v]), "user-asserted")
                  for v in (["x", "y"], ["1"], ["x + 1", "y"]))
    fake = PolygonDescriptor(3, edges, verts, ring=R2, name="fake")
    rep = certify_not_closed(fake, validate=False)
    assert rep.certificate.root_found and not rep.ok
    assert not verify_certificate(rep)
    assert "root found" in rep.conclusion()


# reports


@pytest.mark.parametrize("desc,beta", [(TRIANGLE, "x*y + y^2 + y"), (TRIANGLE3, "x*y + y^2 - y")],
                         ids=["f2", "f3"])
def test_certify_triangle(desc, beta):
    rep = certify_not_closed(desc)
    R = desc.edge_ideal(0).ring
    assert rep.ok and rep.beta == R(beta)
    assert rep.confidence == "certified"
    for order in (None, "grevlex", "lex"):
        v = verify_certificate(rep, order)
        assert v.ok, v.failure
    assert rep.characteristic == R.p


def test_char2_witness_text():
    rep = certify_not_closed(TRIANGLE)
    assert rep.witness_text() == "T^2 + T + (x*y + y^2 + y)"


@pytest.mark.parametrize("n", [2, 3])
def test_power_mode(n):
    rep = certify_not_closed(TRIANGLE, "2n", n)
    assert len(rep.power_witness) == 2 * n + 1 and rep.power_witness[-1] == R2.one
    assert rep.reducedness == ["certified-linear"] * 3
    assert verify_certificate(rep) and verify_certificate(rep, "lex")
    assert f"not {2 * n}-adically closed" in rep.conclusion()


def test_power_mode_needs_n():
    with pytest.raises(ValueError):
        certify_not_closed(TRIANGLE, "2n", 0)
    with pytest.raises(ValueError):
        certify_not_closed(TRIANGLE, "cubic")


def test_square():
    rep = certify_not_closed(SQUARE)
    assert rep.ok and len(rep.certificate.candidates) == 16
    assert verify_certificate(rep) and verify_certificate(rep, "lex")


def test_invalid_polygon_rejected():
    bad = PolygonDescriptor.from_generators(R2, [["y"], ["x"], ["x+y+1"]], [["x", "y"], ["x", "y"], ["x+1", "y"]])
    with pytest.raises(ValueError):
        certify_not_closed(bad)


def test_perturbed_beta_rejected():
    rep = certify_not_closed(TRIANGLE)
    forged = copy.copy(rep)
    forged.beta = rep.beta + R2.one
    v = verify_certificate(forged)
    assert not v and "P_0" in v.failure


def test_forged_normal_form_rejected():
    rep = certify_not_closed(TRIANGLE)
    forged = copy.deepcopy(rep)
    cand = forged.certificate.candidates[0]
    i, j, diff, nf = cand.failure
    cand.failure = (i, j, diff, nf + R2("x"))
    v = verify_certificate(forged)
    assert not v and "normal form" in v.failure


def test_records_and_narrative():
    rep = certify_not_closed(TRIANGLE, "2n", 2)
    recs = rep.records()
    kinds = [r["kind"] for r in recs]
    assert kinds.count("candidate-refuted") == 8 and kinds[-1] == "power-witness"
    assert all(r["verdict"] for r in recs)
    text = rep.narrative()
    assert "beta = x*y + y^2 + y" in text and text.endswith(".")


def test_no_polygons_to_certify_in_finite_rings():
    for ring in corpus():
        assert search_polygons(enumerate_spectrum(ring), 3) == []
