import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ringforge.errors import MixedRingError, ReducibleModulus, ZeroRingError
from ringforge.ideals import (LocalizationSpec, RingHom, check_ring_hom, classify_ideal, compute_fiber,
                              enumerate_spectrum, ideal_combine, ideal_expand, ideal_lattice, ideal_radical,
                              is_unit, join_subrings, localize_finite, make_ring, prime_handle, quotient_ring,
                              zero_ideal)
from ringforge.rings import (GaloisField, GaloisFieldRing, Product, ProductRing, ZMod, ZModRing, eval_expr,
                             find_isomorphism)


def vals(ring, I):
    return sorted(ring.index(x) for x in I.expansion)


SMALL = [ZModRing(12), ZModRing(8), GaloisFieldRing(2, 2), GaloisFieldRing(3, 2),
         ProductRing([ZModRing(2), ZModRing(3)]), ProductRing([ZModRing(4), GaloisFieldRing(2, 2)]),
         quotient_ring(ZModRing(36), ideal_expand(ZModRing(36), [6]))]


# construction


def test_make_ring_examples():
    assert make_ring(ZMod(12)).size == 12
    f4 = make_ring(GaloisField(2, 2, (1, 1, 1)))
    assert f4.size == 4
    z6 = make_ring(Product((ZMod(2), ZMod(3))))
    assert z6.size == 6
    assert find_isomorphism(z6, ZModRing(6)) is not None


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulus):
        GaloisFieldRing(2, 2, [0, 1, 1])


def test_zmod_modulus_validated():
    with pytest.raises(ValueError):
        make_ring(ZMod(1))


@pytest.mark.parametrize("ring,expr,expected", [
    (ZModRing(12), "7+8", 3),
    (GaloisFieldRing(2, 2), "w*w", "w+1"),
    (ProductRing([ZModRing(2), ZModRing(3)]), "(1,2)*(1,2)", (1, 1)),
])
def test_eval_expr(ring, expr, expected):
    want = ring.parse(expected) if isinstance(expected, str) else ring.normal(expected)
    assert eval_expr(ring, expr).value == want


def test_mixed_ring_operands_rejected():
    a = ZModRing(4)(1)
    b = ZModRing(6)(1)
    with pytest.raises(MixedRingError):
        a + b


@pytest.mark.parametrize("ring,x,unit", [
    (ZModRing(12), 5, True), (ZModRing(12), 2, False), (GaloisFieldRing(3, 2), 2, True)])
def test_is_unit(ring, x, unit):
    assert is_unit(ring, x) == unit


# ideals


def test_ideal_expand_examples():
    R = ZModRing(12)
    assert vals(R, ideal_expand(R, [4])) == [0, 4, 8]
    assert vals(R, ideal_expand(R, [4, 6])) == [0, 2, 4, 6, 8, 10]
    F = GaloisFieldRing(2, 2)
    assert ideal_expand(F, [F.parse("w")]).is_unit_ideal


def test_ideal_combine_examples():
    Z6, Z12, Z30 = ZModRing(6), ZModRing(12), ZModRing(30)
    assert ideal_combine(Z6, ideal_expand(Z6, [2]), ideal_expand(Z6, [3]), "sum").is_unit_ideal
    assert vals(Z12, ideal_combine(Z12, ideal_expand(Z12, [4]), ideal_expand(Z12, [6]), "intersection")) == [0]
    prod = ideal_combine(Z30, ideal_expand(Z30, [2]), ideal_expand(Z30, [3]), "product")
    assert prod == ideal_expand(Z30, [6])


def test_radical_examples():
    R = ZModRing(12)
    assert ideal_radical(R, ideal_expand(R, [4])) == ideal_expand(R, [2])
    assert ideal_radical(R, ideal_expand(R, [2])) == ideal_expand(R, [2])
    F = GaloisFieldRing(2, 2)
    assert ideal_radical(F, zero_ideal(F)) == zero_ideal(F)


@pytest.mark.parametrize("gen,prime,primary,radical", [(2, True, True, True), (4, False, True, False),
                                                      (6, False, False, True)])
def test_classify_ideal_z12(gen, prime, primary, radical):
    R = ZModRing(12)
    f = classify_ideal(R, ideal_expand(R, [gen]))
    assert (f.proper, f.prime, f.primary, f.radical) == (True, prime, primary, radical)
    if not prime:
        x, y = f.witness
        assert R.mul(x, y) in ideal_expand(R, [gen]).expansion


@pytest.mark.parametrize("ring", SMALL, ids=lambda r: r.name)
def test_ideals_are_closed(ring):
    for I in ideal_lattice(ring):
        idx = np.array(vals(ring, I))
        m = I.mask
        assert m[ring.add_table[np.ix_(idx, idx)]].all()
        assert m[ring.mul_table[idx, :]].all()


@pytest.mark.parametrize("ring", SMALL, ids=lambda r: r.name)
def test_radical_is_intersection_of_primes(ring):
    primes = enumerate_spectrum(ring).primes
    for I in ideal_lattice(ring):
        if not I.is_proper:
            continue
        over = [P.ideal.expansion for P in primes if I.expansion <= P.ideal.expansion]
        assert ideal_radical(ring, I).expansion == frozenset.intersection(*over)


# spectra


def test_spectrum_examples():
    R = ZModRing(12)
    assert sorted(str(P) for P in enumerate_spectrum(R).primes) == ["(2)", "(3)"]
    F = GaloisFieldRing(2, 2)
    (P,) = enumerate_spectrum(F).primes
    assert P.ideal == zero_ideal(F)
    Z = ProductRing([ZModRing(2), ZModRing(3)])
    got = {P.ideal.expansion for P in enumerate_spectrum(Z).primes}
    want = {frozenset((0, b) for b in range(3)), frozenset((a, 0) for a in range(2))}
    assert got == want


@pytest.mark.parametrize("ring", SMALL, ids=lambda r: r.name)
def test_finite_spectrum_is_antichain(ring):
    spec = enumerate_spectrum(ring)
    assert spec.is_antichain() and spec.check_order()
    for P in spec.primes:
        assert classify_ideal(ring, P.ideal).prime


def test_prime_handle_rejects_non_prime():
    R = ZModRing(12)
    with pytest.raises(ValueError):
        prime_handle(R, [6])
    assert prime_handle(R, [6], certification="user-asserted").certification == "user-asserted"


# quotients and localizations


def test_quotient_examples():
    R = ZModRing(12)
    assert find_isomorphism(quotient_ring(R, ideal_expand(R, [4])), ZModRing(4)) is not None
    assert find_isomorphism(quotient_ring(R, ideal_expand(R, [2])), ZModRing(2)) is not None
    F = GaloisFieldRing(2, 2)
    assert find_isomorphism(quotient_ring(F, zero_ideal(F)), F) is not None


def test_quotient_by_unit_ideal_is_zero_ring():
    R = ZModRing(6)
    Q = quotient_ring(R, ideal_expand(R, [1]))
    assert Q.is_zero_ring and Q.size == 1


def test_localization_examples():
    R = ZModRing(12)
    two, three = prime_handle(R, [2]), prime_handle(R, [3])
    res = localize_finite(R, LocalizationSpec.semi_local_at([two]))
    assert find_isomorphism(res.ring, ZModRing(4)) is not None
    assert len(res.maximal) == 1 and res.survivors[res.maximal[0]] == two
    assert vals(R, res.kernel) == [0, 4, 8]
    res = localize_finite(R, LocalizationSpec.semi_local_at([two, three]))
    assert res.ring.size == 12
    Z6 = ZModRing(6)
    res = localize_finite(Z6, LocalizationSpec.by_mult_set([3]))
    # 3 * 2 = 0 kills (2), leaving Z/6 / (2) = F_2
    assert find_isomorphism(res.ring, ZModRing(2)) is not None
    assert vals(Z6, res.kernel) == [0, 2, 4]


def test_localization_at_zero_flagged():
    R = ZModRing(4)
    with pytest.raises(ZeroRingError):
        localize_finite(R, LocalizationSpec.by_mult_set([2]))
    res = localize_finite(R, LocalizationSpec.by_mult_set([2]), allow_zero=True)
    assert res.is_zero


def test_comparable_primes_rejected():
    R = ZModRing(6)
    P = prime_handle(R, [2])
    with pytest.raises(ValueError):
        localize_finite(R, LocalizationSpec.semi_local_at([P, prime_handle(R, [1], "user-asserted")]))


# maps, fibers, joins


def test_check_ring_hom_examples():
    Z4, Z2 = ZModRing(4), ZModRing(2)
    assert check_ring_hom(Z4, Z2, {1: 1}).ok
    bad = check_ring_hom(Z2, Z4, {1: 1})
    assert not bad.ok and "1+1" in bad.witness
    F2, F4 = ZModRing(2), GaloisFieldRing(2, 2)
    assert check_ring_hom(F2, F4, {1: F4.one}).ok


def test_fiber_examples():
    Z4, Z2 = ZModRing(4), ZModRing(2)
    h = RingHom.from_generators(Z4, Z2, {1: 1})
    fib = compute_fiber(h, prime_handle(Z4, [2]))
    assert find_isomorphism(fib.ring, Z2) is not None
    F4 = GaloisFieldRing(2, 2)
    fib = compute_fiber(RingHom.identity(F4), prime_handle(F4, [F4.zero]))
    assert fib.ring.size == 4
    P = ProductRing([ZModRing(2), ZModRing(3)])
    proj = RingHom.from_generators(P, Z2, {(1, 1): 1, (1, 0): 1})
    over_a = compute_fiber(proj, prime_handle(P, [(0, 1)]))
    over_b = compute_fiber(proj, prime_handle(P, [(1, 0)]))
    assert {over_a.is_zero, over_b.is_zero} == {True, False}
    live = over_b if over_a.is_zero else over_a
    assert live.ring.size == 2


def test_join_examples():
    F4 = GaloisFieldRing(2, 2)
    K = ProductRing([F4, F4])
    diag = {(a, a) for a in F4.elements}
    sub = {(a, b) for a in (F4.zero, F4.one) for b in (F4.zero, F4.one)}
    assert len(join_subrings(K, diag, sub)) == 16
    assert join_subrings(K, diag, diag) == frozenset(diag)
    F2 = {F4.zero, F4.one}
    assert join_subrings(F4, F2, set(F4.elements)) == frozenset(F4.elements)


def test_crt_isomorphism():
    assert find_isomorphism(ZModRing(6), ProductRing([ZModRing(2), ZModRing(3)])) is not None
    assert find_isomorphism(ZModRing(4), ProductRing([ZModRing(2), ZModRing(2)])) is None


# properties


RINGS = st.sampled_from(SMALL)


@settings(max_examples=60, deadline=None)
@given(RINGS, st.data())
def test_ring_axioms(ring, data):
    el = st.sampled_from(ring.elements)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert ring.add(a, b) == ring.add(b, a)
    assert ring.mul(a, b) == ring.mul(b, a)
    assert ring.mul(a, ring.add(b, c)) == ring.add(ring.mul(a, b), ring.mul(a, c))
    assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
    assert ring.add(a, ring.neg(a)) == ring.zero
    assert ring.mul(a, ring.one) == a


@settings(max_examples=40, deadline=None)
@given(RINGS, st.data())
def test_unit_iff_inverse(ring, data):
    a = data.draw(st.sampled_from(ring.elements))
    has_inv = any(ring.mul(a, b) == ring.one for b in ring.elements)
    assert ring.is_unit(a) == has_inv
    if has_inv:
        assert ring.mul(a, ring.inverse(a)) == ring.one


@settings(max_examples=40, deadline=None)
@given(RINGS, st.data())
def test_ideal_sum_is_setwise_sum(ring, data):
    el = st.sampled_from(ring.elements)
    I = ideal_expand(ring, [data.draw(el)])
    J = ideal_expand(ring, [data.draw(el)])
    S = ideal_combine(ring, I, J, "sum")
    assert S.expansion == frozenset(ring.add(a, b) for a, b in itertools.product(I.expansion, J.expansion))


def test_iip_preserved_by_quotient_and_localization():
    from ringforge.spectrum import check_iip
    R = ZModRing(36)
    for I in ideal_lattice(R):
        if I.is_proper:
            assert check_iip(quotient_ring(R, I)).holds
    for P in enumerate_spectrum(R).primes:
        assert check_iip(localize_finite(R, LocalizationSpec.semi_local_at([P])).ring).holds
