"""Ideals, spectra and derived rings of finite commutative rings.

All checks here are exhaustive over the element tables; ring sizes are
capped by :data:`ringforge.rings.MAX_RING_SIZE`.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BudgetExceeded, NotASubring, ZeroRingError
from .rings import (FiniteRing, GaloisField, GaloisFieldRing, LocalizedFinite, Product, ProductRing,
                    Quotient, QuotientRing, RingElement, ZMod, ZModRing)

#: default cap on the number of ideals enumerated for lattice-based checks
IDEAL_LATTICE_CAP = 4096


def _value(ring, x):
    if isinstance(x, RingElement):
        return ring(x).value
    if isinstance(x, str):
        return ring.parse(x)
    return ring.normal(x)


def _mask(ring, elements):
    m = np.zeros(ring.size, dtype=bool)
    for e in elements:
        m[ring.index(e)] = True
    return m


def _additive_closure(ring, idx):
    """Indices of the additive subgroup generated by ``idx``."""
    members = np.zeros(ring.size, dtype=bool)
    members[ring.index(ring.zero)] = True
    for g in idx:
        if members[g]:
            continue
        current = np.nonzero(members)[0]
        layer = current
        while True:
            layer = ring.add_table[layer, g]
            fresh = layer[~members[layer]]
            if not len(fresh):
                break
            members[fresh] = True
            layer = np.nonzero(members)[0]
        # members is now H + <g>
    return members


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True, eq=False)
class IdealHandle:
    ring: FiniteRing
    generators: tuple
    expansion: frozenset

    def __contains__(self, x):
        return _value(self.ring, x) in self.expansion

    def __eq__(self, other):
        return isinstance(other, IdealHandle) and other.ring is self.ring and other.expansion == self.expansion

    def __hash__(self):
        return hash((id(self.ring), self.expansion))

    def __le__(self, other):
        return self.expansion <= other.expansion

    def __len__(self):
        return len(self.expansion)

    @property
    def mask(self):
        return _mask(self.ring, self.expansion)

    @property
    def is_unit_ideal(self):
        return self.ring.one in self.expansion

    @property
    def is_proper(self):
        return not self.is_unit_ideal

    def sorted_elements(self):
        return sorted(self.expansion, key=self.ring.index)

    def __str__(self):
        gens = self.generators or (self.ring.zero,)
        return "(" + ", ".join(self.ring.format(g) for g in gens) + ")"

    __repr__ = __str__


def _ideal_from_mask(ring, mask, generators=None):
    expansion = frozenset(ring.elements[i] for i in np.nonzero(mask)[0])
    if generators is None:
        generators = minimal_generators(ring, expansion)
    return IdealHandle(ring, tuple(generators), expansion)


def ideal_expand(ring, generators, budget=None):
    """Smallest ideal containing ``generators``."""
    if budget is not None and ring.size > budget:
        raise BudgetExceeded("ideal expansion ring size", budget)
    gens = tuple(_value(ring, g) for g in generators)
    if not gens:
        return IdealHandle(ring, (), frozenset([ring.zero]))
    gidx = np.array([ring.index(g) for g in gens])
    multiples = np.unique(ring.mul_table[:, gidx])
    mask = _additive_closure(ring, multiples)
    return _ideal_from_mask(ring, mask, gens)


def minimal_generators(ring, expansion):
    """A short generating set for an expanded ideal (greedy, in element order)."""
    gens = []
    mask = np.zeros(ring.size, dtype=bool)
    mask[ring.index(ring.zero)] = True
    target = len(expansion)
    for e in sorted(expansion, key=ring.index):
        if mask.sum() == target:
            break
        if not mask[ring.index(e)]:
            gens.append(e)
            mask = ideal_expand(ring, gens).mask
    return tuple(gens)


def unit_ideal(ring):
    return IdealHandle(ring, (ring.one,), frozenset(ring.elements))


def zero_ideal(ring):
    return IdealHandle(ring, (), frozenset([ring.zero]))


def ideal_combine(ring, I, J, mode):
    """Sum, product or intersection of two ideals of ``ring``."""
    if I.ring is not ring or J.ring is not ring:
        raise ValueError("ideals from different rings")
    if mode == "sum":
        return ideal_expand(ring, I.generators + J.generators)
    if mode == "product":
        return ideal_expand(ring, [ring.mul(a, b) for a in I.generators for b in J.generators])
    if mode == "intersection":
        return _ideal_from_mask(ring, I.mask & J.mask)
    raise ValueError(f"unknown mode {mode!r}")


def _radical_mask(ring, mask):
    n = ring.size
    idx = np.arange(n)
    power = idx.copy()
    out = mask[power].copy()
    for _ in range(n - 1):
        power = ring.mul_table[power, idx]
        out |= mask[power]
    return out


def ideal_radical(ring, I):
    """{x : x^k in I for some k <= |R|}."""
    return _ideal_from_mask(ring, _radical_mask(ring, I.mask))


@dataclass(frozen=True)
class IdealFlags:
    proper: bool
    prime: bool
    primary: bool
    radical: bool
    witness: Optional[tuple] = None  # (x, y) with xy in I, x, y not in I, when not prime

    def __str__(self):
        names = [n if getattr(self, n) else f"not {n}" for n in ("proper", "prime", "primary", "radical")]
        return "{" + ", ".join(names) + "}"


def classify_ideal(ring, I):
    """Definitional proper/prime/primary/radical checks by exhaustion."""
    m = I.mask
    proper = not m[ring.index(ring.one)]
    rad = _radical_mask(ring, m)
    radical = bool((rad == m).all())
    if not proper:
        return IdealFlags(False, False, False, radical)
    prod_in = m[ring.mul_table]
    bad_prime = prod_in & ~m[:, None] & ~m[None, :]
    bad_primary = prod_in & ~m[:, None] & ~rad[None, :]
    witness = None
    if bad_prime.any():
        x, y = np.argwhere(bad_prime)[0]
        witness = (ring.elements[x], ring.elements[y])
    return IdealFlags(True, not bad_prime.any(), not bad_primary.any(), radical, witness)


def is_prime_ideal(ring, I):
    return classify_ideal(ring, I).prime


def is_unit(ring, x):
    return ring.is_unit(_value(ring, x))


def ideal_lattice(ring, cap=IDEAL_LATTICE_CAP):
    """All ideals of ``ring``: cyclic ideals closed under pairwise sums."""
    masks = {}
    for i in range(ring.size):
        I = ideal_expand(ring, [ring.elements[i]])
        key = I.expansion
        if key not in masks:
            masks[key] = I
            if len(masks) > cap:
                raise BudgetExceeded("ideal lattice", cap)
    frontier = list(masks.values())
    while frontier:
        fresh = []
        current = list(masks.values())
        for a in frontier:
            for b in current:
                s = ideal_expand(ring, a.generators + b.generators)
                if s.expansion not in masks:
                    masks[s.expansion] = s
                    fresh.append(s)
                    if len(masks) > cap:
                        raise BudgetExceeded("ideal lattice", cap)
        frontier = fresh
    return sorted(masks.values(), key=lambda I: (len(I), sorted(ring.index(e) for e in I.expansion)))


# ---------------------------------------------------------------------------
# primes and spectra


@dataclass(frozen=True, eq=False)
class PrimeIdealHandle:
    ideal: object
    certification: str = "finite-definition-check"  # | local-factor-maximal | user-asserted | ...

    def __eq__(self, other):
        return isinstance(other, PrimeIdealHandle) and self.ideal == other.ideal

    def __hash__(self):
        return hash(self.ideal)

    def __str__(self):
        return str(self.ideal)

    __repr__ = __str__


@dataclass
class SpectrumPoset:
    """Primes with an explicit containment relation: (i, j) means primes[i] ⊆ primes[j]."""

    primes: list
    containment: frozenset = field(default_factory=frozenset)

    def __len__(self):
        return len(self.primes)

    def contains(self, i, j):
        """primes[i] ⊆ primes[j]."""
        return (i, j) in self.containment

    def maximal(self):
        return [i for i in range(len(self.primes))
                if not any(self.contains(i, j) and not self.contains(j, i) for j in range(len(self.primes)))]

    def is_antichain(self):
        return all(i == j for i, j in self.containment)

    def check_order(self):
        n = len(self.primes)
        refl = all((i, i) in self.containment for i in range(n))
        trans = all((i, k) in self.containment
                    for i, j in self.containment for j2, k in self.containment if j == j2)
        return refl and trans

    def index_of(self, prime):
        for i, p in enumerate(self.primes):
            if p == prime:
                return i
        raise KeyError(prime)


def finite_spectrum_poset(primes):
    cont = frozenset((i, j) for i, p in enumerate(primes) for j, q in enumerate(primes)
                     if p.ideal.expansion <= q.ideal.expansion)
    return SpectrumPoset(list(primes), cont)


def primitive_idempotents(ring):
    idem = [e for e in ring.idempotents if e != ring.zero]
    out = []
    for e in idem:
        if all(ring.mul(e, f) in (ring.zero, e) for f in idem):
            out.append(e)
    return out


def enumerate_spectrum(ring):
    """Spec(R) via the idempotent decomposition R = prod e_i R into local rings."""
    primes = []
    for e in primitive_idempotents(ring):
        ie = ring.index(e)
        local = np.unique(ring.mul_table[ie])          # e R
        has_inverse = (ring.mul_table[np.ix_(local, local)] == ie).any(axis=1)
        maximal = np.zeros(ring.size, dtype=bool)
        maximal[local[~has_inverse]] = True             # non-units of e R
        pulled = maximal[ring.mul_table[ie]]           # {x : e x in m_e}
        primes.append(PrimeIdealHandle(_ideal_from_mask(ring, pulled), "local-factor-maximal"))
    primes.sort(key=lambda P: sorted(ring.index(x) for x in P.ideal.expansion))
    return finite_spectrum_poset(primes)


def prime_handle(ring, I, certification=None):
    """Certify ``I`` prime by the definitional check (or record an assertion)."""
    if not isinstance(I, IdealHandle):
        I = ideal_expand(ring, I)
    if certification == "user-asserted":
        return PrimeIdealHandle(I, "user-asserted")
    flags = classify_ideal(ring, I)
    if not flags.prime:
        raise ValueError(f"{I} is not a prime ideal of {ring} (witness {flags.witness})")
    return PrimeIdealHandle(I, "finite-definition-check")


# ---------------------------------------------------------------------------
# quotients and localization


def quotient_ring(ring, I, name=None):
    """R/I with coset representatives as normal forms (zero ring allowed)."""
    if not isinstance(I, IdealHandle):
        I = ideal_expand(ring, I)
    q = QuotientRing(ring, I.expansion, name=name or f"{ring.name}/{I}",
                     descriptor=Quotient(getattr(ring, "descriptor", None), I.generators))
    q.ideal_handle = I
    return q


@dataclass(frozen=True)
class LocalizationSpec:
    mode: str                # "by-mult-set" | "semi-local-at"
    gens: tuple = ()         # multiplicative set generators (by-mult-set)
    primes: tuple = ()       # PrimeIdealHandles (semi-local-at)

    @classmethod
    def by_mult_set(cls, gens):
        return cls("by-mult-set", gens=tuple(gens))

    @classmethod
    def semi_local_at(cls, primes):
        return cls("semi-local-at", primes=tuple(primes))


@dataclass
class LocalizationResult:
    ring: FiniteRing
    mult_set: frozenset
    kernel: IdealHandle
    survivors: list          # primes of the base disjoint from S
    images: list             # their images in the localized ring
    maximal: list            # indices into survivors of the maximal ones
    is_zero: bool

    @property
    def surviving_spectrum(self):
        return finite_spectrum_poset(self.survivors)


def multiplicative_closure(ring, gens):
    members = np.zeros(ring.size, dtype=bool)
    members[ring.index(ring.one)] = True
    frontier = [ring.index(ring.one)]
    gidx = [ring.index(_value(ring, g)) for g in gens]
    while frontier:
        nxt = []
        for i in frontier:
            for g in gidx:
                k = ring.mul_table[i, g]
                if not members[k]:
                    members[k] = True
                    nxt.append(k)
        frontier = nxt
    return members


def localize_finite(ring, spec, allow_zero=False, name=None):
    """S^{-1}R computed as R/K with K = {r : s r = 0 for some s in S}."""
    if spec.mode == "by-mult-set":
        S = multiplicative_closure(ring, spec.gens)
    elif spec.mode == "semi-local-at":
        primes = list(spec.primes)
        for a in primes:
            for b in primes:
                if a is not b and a.ideal.expansion < b.ideal.expansion:
                    raise ValueError(f"primes {a} ⊂ {b} are comparable")
        S = np.ones(ring.size, dtype=bool)
        for P in primes:
            S &= ~P.ideal.mask
    else:
        raise ValueError(f"unknown localization mode {spec.mode!r}")
    zero = ring.index(ring.zero)
    s_idx = np.nonzero(S)[0]
    if S[zero] and not allow_zero:
        raise ZeroRingError(f"multiplicative set of {ring} contains 0; localization is the zero ring")
    K = (ring.mul_table[s_idx, :] == zero).any(axis=0)
    kernel = _ideal_from_mask(ring, K)
    loc = quotient_ring(ring, kernel, name=name or f"S^-1 {ring.name}")
    loc.descriptor = LocalizedFinite(getattr(ring, "descriptor", None),
                                     tuple(spec.gens) if spec.mode == "by-mult-set" else ())
    # images of S must be units in R/K
    for i in s_idx:
        if not loc.is_unit(loc.project(ring.elements[i])):
            raise AssertionError(f"{ring.format(ring.elements[i])} did not become a unit")  # finite rings: cannot happen
    spectrum = enumerate_spectrum(ring)
    survivors = [P for P in spectrum.primes if not (P.ideal.mask & S).any()]
    images = [PrimeIdealHandle(_ideal_from_mask(loc, ideal_expand(loc, [loc.project(g) for g in P.ideal.generators]).mask),
                               "local-factor-maximal") for P in survivors]
    poset = finite_spectrum_poset(survivors)
    return LocalizationResult(loc, frozenset(ring.elements[i] for i in s_idx), kernel, survivors, images,
                              poset.maximal(), loc.is_zero_ring)


# ---------------------------------------------------------------------------
# ring maps


@dataclass
class HomCheck:
    ok: bool
    witness: Optional[str] = None
    mapping: Optional[dict] = None

    def __bool__(self):
        return self.ok


class RingHom:
    """A map of finite rings given by its full graph."""

    def __init__(self, source, target, mapping):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)

    def __call__(self, x):
        return self.mapping[self.source.normal(x)]

    @classmethod
    def from_generators(cls, source, target, images):
        check = check_ring_hom(source, target, images)
        if not check.ok:
            raise ValueError(f"not a ring map: {check.witness}")
        return cls(source, target, check.mapping)

    @classmethod
    def identity(cls, ring):
        return cls(ring, ring, {x: x for x in ring.elements})

    @classmethod
    def projection(cls, quotient):
        return cls(quotient.base, quotient, {x: quotient.project(x) for x in quotient.base.elements})


def check_ring_hom(source, target, images):
    """Extend generator images to a map and verify it is a ring homomorphism.

    ``images`` maps source elements to target elements (normal forms or text).
    Returns a :class:`HomCheck` whose witness names the first failing equation.
    """
    fmt_s, fmt_t = source.format, target.format
    m = {source.zero: target.zero}
    for a, b in images.items():
        m[_value(source, a)] = _value(target, b)
    if source.one not in m:
        return HomCheck(False, "1 has no image")
    if m[source.one] != target.one:
        return HomCheck(False, f"1 ↦ {fmt_t(m[source.one])} ≠ 1")
    known = list(m)
    frontier = list(m)
    while frontier:
        fresh = []
        for a in frontier:
            for b in list(known):
                for op, sop, top in (("+", source.add, target.add), ("*", source.mul, target.mul)):
                    c = sop(a, b)
                    img = top(m[a], m[b])
                    if c not in m:
                        m[c] = img
                        fresh.append(c)
                        known.append(c)
                    elif m[c] != img:
                        return HomCheck(False, f"{fmt_s(a)}{op}{fmt_s(b)}: {fmt_s(c)} ↦ {fmt_t(m[c])} "
                                               f"but {fmt_s(a)}{op}{fmt_s(b)} ↦ {fmt_t(img)} ≠ {fmt_t(m[c])}")
        frontier = fresh
    if len(m) != source.size:
        return HomCheck(False, "generator images do not determine the map")
    for a in source.elements:
        for b in source.elements:
            if m[source.add(a, b)] != target.add(m[a], m[b]):
                return HomCheck(False, f"additivity fails at ({fmt_s(a)}, {fmt_s(b)})")
            if m[source.mul(a, b)] != target.mul(m[a], m[b]):
                return HomCheck(False, f"multiplicativity fails at ({fmt_s(a)}, {fmt_s(b)})")
    return HomCheck(True, None, m)


@dataclass
class FiberResult:
    ring: FiniteRing
    prime: PrimeIdealHandle
    is_zero: bool


def compute_fiber(hom, p):
    """S^{-1}(B/pB) for a ring map A -> B and a prime p of A."""
    check = check_ring_hom(hom.source, hom.target, hom.mapping)
    if not check.ok:
        raise ValueError(f"not a ring map: {check.witness}")
    A, B = hom.source, hom.target
    P = p.ideal if isinstance(p, PrimeIdealHandle) else p
    pB = ideal_expand(B, [hom(x) for x in P.generators])
    BpB = quotient_ring(B, pB, name=f"{B.name}/pB")
    S = {BpB.project(hom(x)) for x in A.elements if x not in P.expansion}
    res = localize_finite(BpB, LocalizationSpec.by_mult_set(sorted(S, key=BpB.index)), allow_zero=True,
                          name=f"fiber of {A.name}->{B.name} at {P}")
    return FiberResult(res.ring, p if isinstance(p, PrimeIdealHandle) else PrimeIdealHandle(P), res.is_zero)


# ---------------------------------------------------------------------------
# subrings and joins


def subring_closure(ring, gens):
    mask = np.zeros(ring.size, dtype=bool)
    mask[ring.index(ring.zero)] = True
    mask[ring.index(ring.one)] = True
    for g in gens:
        mask[ring.index(_value(ring, g))] = True
    while True:
        idx = np.nonzero(mask)[0]
        new = mask.copy()
        new[ring.add_table[np.ix_(idx, idx)].ravel()] = True
        new[ring.mul_table[np.ix_(idx, idx)].ravel()] = True
        if new.sum() == mask.sum():
            return frozenset(ring.elements[i] for i in idx)
        mask = new


def is_subring(ring, elements):
    S = {_value(ring, x) for x in elements}
    if ring.one not in S or ring.zero not in S:
        return False
    return all(ring.add(a, b) in S and ring.mul(a, b) in S for a in S for b in S) and \
        all(ring.neg(a) in S for a in S)


def join_subrings(ring, A, B):
    """Smallest subring of ``ring`` containing the subrings A and B."""
    for name, S in (("A", A), ("B", B)):
        if not is_subring(ring, S):
            raise NotASubring(f"{name} is not a subring of {ring}")
    return subring_closure(ring, [_value(ring, x) for x in A] + [_value(ring, x) for x in B])


def join_by_sums(ring, A, B):
    """All finite sums a_1 b_1 + ... + a_n b_n (the explicit form of the join)."""
    prods = {ring.mul(_value(ring, a), _value(ring, b)) for a in A for b in B}
    idx = np.array(sorted(ring.index(x) for x in prods))
    mask = _additive_closure(ring, idx)
    return frozenset(ring.elements[i] for i in np.nonzero(mask)[0])


# ---------------------------------------------------------------------------
# construction from descriptors


def make_ring(descriptor, name=None):
    """Build a ring instance from a descriptor (or return a ring unchanged)."""
    if isinstance(descriptor, FiniteRing):
        return descriptor
    if isinstance(descriptor, ZMod):
        if descriptor.modulus < 2:
            raise ValueError("ZMod modulus must be >= 2")
        return ZModRing(descriptor.modulus)
    if isinstance(descriptor, GaloisField):
        return GaloisFieldRing(descriptor.p, descriptor.k, descriptor.modulus_poly)
    if isinstance(descriptor, Product):
        return ProductRing([make_ring(f) for f in descriptor.factors], name=name)
    if isinstance(descriptor, Quotient):
        base = make_ring(descriptor.base)
        I = ideal_expand(base, descriptor.ideal_gens)
        return quotient_ring(base, I, name=name)
    if isinstance(descriptor, LocalizedFinite):
        base = make_ring(descriptor.base)
        return localize_finite(base, LocalizationSpec.by_mult_set(descriptor.mult_set_gens),
                               allow_zero=descriptor.allow_zero, name=name).ring
    raise TypeError(f"not a ring descriptor: {descriptor!r}")
