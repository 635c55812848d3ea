"""Verifiers on prime spectra: prime sums, IIP, semi-local filters and polygons.

Two backends share the code below.  The finite backend works with
:class:`~ringforge.ideals.IdealHandle` (exhaustive), the polynomial backend
with :class:`~ringforge.groebner.PolyIdeal` (Gröbner bases) over a
user-declared list of primes.
"""

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .errors import BudgetExceeded
from .groebner import (GBasis, MPoly, PolyIdeal, PolyRing, comaximality_certificate, finite_quotient_bridge,
                       ideal_membership, poly_ideal_contains, zero_dim_check)
from .ideals import (IdealHandle, PrimeIdealHandle, SpectrumPoset, classify_ideal, enumerate_spectrum,
                     ideal_combine, ideal_expand, ideal_lattice, zero_ideal)

SEARCH_BUDGET = 1_000_000


# ---------------------------------------------------------------------------
# backend helpers


def _ideal(x):
    return x.ideal if isinstance(x, PrimeIdealHandle) else x


def ideal_le(a, b):
    """a ⊆ b for two ideals on the same backend."""
    a, b = _ideal(a), _ideal(b)
    if isinstance(a, IdealHandle):
        return a.expansion <= b.expansion
    return all(b.basis.contains(g) for g in a.generators)


def ideal_eq(a, b):
    return ideal_le(a, b) and ideal_le(b, a)


def ideal_sum(a, b):
    a, b = _ideal(a), _ideal(b)
    if isinstance(a, IdealHandle):
        return ideal_combine(a.ring, a, b, "sum")
    return a + b


def spectrum_poset(primes):
    """SpectrumPoset over arbitrary prime handles; containment decided per backend."""
    primes = list(primes)
    cont = frozenset((i, j) for i, p in enumerate(primes) for j, q in enumerate(primes)
                     if i == j or ideal_le(p, q))
    return SpectrumPoset(primes, cont)


def _graph_variable(f):
    """A variable v such that f = c*v + g with g free of v, if any."""
    R = f.ring
    for i in range(R.nvars):
        unit = tuple(1 if j == i else 0 for j in range(R.nvars))
        if unit in f.terms and all(e == unit or e[i] == 0 for e in f.terms):
            return R.variables[i]
    return None


def certify_poly_prime(ideal):
    """How (if at all) the ideal can be certified prime without factoring.

    Returns one of "zero-dimensional", "certified-zero", "certified-linear",
    "certified-graph" or None.  Raises ValueError for ideals found not prime or not proper.
    """
    I = ideal
    if I.is_unit_ideal:
        raise ValueError(f"{I} is the unit ideal")
    gens = [g for g in I.generators if g]
    if not gens:
        return "certified-zero"
    if all(g.total_degree <= 1 for g in gens):
        return "certified-linear"
    if len(gens) == 1 and _graph_variable(gens[0]) is not None:
        return "certified-graph"
    try:
        zd = zero_dim_check(I)
    except BudgetExceeded:
        return None
    if zd:
        B = finite_quotient_bridge(I)
        flags = classify_ideal(B, zero_ideal(B))
        if not flags.prime:
            raise ValueError(f"{I} is not prime: {B.format(flags.witness[0])} * {B.format(flags.witness[1])} ∈ I")
        return "zero-dimensional"
    return None


def poly_prime(ring, gens, certification=None):
    """A PrimeIdealHandle for polynomial generators; unprovable primes are marked user-asserted."""
    I = gens if isinstance(gens, PolyIdeal) else PolyIdeal(ring, gens)
    level = certification or certify_poly_prime(I) or "user-asserted"
    return PrimeIdealHandle(I, level)


def poly_spectrum(ring, prime_gens):
    return spectrum_poset([poly_prime(ring, g) for g in prime_gens])


# ---------------------------------------------------------------------------
# sum classification


@dataclass
class SumClassification:
    verdict: str                       # Unit | Prime | ProperNonPrime | Undecided
    sum_ideal: object = None
    witness: Optional[tuple] = None    # ProperNonPrime: (x, y);  Unit: (u, v) with u ∈ p, v ∈ q, u + v = 1
    basis: Optional[GBasis] = None
    via: str = ""

    def __str__(self):
        return self.verdict


def _unit_split_finite(ring, p, q):
    one = ring.one
    for a in p.sorted_elements():
        b = ring.sub(one, a)
        if b in q.expansion:
            return a, b
    return None


def classify_prime_sum(p, q):
    """Unit, Prime, ProperNonPrime (with zero-divisor witness) or Undecided."""
    P, Q = _ideal(p), _ideal(q)
    if isinstance(P, IdealHandle):
        ring = P.ring
        S = ideal_combine(ring, P, Q, "sum")
        if S.is_unit_ideal:
            return SumClassification("Unit", S, _unit_split_finite(ring, P, Q), via="exhaustive")
        flags = classify_ideal(ring, S)
        if flags.prime:
            return SumClassification("Prime", S, via="exhaustive")
        return SumClassification("ProperNonPrime", S, flags.witness, via="exhaustive")
    S = P + Q
    cert = comaximality_certificate(P, Q)
    if cert is not None:
        return SumClassification("Unit", S, (cert.u, cert.v), via="comaximality-certificate")
    try:
        zd = zero_dim_check(S)
        if not zd:
            if poly_ideal_contains(Q, P) or poly_ideal_contains(P, Q):
                return SumClassification("Prime", S, basis=S.basis, via="containment")
            if all(g.total_degree <= 1 for g in S.generators if g):
                return SumClassification("Prime", S, basis=S.basis, via="linear")
            return SumClassification("Undecided", S, basis=S.basis, via="positive-dimensional")
        B = finite_quotient_bridge(S)
    except BudgetExceeded:
        return SumClassification("Undecided", S, basis=S.basis, via="budget")
    flags = classify_ideal(B, zero_ideal(B))
    if flags.prime:
        return SumClassification("Prime", S, basis=S.basis, via="zero-dimensional-bridge")
    x, y = (B.lift(w) for w in flags.witness)
    return SumClassification("ProperNonPrime", S, (x, y), basis=S.basis, via="zero-dimensional-bridge")


def recheck_sum_classification(cls, p, q):
    """Re-verify the witness of a classification by membership tests only."""
    P, Q = _ideal(p), _ideal(q)
    if cls.verdict == "Unit":
        u, v = cls.witness
        if isinstance(P, IdealHandle):
            ring = P.ring
            return u in P and v in Q and ring.add(u, v) == ring.one
        return bool(ideal_membership(u, P)) and bool(ideal_membership(v, Q)) and u + v == u.ring.one
    if cls.verdict == "ProperNonPrime":
        x, y = cls.witness
        S = cls.sum_ideal
        if isinstance(P, IdealHandle):
            ring = P.ring
            return ring.mul(x, y) in S and x not in S and y not in S
        return S.basis.contains(x * y) and not S.basis.contains(x) and not S.basis.contains(y)
    return True


# ---------------------------------------------------------------------------
# IIP


@dataclass
class MaximalBelow:
    status: str                  # unique | empty | multiple
    prime: Optional[object] = None
    maxima: list = field(default_factory=list)
    sigma: list = field(default_factory=list)


def unique_maximal_below(spectrum, bound):
    """The unique maximal prime contained in ``bound``, or why there is none."""
    sigma = [i for i, P in enumerate(spectrum.primes) if ideal_le(P, bound)]
    if not sigma:
        return MaximalBelow("empty")
    maxima = [i for i in sigma
              if not any(spectrum.contains(i, j) and not spectrum.contains(j, i) for j in sigma)]
    primes = [spectrum.primes[i] for i in maxima]
    if len(maxima) == 1:
        return MaximalBelow("unique", primes[0], primes, [spectrum.primes[i] for i in sigma])
    return MaximalBelow("multiple", None, primes, [spectrum.primes[i] for i in sigma])


@dataclass
class IIPReport:
    ring_name: str
    mode: str
    holds: bool
    verdicts: dict                      # mode -> bool, for all three criteria
    counterexamples: dict = field(default_factory=dict)
    pairs: list = field(default_factory=list)   # (p, q, SumClassification) for the pairwise mode

    @property
    def equivalent(self):
        return len(set(self.verdicts.values())) == 1


IIP_MODES = ("pairwise", "criterion-b", "criterion-c")


def check_iip(ring, mode="pairwise", lattice_cap=None):
    """Irreducible intersection property of a finite ring under all three criteria."""
    if mode not in IIP_MODES:
        raise ValueError(f"mode must be one of {IIP_MODES}")
    spec = enumerate_spectrum(ring)
    primes = spec.primes
    verdicts, cex = {}, {}
    pairs = []
    ok = True
    for a, b in itertools.combinations_with_replacement(range(len(primes)), 2):
        c = classify_prime_sum(primes[a], primes[b])
        pairs.append((primes[a], primes[b], c))
        if c.verdict not in ("Unit", "Prime") and ok:
            ok = False
            cex["pairwise"] = (primes[a], primes[b], c)
    verdicts["pairwise"] = ok

    lattice = ideal_lattice(ring, cap=lattice_cap) if lattice_cap else ideal_lattice(ring)
    ok = True
    for I in lattice:
        if not I.is_proper:
            continue
        r = unique_maximal_below(spec, I)
        if r.status == "multiple":
            ok = False
            cex["criterion-b"] = (I, r)
            break
    verdicts["criterion-b"] = ok

    ok = True
    for a, b in itertools.combinations_with_replacement(range(len(primes)), 2):
        I = ideal_sum(primes[a], primes[b])
        if not I.is_proper:
            continue
        r = unique_maximal_below(spec, I)
        if r.status != "unique":
            ok = False
            cex["criterion-c"] = (I, r)
            break
    verdicts["criterion-c"] = ok
    return IIPReport(ring.name, mode, verdicts[mode], verdicts, cex, pairs)


# ---------------------------------------------------------------------------
# semi-local filters and joins


def filter_spectrum_semilocal(spectrum, keep_below):
    """Primes lying under one of ``keep_below`` (pairwise incomparable)."""
    keep = [_find(spectrum, P) for P in keep_below]
    for a, b in itertools.permutations(keep, 2):
        if spectrum.contains(a, b):
            raise ValueError(f"{spectrum.primes[a]} ⊆ {spectrum.primes[b]}: primes must be incomparable")
    idx = [i for i in range(len(spectrum.primes)) if any(spectrum.contains(i, k) for k in keep)]
    pos = {old: new for new, old in enumerate(idx)}
    cont = frozenset((pos[i], pos[j]) for i, j in spectrum.containment if i in pos and j in pos)
    return SpectrumPoset([spectrum.primes[i] for i in idx], cont)


def _find(spectrum, P):
    for i, Q in enumerate(spectrum.primes):
        if Q is P or Q == P or ideal_eq(Q, P):
            return i
    raise KeyError(f"{P} is not in the spectrum")


@dataclass
class JoinLocality:
    survivors: list
    maximal: list
    status: str          # local | not-local | empty

    @property
    def local(self):
        return self.status == "local"


def join_locality_check(spectrum, p, q):
    a, b = _find(spectrum, p), _find(spectrum, q)
    idx = [i for i in range(len(spectrum.primes)) if spectrum.contains(i, a) and spectrum.contains(i, b)]
    if not idx:
        return JoinLocality([], [], "empty")
    maxima = [i for i in idx if not any(spectrum.contains(i, j) and not spectrum.contains(j, i) for j in idx)]
    status = "local" if len(maxima) == 1 else "not-local"
    return JoinLocality([spectrum.primes[i] for i in idx], [spectrum.primes[i] for i in maxima], status)


# ---------------------------------------------------------------------------
# polygons


@dataclass
class PolygonDescriptor:
    n: int
    edges: tuple          # P_0 .. P_{n-1}
    vertices: tuple       # Q_0 .. Q_{n-1}
    backend: str = "polynomial"
    ring: object = None
    name: str = "polygon"

    def __post_init__(self):
        if self.n <= 2:
            raise ValueError(f"a polygon needs n > 2 sides, got n = {self.n}")
        if len(self.edges) != self.n or len(self.vertices) != self.n:
            raise ValueError("need exactly n edge primes and n vertex primes")

    @classmethod
    def from_generators(cls, ring, edges, vertices, name="polygon"):
        E = tuple(poly_prime(ring, [ring(g) for g in e]) for e in edges)
        V = tuple(poly_prime(ring, [ring(g) for g in v]) for v in vertices)
        return cls(len(E), E, V, "polynomial", ring, name)

    def edge_ideal(self, i):
        return _ideal(self.edges[i % self.n])

    def vertex_ideal(self, j):
        return _ideal(self.vertices[j % self.n])

    def adjacent(self, i, j):
        """Edge i meets vertex j exactly when j = i or j = i-1 (mod n)."""
        return j % self.n in (i % self.n, (i - 1) % self.n)


@dataclass
class ContainmentCell:
    i: int
    j: int
    contained: bool
    expected: bool
    evidence: list        # per generator of P_i: transcript (member) or remainder (non-member)

    @property
    def ok(self):
        return self.contained == self.expected


@dataclass
class PolygonValidationReport:
    polygon: PolygonDescriptor
    cells: list
    distinctness: list    # (description, ok)
    valid: bool

    def failures(self):
        out = [f"P_{c.i} {'⊆' if c.contained else '⊄'} Q_{c.j}" for c in self.cells if not c.ok]
        return out + [d for d, ok in self.distinctness if not ok]


def _containment_evidence(P, Q):
    """Is P ⊆ Q, with per-generator evidence."""
    if isinstance(P, IdealHandle):
        return P.expansion <= Q.expansion, [(g, g in Q) for g in P.generators]
    ev = []
    ok = True
    for g in P.generators:
        m = ideal_membership(g, Q)
        ev.append((g, m.transcript if m.member else m.remainder))
        ok &= m.member
    return ok, ev


def validate_polygon(desc):
    n = desc.n
    cells = []
    for i in range(n):
        for j in range(n):
            contained, ev = _containment_evidence(desc.edge_ideal(i), desc.vertex_ideal(j))
            cells.append(ContainmentCell(i, j, contained, desc.adjacent(i, j), ev))
    checks = []
    for a, b in itertools.permutations(range(n), 2):
        checks.append((f"P_{a} ⊄ P_{b}", not ideal_le(desc.edge_ideal(a), desc.edge_ideal(b))))
        checks.append((f"Q_{a} ⊄ Q_{b}", not ideal_le(desc.vertex_ideal(a), desc.vertex_ideal(b))))
    for a in range(n):
        for b in range(n):
            checks.append((f"P_{a} ≠ Q_{b}", not ideal_eq(desc.edge_ideal(a), desc.vertex_ideal(b))))
    valid = all(c.ok for c in cells) and all(ok for _, ok in checks)
    return PolygonValidationReport(desc, cells, checks, valid)


def polygon_spectrum(desc):
    """The declared spectrum {P_i} ∪ {Q_j} of a polygon."""
    return spectrum_poset(list(desc.edges) + list(desc.vertices))


def _dihedral_images(edges, verts):
    n = len(edges)
    for r in range(n):
        yield (tuple(edges[(i + r) % n] for i in range(n)), tuple(verts[(i + r) % n] for i in range(n)))
        yield (tuple(edges[(r - i) % n] for i in range(n)), tuple(verts[(r - i - 1) % n] for i in range(n)))


def search_polygons(spectrum, n, budget=SEARCH_BUDGET):
    """All n-gons in a declared spectrum, one canonical representative per dihedral class."""
    if n <= 2:
        raise ValueError(f"a polygon needs n > 2 sides, got n = {n}")
    m = len(spectrum.primes)
    le = spectrum.contains
    above = {i: {k for k in range(m) if k != i and le(i, k) and not le(k, i)} for i in range(m)}
    found = set()
    nodes = 0

    def vertex_options(edges):
        opts = []
        for i in range(n):
            a, b = edges[i], edges[(i + 1) % n]
            cands = [k for k in sorted(above[a] & above[b])
                     if all(not le(edges[t], k) for t in range(n) if t not in (i, (i + 1) % n))]
            if not cands:
                return None
            opts.append(cands)
        return opts

    def extend(edges):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("polygon search nodes", budget)
        if len(edges) == n:
            opts = vertex_options(edges)
            if opts is None:
                return
            for verts in itertools.product(*opts):
                if len(set(verts)) < n:
                    continue
                if any(le(a, b) for a, b in itertools.permutations(verts, 2)):
                    continue
                found.add(min(_dihedral_images(tuple(edges), tuple(verts))))
            return
        for k in range(m):
            if k in edges:
                continue
            if any(le(k, e) or le(e, k) for e in edges):
                continue
            if edges and not (above[edges[-1]] & above[k]):
                continue
            extend(edges + [k])

    extend([])
    out = []
    for edges, verts in sorted(found):
        out.append(PolygonDescriptor(n, tuple(spectrum.primes[i] for i in edges),
                                     tuple(spectrum.primes[i] for i in verts), _backend_of(spectrum),
                                     getattr(_ideal(spectrum.primes[edges[0]]), "ring", None),
                                     name=f"polygon{len(out)}"))
    return out


def _backend_of(spectrum):
    if spectrum.primes and isinstance(_ideal(spectrum.primes[0]), IdealHandle):
        return "finite"
    return "polynomial"


def finite_polygon_search(ring, n):
    return search_polygons(enumerate_spectrum(ring), n)
