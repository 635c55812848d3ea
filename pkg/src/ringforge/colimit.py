"""Directed systems of rings, colimit arithmetic and the tower of F_{p^d}.

Nodes are either :class:`~ringforge.rings.FiniteRing` tables or
:class:`~ringforge.fields.GF` fields (the latter for the large levels of a
tower, where tables would not fit).  Both expose ``add``, ``mul``,
``zero`` and ``one``.
"""

import math
import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import BudgetExceeded, CertificateError
from .fields import GF, MAX_FIELD_SIZE, FieldEmbedding
from .ideals import enumerate_spectrum, ideal_combine
from .rings import MAX_RING_SIZE, FiniteRing, GaloisFieldRing
from .spectrum import check_iip, classify_prime_sum

EXHAUSTIVE_NODE = 1 << 12


def _elements(node):
    return node.elements() if isinstance(node, GF) else node.elements


def _size(node):
    return node.q if isinstance(node, GF) else node.size


def _sample(node, rng):
    if isinstance(node, GF):
        return rng.randrange(node.q)
    return node.elements[rng.randrange(node.size)]


def _fmt(node, a):
    return node.format(a)


class _Identity:
    def __call__(self, x):
        return x


class _TableMap:
    def __init__(self, mapping):
        self.mapping = dict(mapping)

    def __call__(self, x):
        return self.mapping[x]


class _Composite:
    def __init__(self, first, then):
        self.first, self.then = first, then

    def __call__(self, x):
        return self.then(self.first(x))


@dataclass(frozen=True)
class ColimitElement:
    value: object
    level: int

    def __str__(self):
        return f"[{self.value}, {self.level}]"


class DirectedSystem:
    """Rings R_i over a finite directed index set with maps φ_ij for i ≤ j.

    ``le`` is the set of pairs (i, j) with i ≤ j; ``ub`` maps each pair to a
    stored upper bound.  ``maps[(i, j)]`` is a callable R_i -> R_j.
    """

    def __init__(self, nodes, le, ub, maps, labels=None, name="system"):
        self.nodes = list(nodes)
        self.le = frozenset(le)
        self.ub_table = dict(ub)
        self.maps = dict(maps)
        self.labels = list(labels) if labels else [str(i) for i in range(len(nodes))]
        self.name = name

    @classmethod
    def chain(cls, nodes, step_maps, labels=None, name="system"):
        """A linearly ordered system from maps R_i -> R_{i+1}."""
        n = len(nodes)
        maps = {(i, i): _Identity() for i in range(n)}
        for i in range(n):
            for j in range(i + 1, n):
                maps[(i, j)] = _Composite(maps[(i, j - 1)], step_maps[j - 1])
        le = {(i, j) for i in range(n) for j in range(i, n)}
        ub = {(i, j): max(i, j) for i in range(n) for j in range(n)}
        return cls(nodes, le, ub, maps, labels, name)

    @classmethod
    def constant(cls, ring, length=3, name=None):
        return cls.chain([ring] * length, [_Identity()] * (length - 1), name=name or f"const({ring.name})")

    def __len__(self):
        return len(self.nodes)

    def ub(self, i, j):
        return self.ub_table[(i, j)]

    def phi(self, i, j):
        if (i, j) not in self.le:
            raise ValueError(f"{i} is not below {j}")
        return self.maps[(i, j)]

    def lift(self, a, k):
        return ColimitElement(self.phi(a.level, k)(a.value), k)

    def element(self, value, level):
        node = self.nodes[level]
        if isinstance(node, FiniteRing):
            value = node.normal(value)
        return ColimitElement(value, level)

    def validate(self, samples=64, seed=0):
        """Directedness, φ_ii = id and φ_jk ∘ φ_ij = φ_ik (exhaustive on small nodes)."""
        problems = []
        n = len(self.nodes)
        for i in range(n):
            for j in range(n):
                k = self.ub(i, j)
                if (i, k) not in self.le or (j, k) not in self.le:
                    problems.append(f"ub({i},{j}) = {k} is not an upper bound")
        rng = random.Random(seed)
        for i in range(n):
            for x in self._test_elements(i, samples, rng):
                if self.phi(i, i)(x) != x:
                    problems.append(f"φ_{i}{i} moves {x}")
                    break
        for (i, j) in sorted(self.le):
            for (j2, k) in sorted(self.le):
                if j2 != j:
                    continue
                for x in self._test_elements(i, samples, rng):
                    if self.phi(j, k)(self.phi(i, j)(x)) != self.phi(i, k)(x):
                        problems.append(f"φ_{j}{k} ∘ φ_{i}{j} ≠ φ_{i}{k} at {x}")
                        break
        return problems

    def _test_elements(self, i, samples, rng):
        node = self.nodes[i]
        if _size(node) <= EXHAUSTIVE_NODE:
            return list(_elements(node))
        gen = [node.gen] if isinstance(node, GF) else []
        return gen + [_sample(node, rng) for _ in range(samples)]


# ---------------------------------------------------------------------------
# the F_{p^d} tower


def build_fpbar_tower(p, levels):
    """The chain F_{p^d1} ⊂ F_{p^d2} ⊂ ... with least-root embeddings."""
    levels = list(levels)
    if not levels:
        raise ValueError("need at least one level")
    for a, b in zip(levels, levels[1:]):
        if b % a or b <= a:
            raise ValueError(f"levels must form a strict divisibility chain, got {levels}")
    if p ** levels[-1] > MAX_FIELD_SIZE:
        raise BudgetExceeded("tower field size", MAX_FIELD_SIZE)
    fields = [GF(p, d) for d in levels]
    steps = [FieldEmbedding.find(a, b) for a, b in zip(fields, fields[1:])]
    n = len(fields)
    emb = {}
    for i in range(n):
        for j in range(i + 1, n):
            emb[(i, j)] = steps[i] if j == i + 1 else emb[(i, j - 1)].compose(steps[j - 1])
    maps = {(i, i): _Identity() for i in range(n)}
    maps.update(emb)
    le = {(i, j) for i in range(n) for j in range(i, n)}
    ub = {(i, j): max(i, j) for i in range(n) for j in range(n)}
    system = DirectedSystem(fields, le, ub, maps, [f"F_{p}^{d}" for d in levels], f"Fbar_{p}{levels}")
    system.p = p
    system.levels = levels
    system.steps = steps
    return system


def level_index(system, degree):
    return system.levels.index(degree)


def check_embedding_coherence(system, samples=64, seed=0):
    """φ_ik = φ_jk ∘ φ_ij for every triple, plus each generator image satisfies its modulus."""
    problems = list(system.validate(samples, seed))
    for (i, j), m in system.maps.items():
        if isinstance(m, FieldEmbedding):
            if m.target.poly_eval(list(m.source.modulus), m.image) != 0:
                problems.append(f"φ_{i}{j}: generator image is not a root of the modulus")
    return problems


def check_ring_map(source, target, f, samples=200, seed=0):
    """Exhaustive (small) or sampled check that f is a unital ring map."""
    rng = random.Random(seed)
    if f(source.one) != target.one:
        return False
    if _size(source) ** 2 <= 1 << 16:
        pairs = [(a, b) for a in _elements(source) for b in _elements(source)]
    else:
        pairs = [(_sample(source, rng), _sample(source, rng)) for _ in range(samples)]
    for a, b in pairs:
        if f(source.add(a, b)) != target.add(f(a), f(b)) or f(source.mul(a, b)) != target.mul(f(a), f(b)):
            return False
    return True


# ---------------------------------------------------------------------------
# colimit arithmetic


def colimit_op(system, a, b, op):
    """eq/add/mul of two classes, computed at ub(level_a, level_b)."""
    k = system.ub(a.level, b.level)
    x, y = system.lift(a, k).value, system.lift(b, k).value
    node = system.nodes[k]
    if op == "eq":
        return x == y
    if op == "add":
        return ColimitElement(node.add(x, y), k)
    if op == "mul":
        return ColimitElement(node.mul(x, y), k)
    raise ValueError(f"unknown op {op!r}")


def colimit_eq(system, a, b):
    return colimit_op(system, a, b, "eq")


def check_representative_independence(system, samples=32, seed=0):
    """Results from [r, i] and [φ_ij(r), j] agree for every op."""
    rng = random.Random(seed)
    problems = []
    for (i, j) in sorted(system.le):
        for _ in range(samples):
            r = ColimitElement(_sample(system.nodes[i], rng), i)
            r2 = system.lift(r, j)
            lvl = rng.randrange(len(system))
            b = ColimitElement(_sample(system.nodes[lvl], rng), lvl)
            for op in ("add", "mul"):
                x, y = colimit_op(system, r, b, op), colimit_op(system, r2, b, op)
                if not colimit_eq(system, x, y):
                    problems.append(f"{op} differs for {r} vs {r2} with {b}")
            if colimit_op(system, r, b, "eq") != colimit_op(system, r2, b, "eq"):
                problems.append(f"eq differs for {r} vs {r2} with {b}")
    return problems


@dataclass
class RootSearchResult:
    found: bool
    root: Optional[ColimitElement] = None
    checked_levels: tuple = ()
    needed_degree: Optional[int] = None    # least absolute degree holding a root, if computed


def _poly_eval(node, coeffs, x):
    acc = node.zero
    for c in reversed(coeffs):
        acc = node.add(node.mul(acc, x), c)
    return acc


def _node_roots(node, coeffs):
    if isinstance(node, GF):
        return node.roots(list(coeffs))
    return [x for x in node.elements if _poly_eval(node, coeffs, x) == node.zero]


def common_level(system, elements):
    k = elements[0].level
    for e in elements[1:]:
        k = system.ub(k, e.level)
    return k


def colimit_root_search(system, coeffs, max_degree=None):
    """A root of the monic with colimit coefficients (low-first), at the least level holding one."""
    k = common_level(system, list(coeffs))
    lifted = [system.lift(c, k).value for c in coeffs]
    node = system.nodes[k]
    if lifted[-1] != node.one:
        raise ValueError("polynomial must be monic")
    checked = []
    for L in sorted((j for (i, j) in system.le if i == k), key=lambda j: _size(system.nodes[j])):
        target = system.nodes[L]
        if max_degree is not None and isinstance(target, GF) and target.d > max_degree:
            break
        vals = [system.phi(k, L)(c) for c in lifted]
        checked.append(L)
        roots = _node_roots(target, vals)
        if roots:
            root = min(roots)
            if _poly_eval(target, vals, root) != target.zero:
                raise CertificateError("returned root does not satisfy the polynomial")
            return RootSearchResult(True, ColimitElement(root, L), tuple(checked))
    needed = None
    if isinstance(node, GF):
        try:
            needed = node.d * min(node.factor_degrees(lifted))
        except BudgetExceeded:
            needed = None
    return RootSearchResult(False, None, tuple(checked), needed)


# ---------------------------------------------------------------------------
# preservation suites


@dataclass
class SuiteReport:
    kind: str
    system: str
    node_failures: list = field(default_factory=list)
    instances: int = 0
    passed: int = 0
    rejected: list = field(default_factory=list)     # instances outside the system's reach, with reason
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.node_failures and not self.failures and self.passed == self.instances


def _tower_monic_suite(system, n, count, seed, sample_levels):
    from .closedness import split_monic_over_tower
    rng = random.Random(seed)
    rep = SuiteReport("n-adic", system.name)
    levels = system.levels
    max_level = levels[-1]
    attempts = 0
    while rep.instances < count:
        attempts += 1
        lvl = sample_levels[rng.randrange(len(sample_levels))]
        base = system.nodes[lvl]
        deg = rng.randint(1, n)
        f = [rng.randrange(base.q) for _ in range(deg)] + [1]
        res = split_monic_over_tower(base, f, max_level, levels=levels)
        if not res.ok:
            rep.rejected.append((levels[lvl], tuple(f), res.needed))
            continue
        rep.instances += 1
        coeffs = [ColimitElement(c, lvl) for c in f]
        root = colimit_root_search(system, coeffs)
        top = level_index(system, res.level)
        mapped = [system.phi(lvl, top)(c) for c in f]
        ok = root.found and res.reexpand() == mapped
        if root.found:
            k = root.root.level
            vals = [system.phi(lvl, k)(c) for c in f]
            ok &= _poly_eval(system.nodes[k], vals, root.root.value) == 0
        if ok:
            rep.passed += 1
        else:
            rep.failures.append((levels[lvl], tuple(f)))
    rep.details["attempts"] = attempts
    return rep


def _finite_monic_suite(system, n, count, seed):
    from .closedness import check_n_adically_closed
    rng = random.Random(seed)
    rep = SuiteReport("n-adic", system.name)
    for i, node in enumerate(system.nodes):
        r = check_n_adically_closed(node, n, seed=seed)
        if r.verdict == "not-closed":
            rep.node_failures.append((system.labels[i], r.text))
    if rep.node_failures:
        return rep
    for _ in range(count):
        i = rng.randrange(len(system))
        node = system.nodes[i]
        coeffs = [ColimitElement(_sample(node, rng), i) for _ in range(n)] + [ColimitElement(node.one, i)]
        rep.instances += 1
        if colimit_root_search(system, coeffs).found:
            rep.passed += 1
        else:
            rep.failures.append((i, [c.value for c in coeffs]))
    return rep


def finite_node(node):
    """A table-backed view of a node (GF levels become GaloisFieldRing)."""
    if isinstance(node, FiniteRing):
        return node, (lambda x: x), (lambda x: x)
    if node.q > MAX_RING_SIZE:
        raise BudgetExceeded("node size for table view", MAX_RING_SIZE)
    R = GaloisFieldRing(node.p, node.d, list(node.modulus))
    return R, (lambda a: R.elements[a]), (lambda t: R.index(t))


def _iip_suite(system):
    rep = SuiteReport("iip", system.name)
    views = []
    for i, node in enumerate(system.nodes):
        try:
            views.append(finite_node(node))
        except BudgetExceeded:
            views.append(None)
            rep.details.setdefault("skipped_nodes", []).append(system.labels[i])
            continue
        r = check_iip(views[-1][0])
        if not r.holds:
            rep.node_failures.append((system.labels[i], r.counterexamples))
    if rep.node_failures:
        return rep
    for (i, j) in sorted(system.le):
        if views[i] is None or views[j] is None:
            continue
        Ri, to_i, from_i = views[i]
        Rj, to_j, from_j = views[j]
        phi = system.phi(i, j)
        f = lambda x: to_j(phi(from_i(x)))
        spec_j = enumerate_spectrum(Rj).primes
        spec_i = enumerate_spectrum(Ri).primes
        for a in range(len(spec_j)):
            for b in range(a, len(spec_j)):
                P, Q = spec_j[a], spec_j[b]
                p_i = _pullback(Ri, f, P, spec_i)
                q_i = _pullback(Ri, f, Q, spec_i)
                rep.instances += 1
                cj = classify_prime_sum(P, Q)
                ci = classify_prime_sum(p_i, q_i)
                ok = cj.verdict in ("Unit", "Prime") and ci.verdict in ("Unit", "Prime")
                # the image of p_i + q_i lands in P + Q
                Sj = cj.sum_ideal
                ok &= all(f(x) in Sj.expansion for x in ci.sum_ideal.expansion)
                if ci.verdict == "Unit":
                    ok &= cj.verdict == "Unit"
                if ok:
                    rep.passed += 1
                else:
                    rep.failures.append((system.labels[i], system.labels[j], str(P), str(Q)))
    return rep


def _pullback(Ri, f, P, spec_i):
    members = frozenset(x for x in Ri.elements if f(x) in P.ideal.expansion)
    for p in spec_i:
        if p.ideal.expansion == members:
            return p
    raise CertificateError(f"pullback of {P} is not a prime of {Ri}")


def run_preservation_suite(kind, system, n=2, count=100, seed=0, sample_levels=None):
    """Check the colimit conclusion on concrete instances pulled back to finite levels."""
    if kind == "n-adic":
        if hasattr(system, "levels"):
            return _tower_monic_suite(system, n, count, seed, sample_levels or [0])
        return _finite_monic_suite(system, n, count, seed)
    if kind == "iip":
        return _iip_suite(system)
    raise ValueError(f"unknown suite kind {kind!r}")
