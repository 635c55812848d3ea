"""Multivariate polynomials over F_p and a Buchberger engine.

Polynomials are immutable maps from exponent tuples to nonzero residues.
Gröbner bases can be computed with *tracking*, in which case every basis
element carries its cofactors with respect to the input generators; this
is what turns membership answers into re-checkable certificates.
"""

import ast
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import BudgetExceeded
from .fields import is_prime
from .rings import MAX_RING_SIZE, FiniteRing

PAIR_BUDGET = 100_000
STAIRCASE_CAP = 4096
MAX_PRIME = 97


# ---------------------------------------------------------------------------
# monomial orders


def grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def lex_key(e):
    return e


ORDERS = {"grevlex": grevlex_key, "lex": lex_key}


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# rings and polynomials


class PolyRing:
    """F_p[x_1, ..., x_n] with a fixed monomial order."""

    def __init__(self, p, variables, order="grevlex"):
        if not is_prime(p) or p > MAX_PRIME:
            raise ValueError(f"coefficient field must be F_p with p prime <= {MAX_PRIME}, got {p}")
        if order not in ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        self.p = p
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        self.order = order
        self.key = ORDERS[order]
        self.nvars = len(self.variables)

    def __repr__(self):
        return f"F_{self.p}[{', '.join(self.variables)}]"

    def __eq__(self, other):
        return isinstance(other, PolyRing) and (self.p, self.variables, self.order) == \
            (other.p, other.variables, other.order)

    def __hash__(self):
        return hash((self.p, self.variables, self.order))

    def with_order(self, order):
        return PolyRing(self.p, self.variables, order)

    def same_polys(self, other):
        return self.p == other.p and self.variables == other.variables

    def __call__(self, value):
        if isinstance(value, MPoly):
            if value.ring == self:
                return value
            return value.change_ring(self)
        if isinstance(value, int):
            return self.constant(value)
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(f"cannot make a polynomial from {value!r}")

    @property
    def zero(self):
        return MPoly(self, {})

    @property
    def one(self):
        return self.constant(1)

    def constant(self, c):
        c %= self.p
        return MPoly(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exps, c=1):
        c %= self.p
        return MPoly(self, {tuple(exps): c} if c else {})

    def gen(self, name):
        i = self.variables.index(name)
        return self.monomial(tuple(1 if j == i else 0 for j in range(self.nvars)))

    @property
    def gens(self):
        return tuple(self.gen(v) for v in self.variables)

    def parse(self, text):
        text = str(text).replace("^", "**").replace("−", "-").strip()
        try:
            tree = ast.parse(text, mode="eval")
        except SyntaxError as exc:
            raise ValueError(f"cannot parse polynomial {text!r}: {exc.msg}") from None
        return self._eval(tree.body)

    def _eval(self, node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return self.constant(node.value)
        if isinstance(node, ast.Name):
            if node.id not in self.variables:
                raise ValueError(f"unknown variable {node.id!r} in {self}")
            return self.gen(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self._eval(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ValueError("exponents must be integer literals")
                return self._eval(node.left) ** node.right.value
            a, b = self._eval(node.left), self._eval(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
        raise ValueError(f"unsupported polynomial syntax: {ast.dump(node)}")

    def extend(self, name, first=False, order=None):
        """A ring with one more variable (placed first or last)."""
        if name in self.variables:
            raise ValueError(f"variable {name} already present")
        vars_ = (name,) + self.variables if first else self.variables + (name,)
        return PolyRing(self.p, vars_, order or self.order)

    def embed_into(self, big, f):
        """Map f into ``big`` whose variables contain ours."""
        pos = [big.variables.index(v) for v in self.variables]
        terms = {}
        for e, c in f.terms.items():
            ne = [0] * big.nvars
            for i, k in zip(pos, e):
                ne[i] = k
            terms[tuple(ne)] = c
        return MPoly(big, terms)

    def restrict_from(self, big, f):
        """Map f from ``big`` to this ring; f must not involve the extra variables."""
        pos = [big.variables.index(v) for v in self.variables]
        extra = [i for i in range(big.nvars) if i not in pos]
        terms = {}
        for e, c in f.terms.items():
            if any(e[i] for i in extra):
                raise ValueError(f"{f} involves eliminated variables")
            terms[tuple(e[i] for i in pos)] = c
        return MPoly(self, terms)


class MPoly:
    __slots__ = ("ring", "terms", "_lm")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._lm = None

    @classmethod
    def _clean(cls, ring, terms):
        p = ring.p
        return cls(ring, {e: c % p for e, c in terms.items() if c % p})

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if not self.ring.same_polys(other.ring):
                raise ValueError(f"polynomials from {self.ring} and {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return MPoly(self.ring, {e: (-c) % p for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add(e1, e2)
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return MPoly(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c):
        c %= self.ring.p
        if not c:
            return self.ring.zero
        return MPoly(self.ring, {e: v * c % self.ring.p for e, v in self.terms.items()})

    def mul_term(self, exps, c):
        p = self.ring.p
        return MPoly(self.ring, {_add(e, exps): v * c % p for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.ring.same_polys(other.ring) and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring.p, self.ring.variables, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def lm(self):
        if self._lm is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading monomial")
            self._lm = max(self.terms, key=self.ring.key)
        return self._lm

    def lc(self):
        return self.terms[self.lm()]

    def monic(self):
        if not self.terms:
            return self
        return self.scale(pow(self.lc(), -1, self.ring.p))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.ring.key(t[0]), reverse=True)

    @property
    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def change_ring(self, ring):
        if not ring.same_polys(self.ring):
            raise ValueError(f"cannot move {self} to {ring}")
        return MPoly(ring, dict(self.terms))

    def evaluate(self, point, field=None):
        """Value at a point; coordinates are F_p residues or elements of ``field`` (a GF)."""
        if field is None:
            p = self.ring.p
            acc = 0
            for e, c in self.terms.items():
                v = c
                for x, k in zip(point, e):
                    v = v * pow(x, k, p) % p
                acc = (acc + v) % p
            return acc
        acc = 0
        for e, c in self.terms.items():
            v = field.from_int(c)
            for x, k in zip(point, e):
                v = field.mul(v, field.pow(x, k))
            acc = field.add(acc, v)
        return acc

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.ring.variables, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"MPoly({self})"


def as_polys(ring, items):
    return [ring(f) for f in items]


# ---------------------------------------------------------------------------
# division


@dataclass
class DivisionTranscript:
    """poly = sum(cofactors[i] * divisors[i]) + remainder."""

    poly: MPoly
    divisors: tuple
    cofactors: tuple
    remainder: MPoly

    def reexpand(self):
        acc = self.remainder
        for q, g in zip(self.cofactors, self.divisors):
            acc = acc + q * g
        return acc

    def verify(self):
        return self.reexpand() == self.poly


def divide(f, divisors):
    """Multivariate division of f by an ordered divisor list."""
    ring = f.ring
    divisors = [ring(g) for g in divisors]
    lms = [g.lm() if g else None for g in divisors]
    inv = [pow(g.lc(), -1, ring.p) if g else None for g in divisors]
    quot = [dict() for _ in divisors]
    rem = {}
    work = dict(f.terms)
    p = ring.p
    key = ring.key
    while work:
        lm = max(work, key=key)
        c = work[lm]
        for i, g in enumerate(divisors):
            if lms[i] is not None and _divides(lms[i], lm):
                shift = _sub(lm, lms[i])
                factor = c * inv[i] % p
                quot[i][shift] = (quot[i].get(shift, 0) + factor) % p
                for e, v in g.terms.items():
                    ee = _add(e, shift)
                    nv = (work.get(ee, 0) - factor * v) % p
                    if nv:
                        work[ee] = nv
                    else:
                        work.pop(ee, None)
                break
        else:
            rem[lm] = c
            del work[lm]
    cof = tuple(MPoly._clean(ring, q) for q in quot)
    return DivisionTranscript(f, tuple(divisors), cof, MPoly(ring, rem))


# ---------------------------------------------------------------------------
# Buchberger


@dataclass
class GBasis:
    ring: PolyRing
    generators: tuple
    order: str
    reduced: bool = True
    inputs: tuple = ()
    representation: Optional[tuple] = None   # per basis element, cofactors w.r.t. inputs
    pair_reductions: int = 0

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    @property
    def is_unit(self):
        return len(self.generators) == 1 and self.generators[0].is_constant and bool(self.generators[0])

    def leading_monomials(self):
        return [g.lm() for g in self.generators]

    def nf(self, f):
        return divide(self.ring(f), self.generators)

    def reduce(self, f):
        return self.nf(f).remainder

    def contains(self, f):
        return not self.reduce(f)

    def express(self, f):
        """Cofactors of f w.r.t. the inputs (tracked bases only); None if f is not a member."""
        if self.representation is None:
            raise ValueError("basis was computed without tracking")
        t = self.nf(f)
        if t.remainder:
            return None
        ring = self.ring
        out = [ring.zero for _ in self.inputs]
        for q, rep in zip(t.cofactors, self.representation):
            if q:
                for k, r in enumerate(rep):
                    if r:
                        out[k] = out[k] + q * r
        return tuple(out)

    def check_buchberger(self):
        """True iff every S-polynomial of basis pairs reduces to zero."""
        gs = self.generators
        for i, j in itertools.combinations(range(len(gs)), 2):
            if divide(s_polynomial(gs[i], gs[j]), gs).remainder:
                return False
        return True

    def __str__(self):
        return "{" + ", ".join(str(g) for g in self.generators) + "}"


def s_polynomial(f, g):
    l = _lcm(f.lm(), g.lm())
    p = f.ring.p
    a = f.mul_term(_sub(l, f.lm()), pow(f.lc(), -1, p))
    b = g.mul_term(_sub(l, g.lm()), pow(g.lc(), -1, p))
    return a - b


def _combine(reps, coeffs, ring, size):
    out = [ring.zero] * size
    for q, rep in zip(coeffs, reps):
        if q:
            for k, r in enumerate(rep):
                if r:
                    out[k] = out[k] + q * r
    return out


def gb_compute(generators, order=None, ring=None, track=False, budget=PAIR_BUDGET):
    """Reduced Gröbner basis (normal pair selection, ties broken by index)."""
    gens = list(generators)
    if ring is None:
        if not gens:
            raise ValueError("need a ring for an empty generator list")
        ring = gens[0].ring
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
    inputs = tuple(ring(g) for g in gens)
    m = len(inputs)
    zero = ring.zero
    basis, reps = [], []
    for k, g in enumerate(inputs):
        if g:
            inv = pow(g.lc(), -1, ring.p)
            basis.append(g.scale(inv))
            if track:
                rep = [zero] * m
                rep[k] = ring.constant(inv)
                reps.append(rep)
    key = ring.key
    pairs = set(itertools.combinations(range(len(basis)), 2))
    reductions = 0
    while pairs:
        i, j = min(pairs, key=lambda ij: (key(_lcm(basis[ij[0]].lm(), basis[ij[1]].lm())), ij))
        pairs.discard((i, j))
        fi, fj = basis[i], basis[j]
        lcm = _lcm(fi.lm(), fj.lm())
        if all(a == 0 or b == 0 for a, b in zip(fi.lm(), fj.lm())):
            continue  # coprime leading monomials
        if any(k not in (i, j) and _divides(basis[k].lm(), lcm)
               and (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs
               for k in range(len(basis))):
            continue  # chain criterion
        reductions += 1
        if reductions > budget:
            raise BudgetExceeded("Buchberger pair reductions", budget)
        s = s_polynomial(fi, fj)
        t = divide(s, basis)
        r = t.remainder
        if not r:
            continue
        inv = pow(r.lc(), -1, ring.p)
        if track:
            mi = ring.monomial(_sub(lcm, fi.lm()))
            mj = ring.monomial(_sub(lcm, fj.lm()))
            srep = [a * mi - b * mj for a, b in zip(reps[i], reps[j])]
            sub = _combine(reps, t.cofactors, ring, m)
            rrep = [(a - b).scale(inv) for a, b in zip(srep, sub)]
            reps.append(rrep)
        basis.append(r.scale(inv))
        new = len(basis) - 1
        pairs.update((k, new) for k in range(new))
    keep = _minimal_indices(basis)
    basis = [basis[k] for k in keep]
    if track:
        reps = [reps[k] for k in keep]
    # interreduce tails
    for k in range(len(basis)):
        others = basis[:k] + basis[k + 1:]
        t = divide(basis[k], others)
        if t.remainder != basis[k]:
            if track:
                other_reps = reps[:k] + reps[k + 1:]
                sub = _combine(other_reps, t.cofactors, ring, m)
                reps[k] = [a - b for a, b in zip(reps[k], sub)]
            basis[k] = t.remainder
    order_idx = sorted(range(len(basis)), key=lambda k: key(basis[k].lm()))
    basis = [basis[k] for k in order_idx]
    if track:
        reps = [tuple(reps[k]) for k in order_idx]
    return GBasis(ring, tuple(basis), ring.order, True, inputs, tuple(reps) if track else None, reductions)


def _minimal_indices(basis):
    keep = []
    for k, g in enumerate(basis):
        redundant = False
        for o, h in enumerate(basis):
            if o == k:
                continue
            if _divides(h.lm(), g.lm()) and (h.lm() != g.lm() or o < k):
                redundant = True
                break
        if not redundant:
            keep.append(k)
    return keep


# ---------------------------------------------------------------------------
# ideals


class PolyIdeal:
    """An ideal of a polynomial ring given by generators, with a cached basis."""

    def __init__(self, ring, generators):
        self.ring = ring
        self.generators = tuple(ring(g) for g in generators)

    @classmethod
    def of(cls, ring, value):
        if isinstance(value, PolyIdeal):
            return value
        return cls(ring, value)

    @cached_property
    def basis(self):
        return gb_compute(self.generators, ring=self.ring)

    @cached_property
    def tracked_basis(self):
        return gb_compute(self.generators, ring=self.ring, track=True)

    def __contains__(self, f):
        return self.basis.contains(f)

    def nf(self, f):
        return self.basis.reduce(f)

    @property
    def is_unit_ideal(self):
        return self.basis.is_unit

    def __le__(self, other):
        return poly_ideal_contains(other, self)

    def __eq__(self, other):
        return isinstance(other, PolyIdeal) and self.ring.same_polys(other.ring) and \
            self.basis.generators == other.basis.generators

    def __hash__(self):
        return hash(self.basis.generators)

    def __add__(self, other):
        return PolyIdeal(self.ring, self.generators + other.generators)

    def __str__(self):
        return "(" + (", ".join(str(g) for g in self.generators) or "0") + ")"

    __repr__ = __str__


def _ideal(ring, I):
    if isinstance(I, PolyIdeal):
        return I
    I = list(I)
    if ring is None:
        ring = I[0].ring
    return PolyIdeal(ring, I)


@dataclass
class MembershipResult:
    member: bool
    transcript: Optional[DivisionTranscript] = None
    remainder: Optional[MPoly] = None

    def __bool__(self):
        return self.member


def ideal_membership(f, gens, ring=None):
    """Decide f ∈ (gens); on success the transcript is against the original generators."""
    I = _ideal(ring or getattr(f, "ring", None), gens)
    f = I.ring(f)
    if not f:
        return MembershipResult(True, DivisionTranscript(f, I.generators, tuple(I.ring.zero for _ in I.generators),
                                                         I.ring.zero))
    r = I.basis.reduce(f)
    if r:
        return MembershipResult(False, None, r)
    cof = I.tracked_basis.express(f)
    t = DivisionTranscript(f, I.generators, tuple(cof), I.ring.zero)
    assert t.verify()
    return MembershipResult(True, t, r)


def split_membership(f, ideals, ring=None):
    """Write f = sum(parts) with parts[i] in ideals[i]; None if f is not in the sum.

    Returns a list of (part, cofactors) per ideal.
    """
    ideals = [_ideal(ring, I) for I in ideals]
    ring = ideals[0].ring
    f = ring(f)
    tags, gens = [], []
    for k, I in enumerate(ideals):
        for g in I.generators:
            tags.append(k)
            gens.append(g)
    if not f:
        return [(ring.zero, tuple(ring.zero for _ in I.generators)) for I in ideals]
    G = gb_compute(gens, ring=ring, track=True)
    cof = G.express(f)
    if cof is None:
        return None
    out = []
    pos = 0
    for k, I in enumerate(ideals):
        c = cof[pos:pos + len(I.generators)]
        pos += len(I.generators)
        part = ring.zero
        for q, g in zip(c, I.generators):
            part = part + q * g
        out.append((part, tuple(c)))
    total = ring.zero
    for part, _ in out:
        total = total + part
    assert total == f
    return out


@dataclass
class ComaximalityCertificate:
    """u ∈ I, v ∈ J with u + v = 1, each with cofactors over the generators."""

    I: tuple
    J: tuple
    u: MPoly
    v: MPoly
    u_cofactors: tuple
    v_cofactors: tuple

    def verify(self):
        ring = self.u.ring
        u = ring.zero
        for q, g in zip(self.u_cofactors, self.I):
            u = u + q * g
        v = ring.zero
        for q, g in zip(self.v_cofactors, self.J):
            v = v + q * g
        return u == self.u and v == self.v and (self.u + self.v) == ring.one


def comaximality_certificate(I, J, ring=None):
    """Certificate of I + J = (1), or None when the sum is proper."""
    I, J = _ideal(ring, I), _ideal(ring, J)
    parts = split_membership(I.ring.one, [I, J])
    if parts is None:
        return None
    (u, uc), (v, vc) = parts
    cert = ComaximalityCertificate(I.generators, J.generators, u, v, uc, vc)
    assert cert.verify()
    return cert


def poly_ideal_contains(I, J, ring=None):
    """True iff J ⊆ I (every generator of J reduces to 0 modulo I)."""
    I, J = _ideal(ring, I), _ideal(ring, J)
    return all(I.basis.contains(g) for g in J.generators)


def poly_ideal_combine(I, J, mode, ring=None):
    """Generators of I + J or I ∩ J."""
    I, J = _ideal(ring, I), _ideal(ring, J)
    R = I.ring
    if mode == "sum":
        return list(I.generators + J.generators)
    if mode != "intersection":
        raise ValueError(f"unknown mode {mode!r}")
    t = _fresh(R, "t")
    big = R.extend(t, first=True, order="lex")
    tt = big.gen(t)
    gens = [tt * R.embed_into(big, f) for f in I.generators] + \
           [(1 - tt) * R.embed_into(big, g) for g in J.generators]
    G = gb_compute(gens, ring=big)
    kept = [R.restrict_from(big, g) for g in G.generators if not any(e[0] for e in g.terms)]
    if not kept:
        return []
    return list(gb_compute(kept, ring=R).generators)


def intersect_all(ideals, ring=None):
    ideals = [_ideal(ring, I) for I in ideals]
    acc = ideals[0]
    for I in ideals[1:]:
        acc = PolyIdeal(acc.ring, poly_ideal_combine(acc, I, "intersection"))
    return acc


def _fresh(ring, stem):
    name = stem
    k = 0
    while name in ring.variables:
        k += 1
        name = f"{stem}{k}"
    return name


def radical_membership(f, gens, ring=None):
    """f ∈ √(gens) by the Rabinowitsch trick."""
    I = _ideal(ring or getattr(f, "ring", None), gens)
    R = I.ring
    f = R(f)
    z = _fresh(R, "z")
    big = R.extend(z)
    zz = big.gen(z)
    G = gb_compute([R.embed_into(big, g) for g in I.generators] + [1 - zz * R.embed_into(big, f)], ring=big)
    return G.is_unit


# ---------------------------------------------------------------------------
# zero-dimensional ideals


@dataclass
class ZeroDimResult:
    zero_dimensional: bool
    basis: GBasis
    staircase: Optional[tuple] = None   # exponent tuples, ascending in the order

    def __bool__(self):
        return self.zero_dimensional


def zero_dim_check(gens, ring=None, cap=STAIRCASE_CAP):
    I = _ideal(ring, gens)
    G = I.basis
    R = I.ring
    lms = G.leading_monomials()
    if G.is_unit:
        return ZeroDimResult(True, G, ())
    for i in range(R.nvars):
        if not any(e[i] > 0 and all(e[j] == 0 for j in range(R.nvars) if j != i) for e in lms):
            return ZeroDimResult(False, G)
    stair = set()
    frontier = [(0,) * R.nvars]
    while frontier:
        e = frontier.pop()
        if e in stair or any(_divides(m, e) for m in lms):
            continue
        stair.add(e)
        if len(stair) > cap:
            raise BudgetExceeded("staircase size", cap)
        for i in range(R.nvars):
            frontier.append(tuple(x + (1 if j == i else 0) for j, x in enumerate(e)))
    return ZeroDimResult(True, G, tuple(sorted(stair, key=R.key)))


class BridgeRing(FiniteRing):
    """F_p[x]/I for zero-dimensional I; elements are coefficient tuples on the staircase."""

    def __init__(self, ideal, zd, name=None):
        R = ideal.ring
        self.poly_ring = R
        self.ideal = ideal
        self.staircase = zd.staircase
        self.gb = zd.basis
        d = len(self.staircase)
        size = R.p ** d
        if size > MAX_RING_SIZE:
            raise BudgetExceeded("bridge ring size", MAX_RING_SIZE)
        self._pos = {e: i for i, e in enumerate(self.staircase)}
        elements = tuple(itertools.product(range(R.p), repeat=d))[::1]
        # order elements by their integer encoding with the first staircase monomial least significant
        elements = tuple(sorted(elements, key=lambda c: sum(x * R.p ** i for i, x in enumerate(c))))
        index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        polys = [self.lift(e) for e in elements]
        at = np.empty((n, n), dtype=np.int32)
        mt = np.empty((n, n), dtype=np.int32)
        p = R.p
        for i, a in enumerate(elements):
            for j in range(i, n):
                b = elements[j]
                at[i, j] = at[j, i] = index[tuple((x + y) % p for x, y in zip(a, b))]
                mt[i, j] = mt[j, i] = index[self._to_tuple(self.gb.reduce(polys[i] * polys[j]))]
        zero = (0,) * d
        one = self._to_tuple(self.gb.reduce(R.one))
        super().__init__(name or f"{R}/{ideal}", elements, at, mt, zero, one)

    def _to_tuple(self, f):
        out = [0] * len(self.staircase)
        for e, c in f.terms.items():
            out[self._pos[e]] = c
        return tuple(out)

    def lift(self, a):
        """The normal-form polynomial representing element ``a``."""
        R = self.poly_ring
        return MPoly(R, {e: c for e, c in zip(self.staircase, a) if c})

    def reduce(self, f):
        return self._to_tuple(self.gb.reduce(self.poly_ring(f)))

    def normal(self, a):
        if isinstance(a, MPoly):
            return self.reduce(a)
        if isinstance(a, int):
            return self.from_int(a)
        return super().normal(a)

    def from_int(self, n):
        return self.reduce(self.poly_ring.constant(n))

    def format(self, a):
        return str(self.lift(a))

    def parse(self, text):
        return self.reduce(self.poly_ring.parse(text))


def finite_quotient_bridge(gens, ring=None, cap=STAIRCASE_CAP):
    I = _ideal(ring, gens)
    zd = zero_dim_check(I, cap=cap)
    if not zd:
        raise ValueError(f"{I} is not zero-dimensional")
    return BridgeRing(I, zd)


# ---------------------------------------------------------------------------
# linear-algebra oracle (independent of Buchberger)


def _monomials_up_to(nvars, degree):
    out = []
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _rank_mod_p(rows, p):
    """Row-reduce over F_p; returns the echelon rows."""
    rows = [list(r) for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    pivot_row = 0
    for col in range(ncols):
        pr = next((r for r in range(pivot_row, len(rows)) if rows[r][col] % p), None)
        if pr is None:
            continue
        rows[pivot_row], rows[pr] = rows[pr], rows[pivot_row]
        inv = pow(rows[pivot_row][col], -1, p)
        rows[pivot_row] = [x * inv % p for x in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] % p:
                c = rows[r][col]
                rows[r] = [(x - c * y) % p for x, y in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return rows[:pivot_row]


def linear_algebra_membership(f, gens, degree=6):
    """Is f = sum h_i g_i with deg(h_i g_i) <= degree?  Solved by Gaussian elimination."""
    ring = f.ring
    p = ring.p
    gens = [ring(g) for g in gens if ring(g)]
    mons = _monomials_up_to(ring.nvars, degree)
    col = {e: i for i, e in enumerate(mons)}
    rows = []
    for g in gens:
        dg = g.total_degree
        for e in _monomials_up_to(ring.nvars, degree - dg) if dg <= degree else []:
            prod = g.mul_term(e, 1)
            row = [0] * len(mons)
            for ee, c in prod.terms.items():
                row[col[ee]] = c
            rows.append(row)
    if f.total_degree > degree:
        raise ValueError("target degree exceeds the oracle bound")
    target = [0] * len(mons)
    for e, c in f.terms.items():
        target[col[e]] = c
    base = _rank_mod_p(rows, p)
    extended = _rank_mod_p(rows + [target], p)
    return len(base) == len(extended)
