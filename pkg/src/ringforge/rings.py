"""Finite commutative rings with table-driven arithmetic.

Every ring keeps its elements as a tuple of *normal forms* (ints for Z/m,
coefficient tuples for Galois fields, component tuples for products, base
representatives for quotients).  Addition and multiplication tables over
element indices are built eagerly, so instances are immutable and safe to
share.
"""

import ast
import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BudgetExceeded, MixedRingError
from .fields import GF

#: largest ring that will be tabulated
MAX_RING_SIZE = 4096


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class ZMod:
    modulus: int


@dataclass(frozen=True)
class GaloisField:
    p: int
    k: int
    modulus_poly: tuple = None  # low degree first; None picks the least irreducible


@dataclass(frozen=True)
class Quotient:
    base: object
    ideal_gens: tuple


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class LocalizedFinite:
    base: object
    mult_set_gens: tuple
    allow_zero: bool = False


# ---------------------------------------------------------------------------
# rings


class FiniteRing:
    """Base class: a finite commutative ring with 1 given by operation tables."""

    kind = "finite"

    def __init__(self, name, elements, add_table, mul_table, zero, one):
        if len(elements) > MAX_RING_SIZE:
            raise BudgetExceeded("ring size", MAX_RING_SIZE)
        self.name = name
        self.elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        self.add_table = np.asarray(add_table, dtype=np.int32)
        self.mul_table = np.asarray(mul_table, dtype=np.int32)
        self.add_table.flags.writeable = False
        self.mul_table.flags.writeable = False
        self.zero = zero
        self.one = one
        z = self._index[zero]
        self.neg_table = np.argmax(self.add_table == z, axis=1).astype(np.int32)

    @classmethod
    def from_operations(cls, name, elements, add, mul, zero, one, **kw):
        elements = tuple(elements)
        if len(elements) > MAX_RING_SIZE:
            raise BudgetExceeded("ring size", MAX_RING_SIZE)
        index = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        at = np.empty((n, n), dtype=np.int32)
        mt = np.empty((n, n), dtype=np.int32)
        for i, a in enumerate(elements):
            for j in range(i, n):
                b = elements[j]
                at[i, j] = at[j, i] = index[add(a, b)]
                mt[i, j] = mt[j, i] = index[mul(a, b)]
        ring = cls.__new__(cls)
        FiniteRing.__init__(ring, name, elements, at, mt, zero, one)
        for key, value in kw.items():
            setattr(ring, key, value)
        return ring

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} |R|={self.size}>"

    def __str__(self):
        return self.name

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, a):
        try:
            return a in self._index
        except TypeError:
            return False

    def __call__(self, value):
        """Wrap ``value`` (a normal form, an int, or expression text) as a RingElement."""
        if isinstance(value, RingElement):
            if value.ring is not self:
                raise MixedRingError(f"{value} is not an element of {self}")
            return value
        if isinstance(value, str):
            return RingElement(self, self.parse(value))
        if isinstance(value, int) and value not in self:
            return RingElement(self, self.from_int(value))
        return RingElement(self, self.normal(value))

    # basic data -------------------------------------------------------------

    @property
    def size(self):
        return len(self.elements)

    @property
    def is_zero_ring(self):
        return self.size == 1

    def index(self, a):
        try:
            return self._index[a]
        except (KeyError, TypeError):
            raise MixedRingError(f"{a!r} is not a normal form of {self}") from None

    def normal(self, a):
        self.index(a)
        return a

    @cached_property
    def characteristic(self):
        one, acc, n = self.index(self.one), self.index(self.zero), 0
        while True:
            acc = self.add_table[acc, one]
            n += 1
            if acc == self.index(self.zero):
                return n

    @cached_property
    def unit_indices(self):
        one = self.index(self.one)
        return frozenset(int(i) for i in np.nonzero((self.mul_table == one).any(axis=1))[0])

    @cached_property
    def idempotents(self):
        diag = self.mul_table[np.arange(self.size), np.arange(self.size)]
        return tuple(self.elements[i] for i in np.nonzero(diag == np.arange(self.size))[0])

    # arithmetic on normal forms ---------------------------------------------

    def add(self, a, b):
        return self.elements[self.add_table[self.index(a), self.index(b)]]

    def mul(self, a, b):
        return self.elements[self.mul_table[self.index(a), self.index(b)]]

    def neg(self, a):
        return self.elements[self.neg_table[self.index(a)]]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a, e):
        if e < 0:
            raise ValueError("negative exponent")
        result, a = self.index(self.one), self.index(a)
        while e:
            if e & 1:
                result = self.mul_table[result, a]
            a = self.mul_table[a, a]
            e >>= 1
        return self.elements[result]

    def from_int(self, n):
        one = self.index(self.one)
        acc = self.index(self.zero)
        base = one if n >= 0 else self.neg_table[one]
        n = abs(n) % self.characteristic
        for _ in range(n):
            acc = self.add_table[acc, base]
        return self.elements[acc]

    def is_unit(self, a):
        return self.index(a) in self.unit_indices

    def inverse(self, a):
        one = self.index(self.one)
        hits = np.nonzero(self.mul_table[self.index(a)] == one)[0]
        if not len(hits):
            raise ZeroDivisionError(f"{self.format(a)} is not a unit in {self}")
        return self.elements[hits[0]]

    def sum(self, items):
        acc = self.zero
        for x in items:
            acc = self.add(acc, x)
        return acc

    def prod(self, items):
        acc = self.one
        for x in items:
            acc = self.mul(acc, x)
        return acc

    # text -------------------------------------------------------------------

    gens = {}

    def format(self, a):
        return str(a)

    def parse(self, text):
        return eval_expr(self, text).value

    def component_rings(self):
        return None

    def descriptor_text(self):
        return self.name


class ZModRing(FiniteRing):
    def __init__(self, modulus):
        if modulus < 1:
            raise ValueError("modulus must be positive")
        m = modulus
        r = np.arange(m)
        super().__init__(f"Z/{m}", tuple(range(m)), (r[:, None] + r[None, :]) % m,
                         (r[:, None] * r[None, :]) % m, 0, 1 % m)
        self.modulus = m
        self.descriptor = ZMod(m)

    def normal(self, a):
        if isinstance(a, (int, np.integer)) and not isinstance(a, bool):
            return int(a) % self.modulus
        raise MixedRingError(f"{a!r} is not an element of {self}")

    def from_int(self, n):
        return n % self.modulus


class GaloisFieldRing(FiniteRing):
    """F_{p^k} with elements as coefficient tuples of length k."""

    def __init__(self, p, k, modulus_poly=None):
        field = GF(p, k, modulus_poly)
        self.field = field
        q = field.q
        if q > MAX_RING_SIZE:
            raise BudgetExceeded("ring size", MAX_RING_SIZE)
        elements = tuple(tuple(field.to_coeffs(a)) for a in range(q))
        r = range(q)
        at = np.array([[field.add(a, b) for b in r] for a in r], dtype=np.int32)
        mt = np.array([[field.mul(a, b) for b in r] for a in r], dtype=np.int32)
        super().__init__(f"GF({q})", elements, at, mt, elements[0], elements[1])
        self.p, self.k = p, k
        self.descriptor = GaloisField(p, k, field.modulus)
        self.gens = {"w": elements[field.gen]} if k > 1 else {}

    def normal(self, a):
        if isinstance(a, tuple) and len(a) == self.k:
            return tuple(int(c) % self.p for c in a)
        if isinstance(a, (int, np.integer)):
            return self.from_int(int(a))
        raise MixedRingError(f"{a!r} is not an element of {self}")

    def from_int(self, n):
        return (n % self.p,) + (0,) * (self.k - 1)

    def encode(self, a):
        return self.index(a)

    def format(self, a):
        return self.field.format(self.index(a))

    def descriptor_text(self):
        return f"gf {self.p} {self.k}"


class ProductRing(FiniteRing):
    def __init__(self, factors, name=None):
        factors = tuple(factors)
        if not factors:
            raise ValueError("a product needs at least one factor")
        size = 1
        for f in factors:
            size *= f.size
        if size > MAX_RING_SIZE:
            raise BudgetExceeded("ring size", MAX_RING_SIZE)
        shape = tuple(f.size for f in factors)
        idx = np.indices(shape).reshape(len(factors), -1)
        at = np.zeros((size, size), dtype=np.int64)
        mt = np.zeros((size, size), dtype=np.int64)
        stride = 1
        for pos in range(len(factors) - 1, -1, -1):
            f = factors[pos]
            col = idx[pos]
            at += f.add_table[col[:, None], col[None, :]].astype(np.int64) * stride
            mt += f.mul_table[col[:, None], col[None, :]].astype(np.int64) * stride
            stride *= f.size
        elements = tuple(tuple(factors[pos].elements[idx[pos, i]] for pos in range(len(factors)))
                         for i in range(size))
        super().__init__(name or " x ".join(str(f) for f in factors), elements, at, mt,
                         tuple(f.zero for f in factors), tuple(f.one for f in factors))
        self.factors = factors
        self.descriptor = Product(tuple(getattr(f, "descriptor", None) for f in factors))

    def normal(self, a):
        if isinstance(a, tuple) and len(a) == len(self.factors):
            return tuple(f.normal(x) for f, x in zip(self.factors, a))
        if isinstance(a, (int, np.integer)):
            return self.from_int(int(a))
        raise MixedRingError(f"{a!r} is not an element of {self}")

    def from_int(self, n):
        return tuple(f.from_int(n) for f in self.factors)

    def format(self, a):
        return "(" + ", ".join(f.format(x) for f, x in zip(self.factors, a)) + ")"

    def component_rings(self):
        return self.factors


class QuotientRing(FiniteRing):
    """R/I with each coset represented by its first element in R's order.

    ``ideal`` is the expanded ideal as a frozenset of base normal forms.
    """

    def __init__(self, base, ideal, name=None, descriptor=None):
        ideal = frozenset(ideal)
        n = base.size
        rep_of = np.full(n, -1, dtype=np.int64)
        ideal_idx = np.array(sorted(base.index(i) for i in ideal), dtype=np.int64)
        reps = []
        for x in range(n):
            if rep_of[x] >= 0:
                continue
            coset = base.add_table[x, ideal_idx]
            rep_of[coset] = len(reps)
            reps.append(x)
        reps = np.array(reps, dtype=np.int64)
        at = rep_of[base.add_table[reps[:, None], reps[None, :]]]
        mt = rep_of[base.mul_table[reps[:, None], reps[None, :]]]
        elements = tuple(base.elements[i] for i in reps)
        self.base = base
        self.ideal = ideal
        self._rep_of = rep_of
        super().__init__(name or f"{base.name}/I", elements, at, mt,
                         elements[rep_of[base.index(base.zero)]],
                         elements[rep_of[base.index(base.one)]])
        self.descriptor = descriptor

    def project(self, a):
        """Image of a base element under the canonical surjection."""
        return self.elements[self._rep_of[self.base.index(a)]]

    def normal(self, a):
        if a in self._index:
            return a
        return self.project(self.base.normal(a))

    def from_int(self, n):
        return self.project(self.base.from_int(n))

    def format(self, a):
        return self.base.format(a)

    def parse(self, text):
        return self.project(self.base.parse(text))


# ---------------------------------------------------------------------------
# elements


class RingElement:
    """An element of a finite ring, compared by normal form."""

    __slots__ = ("ring", "value")

    def __init__(self, ring, value):
        self.ring = ring
        self.value = value

    def _other(self, other):
        if isinstance(other, RingElement):
            if other.ring is not self.ring:
                raise MixedRingError(f"cannot combine elements of {self.ring} and {other.ring}")
            return other.value
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else RingElement(self.ring, self.ring.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else RingElement(self.ring, self.ring.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else RingElement(self.ring, self.ring.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else RingElement(self.ring, self.ring.mul(self.value, o))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.value))

    def __pow__(self, e):
        return RingElement(self.ring, self.ring.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.ring is other.ring and self.value == other.value
        if isinstance(other, int):
            return self.value == self.ring.from_int(other)
        return self.value == other

    def __hash__(self):
        return hash((id(self.ring), self.value))

    def __repr__(self):
        return f"RingElement({self.ring.name}, {self.ring.format(self.value)})"

    def __str__(self):
        return self.ring.format(self.value)


# ---------------------------------------------------------------------------
# expression evaluation


def _prepare(text):
    return text.replace("^", "**").replace("−", "-").replace("×", "*")


def eval_expr(ring, expression):
    """Evaluate ``expression`` (text or an already-parsed element) in ``ring``.

    Supports ``+``, ``-``, ``*``, ``^``/``**`` with non-negative integer
    exponents, integer constants, the ring's generator names (``w`` for a
    Galois field) and tuple literals for products.
    """
    if isinstance(expression, RingElement):
        if expression.ring is not ring:
            raise MixedRingError(f"{expression} does not belong to {ring}")
        return expression
    if isinstance(ring, QuotientRing):
        base_value = eval_expr(ring.base, expression).value
        return RingElement(ring, ring.project(base_value))
    try:
        tree = ast.parse(_prepare(str(expression)).strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {expression!r}: {exc.msg}") from None
    return RingElement(ring, _eval_node(ring, tree.body))


def _eval_node(ring, node):
    if isinstance(ring, QuotientRing):
        return ring.project(_eval_node(ring.base, node))
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return ring.from_int(node.value)
    if isinstance(node, ast.Name):
        if node.id not in ring.gens:
            raise ValueError(f"unknown symbol {node.id!r} in {ring}")
        return ring.gens[node.id]
    if isinstance(node, ast.Tuple):
        factors = ring.component_rings()
        if factors is None or len(factors) != len(node.elts):
            raise MixedRingError(f"tuple literal of length {len(node.elts)} does not fit {ring}")
        return tuple(_eval_node(f, e) for f, e in zip(factors, node.elts))
    if isinstance(node, ast.UnaryOp):
        val = _eval_node(ring, node.operand)
        if isinstance(node.op, ast.USub):
            return ring.neg(val)
        if isinstance(node.op, ast.UAdd):
            return val
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                raise ValueError("exponents must be integer literals")
            return ring.pow(_eval_node(ring, node.left), node.right.value)
        left = _eval_node(ring, node.left)
        right = _eval_node(ring, node.right)
        if isinstance(node.op, ast.Add):
            return ring.add(left, right)
        if isinstance(node.op, ast.Sub):
            return ring.sub(left, right)
        if isinstance(node.op, ast.Mult):
            return ring.mul(left, right)
    raise ValueError(f"unsupported expression: {ast.dump(node)}")


# ---------------------------------------------------------------------------
# isomorphism search


def ring_generators(ring):
    """A small set of elements generating ``ring`` as a ring (greedy)."""
    from .ideals import subring_closure

    gens = []
    current = subring_closure(ring, [])
    for a in ring.elements:
        if a not in current:
            gens.append(a)
            current = subring_closure(ring, gens)
            if len(current) == ring.size:
                break
    return gens


def _extend_map(source, target, assignment):
    """Extend generator images to a full map by closure; None if ill-defined."""
    m = np.full(source.size, -1, dtype=np.int64)
    m[source.index(source.zero)] = target.index(target.zero)
    m[source.index(source.one)] = target.index(target.one)
    for a, b in assignment.items():
        ia, ib = source.index(a), target.index(b)
        if m[ia] >= 0 and m[ia] != ib:
            return None
        m[ia] = ib
    frontier = [int(i) for i in np.nonzero(m >= 0)[0]]
    known = list(frontier)
    while frontier:
        new = []
        for i in frontier:
            for j in known:
                for stab, ttab in ((source.add_table, target.add_table), (source.mul_table, target.mul_table)):
                    k = stab[i, j]
                    img = ttab[m[i], m[j]]
                    if m[k] < 0:
                        m[k] = img
                        new.append(int(k))
                    elif m[k] != img:
                        return None
        known.extend(new)
        frontier = new
    if (m < 0).any():
        return None
    return m


def find_isomorphism(source, target):
    """Exhaustive search for a ring isomorphism; returns a dict or None."""
    if source.size != target.size or source.characteristic != target.characteristic:
        return None
    gens = ring_generators(source)
    for images in itertools.product(target.elements, repeat=len(gens)):
        m = _extend_map(source, target, dict(zip(gens, images)))
        if m is None or len(set(m.tolist())) != source.size:
            continue
        # closure only checked pairs reachable from generators; verify all
        if (m[source.add_table] == target.add_table[m[:, None], m[None, :]]).all() and \
                (m[source.mul_table] == target.mul_table[m[:, None], m[None, :]]).all():
            return {source.elements[i]: target.elements[m[i]] for i in range(source.size)}
    return None
