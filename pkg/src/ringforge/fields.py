"""Finite fields F_{p^d} and polynomial arithmetic over them.

Polynomials over F_p are coefficient lists ``[a_0, a_1, ..., a_n]`` with
``a_n != 0`` (``[]`` is the zero polynomial).  Elements of F_{p^d} are
encoded as integers ``sum(c_i * p**i)``, i.e. the base-p digits are the
coefficients of the residue polynomial modulo the field modulus.  The
integer encoding fixes the element order used everywhere else: 0, 1, w,
w + 1, ... for F_4.
"""

import math
import random
from functools import lru_cache

from .errors import BudgetExceeded, ReducibleModulus

#: largest field for which exhaustive root search is used by default
EXHAUSTIVE_ROOT_LIMIT = 1 << 10
#: largest field for which log/antilog tables are precomputed
LOG_TABLE_LIMIT = 1 << 16
#: largest field the package will construct
MAX_FIELD_SIZE = 1 << 24


# ---------------------------------------------------------------------------
# polynomials over the prime field


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def fp_add(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def fp_sub(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def fp_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return trim(out)


def fp_divmod(f, g, p):
    g = trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(f)
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(r) - len(g) + 1, 0)
    while len(r) >= len(g):
        shift = len(r) - len(g)
        c = r[-1] * inv % p
        q[shift] = c
        for i, b in enumerate(g):
            r[shift + i] = (r[shift + i] - c * b) % p
        r = trim(r)
    return trim(q), r


def fp_mod(f, g, p):
    return fp_divmod(f, g, p)[1]


def fp_gcd(f, g, p):
    f, g = trim(f), trim(g)
    while g:
        f, g = g, fp_mod(f, g, p)
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def fp_powmod(base, e, mod, p):
    result = [1]
    base = fp_mod(base, mod, p)
    while e:
        if e & 1:
            result = fp_mod(fp_mul(result, base, p), mod, p)
        base = fp_mod(fp_mul(base, base, p), mod, p)
        e >>= 1
    return result


def fp_format(f, var="x"):
    if not f:
        return "0"
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms)


def prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n):
    return n >= 2 and prime_factors(n) == [n]


def monic_polys(p, d):
    """All monic polynomials of degree d over F_p, in coefficient-encoding order."""
    for code in range(p ** d):
        coeffs = []
        for _ in range(d):
            coeffs.append(code % p)
            code //= p
        yield coeffs + [1]


def find_factor_exhaustive(f, p):
    """Return a monic proper factor of f by trial division, or None."""
    f = trim(f)
    n = len(f) - 1
    for d in range(1, n // 2 + 1):
        for g in monic_polys(p, d):
            if not fp_mod(f, g, p):
                return g
    return None


def is_irreducible(f, p):
    """Rabin's irreducibility test over F_p."""
    f = trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    for r in prime_factors(n):
        h = fp_sub(fp_powmod(x, p ** (n // r), f, p), x, p)
        if len(fp_gcd(f, h, p)) > 1:
            return False
    return not fp_sub(fp_powmod(x, p ** n, f, p), x, p)


@lru_cache(maxsize=None)
def least_irreducible(p, d):
    """Lexicographically least monic irreducible of degree d (by coefficient encoding)."""
    for f in monic_polys(p, d):
        if is_irreducible(f, p):
            return tuple(f)
    raise RuntimeError(f"no irreducible of degree {d} over F_{p}")  # cannot happen


def check_modulus(modulus, p, exhaustive_limit=1 << 16):
    """Validate a field modulus; raises ReducibleModulus with a factor when possible."""
    f = trim(modulus)
    if not f or f[-1] != 1:
        raise ValueError(f"modulus {fp_format(f)} is not monic")
    n = len(f) - 1
    if p ** (n // 2) <= exhaustive_limit:
        factor = find_factor_exhaustive(f, p)
        if factor is not None:
            raise ReducibleModulus(fp_format(f), fp_format(factor))
    elif not is_irreducible(f, p):
        raise ReducibleModulus(fp_format(f), "unknown")


# ---------------------------------------------------------------------------
# the field


def _clmul(a, b):
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


class GF:
    """The field F_{p^d} = F_p[w]/(modulus), elements encoded as integers."""

    def __init__(self, p, d, modulus=None, check=True):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if d < 1:
            raise ValueError("degree must be >= 1")
        if p ** d > MAX_FIELD_SIZE:
            raise BudgetExceeded("field size", MAX_FIELD_SIZE)
        self.p = p
        self.d = d
        self.q = p ** d
        if modulus is None:
            modulus = least_irreducible(p, d)
        elif check:
            check_modulus(modulus, p)
        self.modulus = tuple(trim(modulus))
        if len(self.modulus) != d + 1:
            raise ValueError(f"modulus degree {len(self.modulus) - 1} != {d}")
        if p == 2:
            self._mod_int = sum(c << i for i, c in enumerate(self.modulus))
        self._exp = self._log = None
        if 2 < self.q <= LOG_TABLE_LIMIT:
            self._build_log_tables()

    def __repr__(self):
        return f"GF({self.p}^{self.d})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.d, self.modulus) == (other.p, other.d, other.modulus)

    def __hash__(self):
        return hash((self.p, self.d, self.modulus))

    # encoding ---------------------------------------------------------------

    def to_coeffs(self, a):
        out = []
        for _ in range(self.d):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_coeffs(self, coeffs):
        coeffs = trim([c % self.p for c in coeffs])
        if len(coeffs) > self.d:
            coeffs = fp_mod(coeffs, list(self.modulus), self.p)
        return sum(c * self.p ** i for i, c in enumerate(coeffs))

    @property
    def gen(self):
        """The class of w (a root of the modulus)."""
        return self.from_coeffs([0, 1])

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def elements(self):
        return range(self.q)

    def from_int(self, n):
        return n % self.p

    # arithmetic -------------------------------------------------------------

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if self.d == 1:
            return (a + b) % self.p
        return self.from_coeffs([x + y for x, y in zip(self.to_coeffs(a), self.to_coeffs(b))])

    def neg(self, a):
        if self.p == 2:
            return a
        if self.d == 1:
            return -a % self.p
        return self.from_coeffs([-x for x in self.to_coeffs(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def _slow_mul(self, a, b):
        if self.p == 2:
            r = _clmul(a, b)
            m, dm = self._mod_int, self.d
            while r.bit_length() > dm:
                r ^= m << (r.bit_length() - 1 - dm)
            return r
        if self.d == 1:
            return a * b % self.p
        prod = fp_mul(self.to_coeffs(a), self.to_coeffs(b), self.p)
        return self.from_coeffs(fp_mod(prod, list(self.modulus), self.p))

    def mul(self, a, b):
        if not a or not b:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        if self._log is not None:
            if a == 0:
                return 1 if e == 0 else 0
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._log is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def _build_log_tables(self):
        order = self.q - 1
        factors = prime_factors(order)
        for g in range(2, self.q):
            if all(self._slow_pow(g, order // r) != 1 for r in factors):
                break
        exp = [0] * (2 * order)
        log = [0] * self.q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        for i in range(order, 2 * order):
            exp[i] = exp[i - order]
        self._exp, self._log = exp, log
        self.primitive = g

    def _slow_pow(self, a, e):
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def format(self, a, var="w"):
        return fp_format(trim(self.to_coeffs(a)), var)

    # polynomials over this field (coefficient lists, low degree first) -----

    def poly_trim(self, f):
        return trim(f)

    def poly_add(self, f, g):
        n = max(len(f), len(g))
        return trim([self.add(f[i] if i < len(f) else 0, g[i] if i < len(g) else 0) for i in range(n)])

    def poly_sub(self, f, g):
        n = max(len(f), len(g))
        return trim([self.sub(f[i] if i < len(f) else 0, g[i] if i < len(g) else 0) for i in range(n)])

    def poly_mul(self, f, g):
        if not f or not g:
            return []
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    if b:
                        out[i + j] = self.add(out[i + j], self.mul(a, b))
        return trim(out)

    def poly_divmod(self, f, g):
        g = trim(g)
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        r = trim(f)
        inv = self.inv(g[-1])
        q = [0] * max(len(r) - len(g) + 1, 0)
        while len(r) >= len(g):
            shift = len(r) - len(g)
            c = self.mul(r[-1], inv)
            q[shift] = c
            for i, b in enumerate(g):
                r[shift + i] = self.sub(r[shift + i], self.mul(c, b))
            r = trim(r)
        return trim(q), r

    def poly_monic(self, f):
        f = trim(f)
        if not f:
            return f
        inv = self.inv(f[-1])
        return [self.mul(c, inv) for c in f]

    def poly_gcd(self, f, g):
        f, g = trim(f), trim(g)
        while g:
            f, g = g, self.poly_divmod(f, g)[1]
        return self.poly_monic(f)

    def poly_powmod(self, base, e, mod):
        result = [1]
        base = self.poly_divmod(base, mod)[1]
        while e:
            if e & 1:
                result = self.poly_divmod(self.poly_mul(result, base), mod)[1]
            base = self.poly_divmod(self.poly_mul(base, base), mod)[1]
            e >>= 1
        return result

    def poly_eval(self, f, x):
        acc = 0
        for c in reversed(f):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def poly_format(self, f, var="x"):
        if not f:
            return "0"
        terms = []
        for i in range(len(f) - 1, -1, -1):
            c = f[i]
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            cs = self.format(c)
            if " + " in cs and mono:
                cs = f"({cs})"
            if not mono:
                terms.append(cs)
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms)

    # roots ------------------------------------------------------------------

    def roots_exhaustive(self, f):
        return [a for a in range(self.q) if self.poly_eval(f, a) == 0]

    def roots_gcd(self, f, seed=0):
        """Distinct roots via gcd(f, x^q - x) and random equal-degree splitting."""
        f = self.poly_monic(f)
        if len(f) <= 1:
            return []
        xq = self.poly_powmod([0, 1], self.q, f)
        g = self.poly_gcd(f, self.poly_sub(xq, [0, 1]))
        rng = random.Random(seed)
        out = []
        stack = [g]
        while stack:
            h = stack.pop()
            deg = len(h) - 1
            if deg <= 0:
                continue
            if deg == 1:
                out.append(self.neg(h[0]))
                continue
            while True:
                if self.p == 2:
                    # Tr(a + b x) separates roots only through the b x part
                    delta = [rng.randrange(self.q), rng.randrange(1, self.q)]
                    t = delta = self.poly_divmod(delta, h)[1]
                    acc = list(t)
                    for _ in range(self.d - 1):
                        t = self.poly_divmod(self.poly_mul(t, t), h)[1]
                        acc = self.poly_add(acc, t)
                    split = acc
                else:
                    delta = [rng.randrange(self.q), 1]
                    split = self.poly_sub(self.poly_powmod(delta, (self.q - 1) // 2, h), [1])
                d = self.poly_gcd(h, split)
                if 0 < len(d) - 1 < deg:
                    stack.append(d)
                    stack.append(self.poly_divmod(h, d)[0])
                    break
        return sorted(out)

    def roots(self, f, method="auto"):
        """Sorted distinct roots of f in this field."""
        f = trim(f)
        if not f:
            raise ValueError("zero polynomial has every element as a root")
        if method == "exhaustive" or (method == "auto" and self.q <= EXHAUSTIVE_ROOT_LIMIT):
            return self.roots_exhaustive(f)
        return self.roots_gcd(f)

    def split(self, f, method="auto"):
        """Roots with multiplicity if f splits into linear factors, else None."""
        f = self.poly_monic(f)
        found = []
        while len(f) > 1:
            rs = self.roots(f, method)
            if not rs:
                return None
            for r in rs:
                while len(f) > 1:
                    q, rem = self.poly_divmod(f, [self.neg(r), 1])
                    if rem:
                        break
                    found.append(r)
                    f = q
        return sorted(found)

    def factor_degrees(self, f, budget=1 << 16):
        """Degrees of the monic irreducible factors of f, by trial division."""
        f = self.poly_monic(f)
        degrees = []
        work = 0
        d = 1
        while len(f) - 1 >= 2 * d:
            found = False
            for code in range(self.q ** d):
                work += 1
                if work > budget:
                    raise BudgetExceeded("trial-division factorization", budget)
                g = []
                for _ in range(d):
                    g.append(code % self.q)
                    code //= self.q
                g.append(1)
                q, r = self.poly_divmod(f, g)
                if not r:
                    degrees.append(d)
                    f = q
                    found = True
                    break
            if not found:
                d += 1
        if len(f) > 1:
            degrees.append(len(f) - 1)
        return sorted(degrees)


def required_level(field, f):
    """Smallest m such that f splits over F_{q^m} (q = |field|)."""
    degrees = field.factor_degrees(f)
    return math.lcm(*degrees) if degrees else 1


class FieldEmbedding:
    """Ring map F_{p^a} -> F_{p^b} fixed by the image of the source generator."""

    def __init__(self, source, target, image):
        if source.p != target.p or target.d % source.d:
            raise ValueError(f"no embedding {source} -> {target}")
        self.source = source
        self.target = target
        self.image = image
        if target.poly_eval(list(source.modulus), image) != 0:
            raise ValueError("generator image is not a root of the source modulus")
        self._powers = [target.pow(image, i) for i in range(source.d)]

    @classmethod
    def find(cls, source, target, method="auto"):
        """Embed by the least root of the source modulus in the target."""
        roots = target.roots(list(source.modulus), method)
        if not roots:
            raise ValueError(f"{source} does not embed in {target}")
        return cls(source, target, roots[0])

    def __call__(self, a):
        t = self.target
        acc = 0
        for c, pw in zip(self.source.to_coeffs(a), self._powers):
            if c:
                acc = t.add(acc, t.mul(c, pw) if c != 1 else pw)
        return acc

    def compose(self, after):
        """``after ∘ self``."""
        return FieldEmbedding(self.source, after.target, after(self.image))
