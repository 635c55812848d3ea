"""n-adic closedness of finite rings, root-descent certificates and tower splitting."""

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BudgetExceeded, CertificateError, RootOracleFailure
from .fields import GF, FieldEmbedding, required_level
from .ideals import (_radical_mask, classify_ideal, enumerate_spectrum, ideal_combine, ideal_expand,
                     zero_ideal)

EXHAUSTIVE_BUDGET = 1 << 20
SAMPLE_COUNT = 20_000
CHUNK = 1 << 15


# ---------------------------------------------------------------------------
# monic polynomials over finite rings


def format_monic(ring, coeffs, var="T"):
    """``coeffs`` are c_0 .. c_{n-1} of T^n + c_{n-1} T^{n-1} + ... + c_0."""
    n = len(coeffs)
    parts = [f"{var}^{n}" if n > 1 else var]
    for k in range(n - 1, -1, -1):
        c = coeffs[k]
        if c == ring.zero:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        cs = ring.format(c)
        if not mono:
            parts.append(cs)
        elif c == ring.one:
            parts.append(mono)
        else:
            parts.append(f"{cs}*{mono}" if " " not in cs and "+" not in cs else f"({cs})*{mono}")
    return " + ".join(parts)


def eval_monic(ring, coeffs, t):
    acc = ring.one
    for c in reversed(coeffs):            # Horner on T^n + c_{n-1} T^{n-1} + ...
        acc = ring.add(ring.mul(acc, t), c)
    return acc


def roots_of_monic(ring, coeffs):
    return [t for t in ring.elements if eval_monic(ring, coeffs, t) == ring.zero]


def _power_table(ring, n):
    """pw[k][t] = index of t^k for k = 0..n."""
    size = ring.size
    one = ring.index(ring.one)
    pw = np.empty((n + 1, size), dtype=np.int64)
    pw[0] = one
    ar = np.arange(size)
    for k in range(1, n + 1):
        pw[k] = ring.mul_table[pw[k - 1], ar]
    return pw


def _root_free_rows(ring, n, coeff_idx, pw):
    """For each row of coefficient indices (c_0..c_{n-1}), does the monic have no root?"""
    zero = ring.index(ring.zero)
    at, mt = ring.add_table, ring.mul_table
    vals = np.broadcast_to(pw[n], (len(coeff_idx), ring.size)).copy()
    for k in range(n):
        vals = at[vals, mt[coeff_idx[:, k:k + 1], pw[k][None, :]]]
    return ~(vals == zero).any(axis=1)


@dataclass
class ClosednessReport:
    ring_name: str
    n: int
    verdict: str                         # closed | not-closed | sampled-no-counterexample
    counterexample: Optional[tuple] = None
    text: str = ""
    coverage: int = 0
    seed: Optional[int] = None
    exhaustive: bool = True

    @property
    def closed(self):
        return self.verdict == "closed"


def check_n_adically_closed(ring, n, budget=EXHAUSTIVE_BUDGET, sample_count=SAMPLE_COUNT, seed=None):
    """Does every monic of degree n over ``ring`` have a root?

    Exhaustive (leading coefficient varying slowest) when |R|^n <= budget,
    otherwise seeded uniform sampling.
    """
    if n < 1:
        raise ValueError("degree must be >= 1")
    size = ring.size
    total = size ** n
    pw = _power_table(ring, n)
    if total <= budget:
        done = 0
        for start in range(0, total, CHUNK):
            codes = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
            idx = np.empty((len(codes), n), dtype=np.int64)
            rest = codes.copy()
            for k in range(n):
                idx[:, k] = rest % size
                rest //= size
            bad = np.nonzero(_root_free_rows(ring, n, idx, pw))[0]
            if len(bad):
                done += int(bad[0]) + 1
                return _counterexample(ring, n, idx[bad[0]], done, None, True)
            done += len(codes)
        return ClosednessReport(ring.name, n, "closed", coverage=done)
    if seed is None:
        raise ValueError("a seed is required when the check falls back to sampling")
    rng = np.random.default_rng(seed)
    done = 0
    while done < sample_count:
        m = min(CHUNK, sample_count - done)
        idx = rng.integers(0, size, size=(m, n))
        bad = np.nonzero(_root_free_rows(ring, n, idx, pw))[0]
        if len(bad):
            return _counterexample(ring, n, idx[bad[0]], done + int(bad[0]) + 1, seed, False)
        done += m
    return ClosednessReport(ring.name, n, "sampled-no-counterexample", coverage=done, seed=seed, exhaustive=False)


def _counterexample(ring, n, idx, done, seed, exhaustive):
    coeffs = tuple(ring.elements[i] for i in idx)
    if roots_of_monic(ring, coeffs):
        raise CertificateError("vectorized scan disagrees with direct evaluation")
    return ClosednessReport(ring.name, n, "not-closed", coeffs, format_monic(ring, coeffs), done, seed, exhaustive)


def verify_root_free(ring, coeffs):
    return not roots_of_monic(ring, coeffs)


# ---------------------------------------------------------------------------
# 2 a unit


@dataclass
class TwoUnitReport:
    ring_name: str
    hypothesis_met: bool
    quadratically_closed: Optional[bool] = None
    squaring_surjective: Optional[bool] = None
    non_square: Optional[object] = None

    @property
    def holds(self):
        """The biconditional (None when 2 is not a unit)."""
        if not self.hypothesis_met:
            return None
        return self.quadratically_closed == self.squaring_surjective


def check_two_unit_equivalence(ring):
    two = ring.from_int(2)
    if not ring.is_unit(two):
        return TwoUnitReport(ring.name, False)
    qc = check_n_adically_closed(ring, 2, budget=max(EXHAUSTIVE_BUDGET, ring.size ** 2)).closed
    ar = np.arange(ring.size)
    squares = set(ring.mul_table[ar, ar].tolist())
    missing = [ring.elements[i] for i in range(ring.size) if i not in squares]
    return TwoUnitReport(ring.name, True, qc, not missing, missing[0] if missing else None)


# ---------------------------------------------------------------------------
# the arithmetic fact and radical descent


def minimal_m(n):
    """Least m >= 1 with (n-1)^m < n^(m-1)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    m = 1
    while (n - 1) ** m >= n ** (m - 1):
        m += 1
    return m


def _find_root(ring, n, target):
    """Least t (element order) with t^n = target."""
    for t in ring.elements:
        if ring.pow(t, n) == target:
            return t
    raise RootOracleFailure(n, ring.format(target))


def _split(ring, p, q, x):
    """(a, b) with a ∈ p, b ∈ q, a + b = x, or None."""
    for a in p.sorted_elements():
        b = ring.sub(x, a)
        if b in q.expansion:
            return a, b
    return None


@dataclass
class DescentStep:
    """y^n = a + b (a ∈ p, b ∈ q), t^n = a; then y ∈ p+q (direct) or y^(n-1) ∈ p+q."""

    y: object
    a: object
    b: object
    t: object
    branch: str                  # direct | power
    conclusion: object           # y (direct) or y^(n-1) (power)
    split: tuple                 # conclusion = split[0] + split[1], split[0] ∈ p, split[1] ∈ q


@dataclass
class DescentCertificate:
    ring: object
    x: object
    p: object
    q: object
    n: int
    m: int
    k: int
    chain: tuple                 # t_0 = x, t_1, ..., t_{m-1} with t_{i-1} = t_i^n
    steps: tuple
    final_split: tuple           # x = a + b
    kind: str                    # direct | chain


def descent_chain(ring, x, n, m=None):
    """t_0 = x and t_i with t_i^n = t_{i-1}, for i < m."""
    m = minimal_m(n) if m is None else m
    chain = [ring.normal(x)]
    for _ in range(1, m):
        chain.append(_find_root(ring, n, chain[-1]))
    return tuple(chain)


def _descent_step(ring, p, q, y, n, split=None):
    yn = ring.pow(y, n)
    a, b = split or _split(ring, p, q, yn) or (None, None)
    if a is None:
        raise ValueError(f"{ring.format(yn)} is not in p + q")
    t = _find_root(ring, n, a)
    if t not in p.expansion:
        raise CertificateError("root of an element of a prime lies outside it")
    if ring.sub(y, t) in q.expansion:
        return DescentStep(y, a, b, t, "direct", y, (t, ring.sub(y, t)))
    conclusion = ring.pow(y, n - 1)
    s = _split(ring, p, q, conclusion)
    if s is None:
        raise CertificateError("descent step failed: p or q is not prime")
    return DescentStep(y, a, b, t, "power", conclusion, s)


def radical_descent(ring, p, q, x, n, split=None):
    """Certificate that x ∈ p + q given x^n ∈ p + q (for prime p, q).

    ``split`` optionally fixes the decomposition x^n = a + b.  Raises
    RootOracleFailure when a required n-th root does not exist.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    x = ring.normal(x)
    m = minimal_m(n)
    k = n ** (m - 1) - (n - 1) ** m
    first = _descent_step(ring, p, q, x, n, split)
    if first.branch == "direct":
        return DescentCertificate(ring, x, p, q, n, m, k, (x,), (first,), first.split, "direct")
    chain = descent_chain(ring, x, n, m)
    steps = [first]
    # level i: t_i^(n (n-1)^i) = t_{i-1}^((n-1)^i) ∈ p + q  gives  t_i^((n-1)^(i+1)) ∈ p + q
    for i in range(1, m):
        y = ring.pow(chain[i], (n - 1) ** i)
        steps.append(_descent_step(ring, p, q, y, n))
    last = chain[m - 1]
    if steps[-1].branch == "power":
        A, B = steps[-1].split
    else:
        A, B = _split(ring, p, q, ring.pow(last, (n - 1) ** m))
    tk = ring.pow(last, k)
    final = (ring.mul(A, tk), ring.mul(B, tk))
    cert = DescentCertificate(ring, x, p, q, n, m, k, chain, tuple(steps), final, "chain")
    if not check_descent_certificate(cert):
        raise CertificateError("descent certificate failed its own check")
    return cert


def check_descent_certificate(cert):
    """Independent re-check of every equation and membership in a certificate."""
    R, p, q, n = cert.ring, cert.p, cert.q, cert.n
    in_p = lambda a: a in p.expansion
    in_q = lambda b: b in q.expansion
    if cert.k < 1 or cert.k != n ** (cert.m - 1) - (n - 1) ** cert.m:
        return False
    if (n - 1) ** cert.m >= n ** (cert.m - 1):
        return False
    for st in cert.steps:
        if R.pow(st.y, n) != R.add(st.a, st.b) or not in_p(st.a) or not in_q(st.b):
            return False
        if R.pow(st.t, n) != st.a or not in_p(st.t):
            return False
        expected = st.y if st.branch == "direct" else R.pow(st.y, n - 1)
        if st.conclusion != expected:
            return False
        if R.add(*st.split) != st.conclusion or not in_p(st.split[0]) or not in_q(st.split[1]):
            return False
    if cert.steps[0].y != cert.x:
        return False
    a, b = cert.final_split
    if R.add(a, b) != cert.x or not in_p(a) or not in_q(b):
        return False
    if cert.kind == "direct":
        return cert.steps[0].branch == "direct"
    chain = cert.chain
    if chain[0] != cert.x or len(chain) != cert.m:
        return False
    for i in range(1, len(chain)):
        if R.pow(chain[i], n) != chain[i - 1]:
            return False
        if cert.steps[i].y != R.pow(chain[i], (n - 1) ** i):
            return False
    last = chain[-1]
    return R.pow(last, n ** (cert.m - 1)) == cert.x


# ---------------------------------------------------------------------------
# conditional hypothesis and decreasing degree


@dataclass
class ConditionalReport:
    ring_name: str
    n: int
    hypothesis: bool
    counterexample: Optional[tuple] = None      # (prime, a, b)
    sums_primary: Optional[bool] = None
    non_primary: Optional[tuple] = None


def check_conditional_hypothesis(ring, n):
    """For each prime p, a ∉ p, b ∈ p: T^n + a T^(n-1) + b has a root outside p."""
    primes = enumerate_spectrum(ring).primes
    pw = _power_table(ring, n)
    at, mt, neg = ring.add_table, ring.mul_table, ring.neg_table
    for P in primes:
        mask = P.ideal.mask
        outside = np.nonzero(~mask)[0]
        inside = np.nonzero(mask)[0]
        for a in outside:
            vals = at[pw[n][outside], mt[a, pw[n - 1][outside]]]
            reachable = np.zeros(ring.size, dtype=bool)
            reachable[neg[vals]] = True
            missing = inside[~reachable[inside]]
            if len(missing):
                return ConditionalReport(ring.name, n, False,
                                         (P, ring.elements[a], ring.elements[missing[0]]))
    for P, Q in itertools.combinations_with_replacement(primes, 2):
        S = ideal_combine(ring, P.ideal, Q.ideal, "sum")
        if S.is_proper and not classify_ideal(ring, S).primary:
            return ConditionalReport(ring.name, n, True, None, False, (P, Q))
    return ConditionalReport(ring.name, n, True, None, True)


@dataclass
class DecreasingDegreeReport:
    ring_name: str
    n: int
    verdict: str            # skipped | vacuous | pass | fail
    reason: str = ""
    divisors: dict = field(default_factory=dict)


def is_reduced(ring):
    Z = zero_ideal(ring)
    return bool((_radical_mask(ring, Z.mask) == Z.mask).all())


def check_decreasing_degree(ring, n, budget=EXHAUSTIVE_BUDGET, sample_count=SAMPLE_COUNT, seed=0):
    """Reduced and n-adically closed implies m-adically closed for every m | n."""
    if not is_reduced(ring):
        return DecreasingDegreeReport(ring.name, n, "skipped", "ring is not reduced")
    top = check_n_adically_closed(ring, n, budget, sample_count, seed)
    if top.verdict == "not-closed":
        return DecreasingDegreeReport(ring.name, n, "vacuous",
                                      f"not {n}-adically closed: {top.text} has no root")
    if top.verdict != "closed":
        return DecreasingDegreeReport(ring.name, n, "undecided", "antecedent only sampled")
    divs = {}
    for m in range(1, n + 1):
        if n % m == 0:
            divs[m] = check_n_adically_closed(ring, m, budget, sample_count, seed).verdict
    verdict = "pass" if all(v == "closed" for v in divs.values()) else "fail"
    return DecreasingDegreeReport(ring.name, n, verdict, "", divs)


# ---------------------------------------------------------------------------
# splitting over towers of finite fields


@dataclass
class SplitResult:
    ok: bool
    level: int                      # absolute degree over F_p of the splitting level
    roots: tuple = ()               # encoded in GF(p, level)
    field: Optional[GF] = None
    needed: Optional[int] = None    # level the polynomial needs when ok is False

    def reexpand(self):
        F = self.field
        f = [F.one]
        for r in self.roots:
            f = F.poly_mul(f, [F.neg(r), F.one])
        return f


def _fields_cache():
    cache = {}

    def get(p, d):
        if (p, d) not in cache:
            cache[(p, d)] = GF(p, d)
        return cache[(p, d)]
    return get


field_at = _fields_cache()


def split_monic_over_tower(base, f, max_level, levels=None):
    """Split a monic over GF ``base`` inside the tower of F_p-extensions.

    ``f`` is low-first over ``base``.  With ``levels`` (a divisibility chain)
    only those degrees are admissible.  Returns roots in the least admissible
    level, or a failure carrying the needed level.
    """
    f = base.poly_trim(list(f))
    if not f or f[-1] != base.one:
        raise ValueError("polynomial must be monic")
    need = required_level(base, f) * base.d
    candidates = [L for L in (levels or range(base.d, max_level + 1)) if L % need == 0 and L <= max_level]
    if not candidates:
        return SplitResult(False, 0, needed=need)
    L = min(candidates)
    F = field_at(base.p, L)
    if F == base:
        img = list(f)
    else:
        emb = FieldEmbedding.find(base, F)
        img = [emb(c) for c in f]
    roots = F.split(img)
    if roots is None or len(roots) != len(f) - 1:
        raise CertificateError(f"{base.poly_format(f)} did not split at level {L}")
    res = SplitResult(True, L, tuple(roots), F)
    if res.reexpand() != img:
        raise CertificateError("split roots do not re-expand to the input")
    return res


def split_monic_over_product(bases, polys, max_level):
    """Coordinatewise splitting over a product of towers.

    Roots of each coordinate are paired in sorted order, so the result is one
    of several valid root lists.
    """
    parts = [split_monic_over_tower(b, f, max_level) for b, f in zip(bases, polys)]
    if not all(r.ok for r in parts):
        return None, parts
    return list(zip(*(r.roots for r in parts))), parts
