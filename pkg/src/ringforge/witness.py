"""Witnesses that a ring carrying a polygon is not quadratically closed.

Given a validated polygon with edge primes P_0..P_{n-1} the pipeline builds

* c with c ∈ P_1 + P_2 and 1 - c ∈ P_0 + P_1,
* β with β ∈ P_j (j ≠ 1) and β ≡ c² - c mod P_1, by CRT-style gluing,
* a table of all candidate roots of T² - T - β in ∏ R/P_j, each refuted by
  a congruence that fails at some vertex ideal P_j + P_{j+1}.

Everything is re-checkable through membership tests alone.
"""

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .errors import CertificateError, NotComaximal
from .groebner import (MPoly, PolyIdeal, PolyRing, ideal_membership, intersect_all, split_membership)
from .ideals import IdealHandle, ideal_combine
from .spectrum import PolygonDescriptor, certify_poly_prime, validate_polygon


# ---------------------------------------------------------------------------
# backend adapters


class _PolyOps:
    def __init__(self, ring):
        self.ring = ring
        self.one = ring.one
        self.zero = ring.zero

    def coerce(self, x):
        return self.ring(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def member(self, x, I):
        return I.basis.contains(x)

    def split(self, x, ideals):
        parts = split_membership(x, ideals)
        return None if parts is None else [p for p, _ in parts]

    def canonical(self, x, ideals):
        return intersect_all(ideals).basis.reduce(x)

    def fmt(self, x):
        return str(x)


class _FiniteOps:
    def __init__(self, ring):
        self.ring = ring
        self.one = ring.one
        self.zero = ring.zero

    def coerce(self, x):
        return self.ring.normal(x)

    def add(self, a, b):
        return self.ring.add(a, b)

    def sub(self, a, b):
        return self.ring.sub(a, b)

    def mul(self, a, b):
        return self.ring.mul(a, b)

    def member(self, x, I):
        return x in I.expansion

    def split(self, x, ideals):
        R = self.ring
        *head, last = ideals
        for combo in itertools.product(*(I.sorted_elements() for I in head)):
            rest = R.sub(x, R.sum(combo))
            if rest in last.expansion:
                return list(combo) + [rest]
        return None

    def canonical(self, x, ideals):
        R = self.ring
        J = ideals[0]
        for I in ideals[1:]:
            J = ideal_combine(R, J, I, "intersection")
        return min((R.add(x, j) for j in J.expansion), key=R.index)

    def fmt(self, x):
        return self.ring.format(x)


def _ops_for(ideals):
    I = ideals[0]
    if isinstance(I, IdealHandle):
        return _FiniteOps(I.ring)
    return _PolyOps(I.ring)


def _as_ideal(x, ring=None):
    if isinstance(x, (IdealHandle, PolyIdeal)):
        return x
    if hasattr(x, "ideal"):
        return x.ideal
    return PolyIdeal(ring, x)


# ---------------------------------------------------------------------------
# gluing


@dataclass
class GluingProblem:
    """Residues a_i modulo ideals I_i with the data the inductive gluing consumes."""

    ideals: tuple
    residues: tuple
    pair_splits: dict = field(default_factory=dict)     # (i, j) -> (s_i, s_j): a_i - a_j = s_i + s_j
    triple_certs: dict = field(default_factory=dict)    # (i, j, k) -> (u, v, w): 1 = u + v + w

    @classmethod
    def build(cls, ideals, residues):
        """Derive every split and triple certificate with the backend; raise if one is missing."""
        ideals = tuple(ideals)
        ops = _ops_for(ideals)
        residues = tuple(ops.coerce(a) for a in residues)
        n = len(ideals)
        pairs, triples = {}, {}
        for i, j in itertools.combinations(range(n), 2):
            s = ops.split(ops.sub(residues[i], residues[j]), [ideals[i], ideals[j]])
            if s is None:
                raise NotComaximal(f"a_{i} - a_{j} ∉ I_{i} + I_{j}")
            pairs[(i, j)] = tuple(s)
        for t in itertools.combinations(range(n), 3):
            s = ops.split(ops.one, [ideals[k] for k in t])
            if s is None:
                raise NotComaximal(f"I_{t[0]} + I_{t[1]} + I_{t[2]} is proper")
            triples[t] = tuple(s)
        return cls(ideals, residues, pairs, triples)

    @property
    def ops(self):
        return _ops_for(self.ideals)

    def check(self):
        """Every split and certificate re-expands with members in the right ideals."""
        ops = self.ops
        I, a = self.ideals, self.residues
        for (i, j), (si, sj) in self.pair_splits.items():
            if ops.add(si, sj) != ops.sub(a[i], a[j]) or not ops.member(si, I[i]) or not ops.member(sj, I[j]):
                return False
        for t, parts in self.triple_certs.items():
            total = ops.zero
            for k, x in zip(t, parts):
                if not ops.member(x, I[k]):
                    return False
                total = ops.add(total, x)
            if total != ops.one:
                return False
        return True

    def satisfied_by(self, a):
        ops = self.ops
        return all(ops.member(ops.sub(a, ai), I) for I, ai in zip(self.ideals, self.residues))


def glue_pair(I0, I1, a0, a1, split=None, canonical=True):
    """a with a ≡ a0 mod I0 and a ≡ a1 mod I1, from a split a0 - a1 = s0 + s1."""
    ops = _ops_for([I0, I1])
    a0, a1 = ops.coerce(a0), ops.coerce(a1)
    if split is None:
        split = ops.split(ops.sub(a0, a1), [I0, I1])
        if split is None:
            raise NotComaximal("a0 - a1 ∉ I0 + I1")
    s0, s1 = split
    if ops.add(s0, s1) != ops.sub(a0, a1) or not ops.member(s0, I0) or not ops.member(s1, I1):
        raise CertificateError("supplied split does not re-expand")
    a = ops.sub(a0, s0)
    if canonical:
        a = ops.canonical(a, [I0, I1])
    if not (ops.member(ops.sub(a, a0), I0) and ops.member(ops.sub(a, a1), I1)):
        raise CertificateError("glued element fails a congruence")
    return a


def _pair_split(problem, i, m):
    """(x, y) with a_i - a_m = x + y, x ∈ I_i, y ∈ I_m."""
    if (i, m) in problem.pair_splits:
        return problem.pair_splits[(i, m)]
    ops = problem.ops
    sm, si = problem.pair_splits[(m, i)]             # a_m - a_i = sm + si
    return ops.sub(ops.zero, si), ops.sub(ops.zero, sm)


def _triple(problem, i, r, m):
    """(u, v, w) with u ∈ I_i, v ∈ I_r, w ∈ I_m, u + v + w = 1."""
    key = tuple(sorted((i, r, m)))
    parts = dict(zip(key, problem.triple_certs[key]))
    return parts[i], parts[r], parts[m]


def glue_many(problem, canonical=True):
    """Inductive gluing: after gluing I_0..I_{m-1} into a, correct by b ∈ I_0⋯I_{m-1}."""
    ops = problem.ops
    I, res = problem.ideals, problem.residues
    n = len(I)
    a = res[0]
    for m in range(1, n):
        # x_i ∈ I_i with x_i ≡ a_m - a mod I_m, for each i < m
        xs = []
        for i in range(m):
            p_i, _ = _pair_split(problem, i, m)
            xs.append(ops.add(ops.sub(ops.zero, p_i), ops.sub(res[i], a)))
        rep = xs[0]
        for r in range(1, m):
            e = ops.one
            full = ops.one
            for i in range(r):
                u, v, _ = _triple(problem, i, r, m)
                e = ops.mul(e, u)
                full = ops.mul(full, ops.add(u, v))
            f = ops.sub(full, e)                         # ∈ I_r, and e + f ≡ 1 mod I_m
            rep = ops.add(ops.mul(xs[r], e), ops.mul(rep, f))
        a = ops.add(a, rep)
        for i in range(m + 1):
            if not ops.member(ops.sub(a, res[i]), I[i]):
                raise CertificateError(f"gluing step {m} broke the congruence modulo I_{i}")
    if canonical:
        a = ops.canonical(a, list(I))
    if not problem.satisfied_by(a):
        raise CertificateError("glued element fails a congruence")
    return a


# ---------------------------------------------------------------------------
# c and β


@dataclass
class Membership:
    """x ∈ I with cofactors over I's generators (polynomial backend) or a plain flag."""

    element: object
    ideal: object
    cofactors: Optional[tuple] = None

    def check(self):
        I = self.ideal
        if isinstance(I, IdealHandle):
            return self.element in I.expansion
        if self.cofactors is None:
            return I.basis.contains(self.element)
        total = I.ring.zero
        for q, g in zip(self.cofactors, I.generators):
            total = total + q * g
        return total == self.element


def prove_member(x, I):
    if isinstance(I, IdealHandle):
        if x not in I.expansion:
            raise CertificateError(f"{I.ring.format(x)} ∉ {I}")
        return Membership(x, I)
    m = ideal_membership(x, I)
    if not m.member:
        raise CertificateError(f"{x} ∉ {I}")
    return Membership(x, I, m.transcript.cofactors)


def build_c(alpha01, alpha12):
    """c ∈ α_{1,2} with 1 - c ∈ α_{0,1}, read off a certificate 1 = u + v."""
    ops = _ops_for([alpha01, alpha12])
    parts = ops.split(ops.one, [alpha01, alpha12])
    if parts is None:
        raise NotComaximal(f"{alpha01} + {alpha12} is a proper ideal")
    u, c = parts
    evidence = (prove_member(c, alpha12), prove_member(ops.sub(ops.one, c), alpha01))
    return c, evidence


def edge_sum(desc, i, j):
    """P_i + P_j; for adjacent edges the declared vertex prime is used when it is that sum."""
    S = desc.edge_ideal(i) + desc.edge_ideal(j)
    if j == (i + 1) % desc.n:
        Q = desc.vertex_ideal(i)
        if S.basis.generators == PolyIdeal(S.ring, Q.generators).basis.generators:
            return Q
    return S


def build_beta(desc, c):
    """β ≡ 0 mod P_j (j ≠ 1) and β ≡ c² - c mod P_1, glued over the edge primes."""
    P = [desc.edge_ideal(i) for i in range(desc.n)]
    ops = _ops_for(P)
    target = ops.sub(ops.mul(c, c), c)
    residues = [ops.zero] * desc.n
    residues[1] = target
    problem = GluingProblem.build(P, residues)
    beta = glue_many(problem)
    evidence = []
    for j in range(desc.n):
        evidence.append(prove_member(ops.sub(beta, residues[j]), P[j]))
    return beta, evidence, problem


# ---------------------------------------------------------------------------
# the no-root certificate


def propagation_order(n):
    """Vertex pairs in the order the cycle argument visits them: (0,1), (n-1,0), ..., (1,2)."""
    order = [(0, 1)]
    for j in range(n - 1, 0, -1):
        order.append((j, (j + 1) % n))
    return order


@dataclass
class Candidate:
    values: tuple                  # r_0 .. r_{n-1}
    trail: list                    # vertex pairs whose congruence held, in order
    failure: Optional[tuple] = None   # (i, j, r_i - r_j, normal form modulo P_i + P_j)


@dataclass
class NoRootCertificate:
    n: int
    root_sets: tuple               # per coordinate, the two candidate roots
    candidates: list
    survivors: list

    @property
    def root_found(self):
        return bool(self.survivors)


def _root_sets(desc, c):
    R = desc.edge_ideal(0).ring
    return tuple((c, R.one - c) if j == 1 else (R.zero, R.one) for j in range(desc.n))


def extract_no_root_certificate(desc, c, beta):
    n = desc.n
    sets = _root_sets(desc, c)
    alphas = {}
    cands, survivors = [], []
    for values in itertools.product(*sets):
        trail = []
        failure = None
        for i, j in propagation_order(n):
            key = (i, j)
            if key not in alphas:
                alphas[key] = edge_sum(desc, i, j)
            diff = values[i] - values[j]
            nf = alphas[key].basis.reduce(diff)
            if nf:
                failure = (i, j, diff, nf)
                break
            trail.append((i, j))
        cand = Candidate(tuple(values), trail, failure)
        cands.append(cand)
        if failure is None:
            survivors.append(cand)
    return NoRootCertificate(n, sets, cands, survivors)


# ---------------------------------------------------------------------------
# reports


def _upoly_mul(f, g, zero):
    out = [zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return out


def _upoly_pow(f, k, one, zero):
    out = [one]
    for _ in range(k):
        out = _upoly_mul(out, f, zero)
    return out


def format_upoly(coeffs, var="T"):
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        s = str(c)
        if not mono:
            parts.append(s if len(c.terms) == 1 else f"({s})")
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"({s})*{mono}" if len(c.terms) > 1 else f"{s}*{mono}")
    return " + ".join(parts) or "0"


@dataclass
class QCObstructionReport:
    polygon: PolygonDescriptor
    characteristic: int
    c: MPoly
    c_evidence: tuple
    beta: MPoly
    beta_evidence: list
    certificate: NoRootCertificate
    witness: list                  # coefficients (low-first) of T² - T - β over R
    confidence: str                # certified | asserted
    power: Optional[int] = None
    power_witness: Optional[list] = None
    reducedness: Optional[list] = None   # per edge prime, its certification level
    order: str = "grevlex"

    @property
    def ok(self):
        return not self.certificate.root_found

    def witness_text(self):
        return format_upoly(self.witness)

    def power_text(self):
        return None if self.power_witness is None else f"({self.witness_text()})^{self.power}"

    def conclusion(self):
        name = self.polygon.name
        ring = self.polygon.edge_ideal(0).ring
        inter = " ∩ ".join(f"P_{i}" for i in range(self.polygon.n))
        if not self.ok:
            return f"root found: the congruences do not rule out a root of {self.witness_text()}"
        head = f"{ring}/({inter}) for {name} is not quadratically closed: {self.witness_text()} has no root"
        if self.power:
            head += f"; not {2 * self.power}-adically closed: {self.power_text()} has no root"
        return head

    def records(self):
        """One self-contained claim per record."""
        out = []
        out.append(dict(kind="membership", operands=["c", str(self.c), "P_1 + P_2"],
                        transcript=_cof(self.c_evidence[0]), verdict=self.c_evidence[0].check()))
        out.append(dict(kind="membership", operands=["1 - c", str(self.c_evidence[1].element), "P_0 + P_1"],
                        transcript=_cof(self.c_evidence[1]), verdict=self.c_evidence[1].check()))
        for j, ev in enumerate(self.beta_evidence):
            lhs = "beta" if j != 1 else "beta - (c^2 - c)"
            out.append(dict(kind="congruence", operands=[lhs, str(ev.element), f"P_{j}"],
                            transcript=_cof(ev), verdict=ev.check()))
        for cand in self.certificate.candidates:
            vals = [str(v) for v in cand.values]
            if cand.failure:
                i, j, diff, nf = cand.failure
                out.append(dict(kind="candidate-refuted", operands=vals,
                                transcript=dict(trail=[f"P_{a}+P_{b}" for a, b in cand.trail],
                                                fails_at=f"P_{i}+P_{j}", difference=str(diff), normal_form=str(nf)),
                                verdict=True))
            else:
                out.append(dict(kind="candidate-survives", operands=vals,
                                transcript=dict(trail=[f"P_{a}+P_{b}" for a, b in cand.trail]), verdict=False))
        if self.power:
            out.append(dict(kind="power-witness", operands=[self.power_text()],
                            transcript=dict(expanded=format_upoly(self.power_witness),
                                            reducedness=self.reducedness), verdict=True))
        return out

    def narrative(self):
        P = self.polygon
        lines = [f"Polygon {P.name}: n = {P.n}, characteristic {self.characteristic}."]
        lines.append(f"c = {self.c}: c ∈ P_1 + P_2 and 1 - c ∈ P_0 + P_1.")
        lines.append(f"beta = {self.beta}: beta ∈ P_j for j ≠ 1, beta ≡ c^2 - c mod P_1.")
        lines.append(f"Candidate roots of {self.witness_text()} per coordinate: "
                     + "; ".join(f"{{{', '.join(str(v) for v in s)}}}" for s in self.certificate.root_sets))
        for cand in self.certificate.candidates:
            vals = ", ".join(str(v) for v in cand.values)
            if cand.failure:
                i, j, diff, nf = cand.failure
                lines.append(f"  ({vals}): fails modulo P_{i} + P_{j}, difference {diff} has normal form {nf}")
            else:
                lines.append(f"  ({vals}): survives every congruence")
        lines.append(self.conclusion() + ".")
        return "\n".join(lines)


def _cof(m):
    return None if m.cofactors is None else [str(q) for q in m.cofactors]


def certify_not_closed(desc, mode="quadratic", n=None, validate=True):
    """Run the full pipeline on a polygon and bundle the certificate."""
    if validate:
        report = validate_polygon(desc)
        if not report.valid:
            raise ValueError(f"{desc.name} is not a valid polygon: {', '.join(report.failures()[:3])}")
    R = desc.edge_ideal(0).ring
    c, c_ev = build_c(edge_sum(desc, 0, 1), edge_sum(desc, 1, 2))
    beta, beta_ev, _ = build_beta(desc, c)
    cert = extract_no_root_certificate(desc, c, beta)
    levels = [getattr(e, "certification", "user-asserted") for e in desc.edges]
    confidence = "asserted" if "user-asserted" in levels else "certified"
    witness = [-beta, R.constant(-1), R.one]
    rep = QCObstructionReport(desc, R.p, c, c_ev, beta, beta_ev, cert, witness, confidence, order=R.order)
    if mode == "2n":
        if not n or n < 1:
            raise ValueError("2n mode needs n >= 1")
        rep.power = n
        rep.power_witness = _upoly_pow(witness, n, R.one, R.zero)
        rep.reducedness = levels
    elif mode != "quadratic":
        raise ValueError(f"unknown mode {mode!r}")
    return rep


# ---------------------------------------------------------------------------
# independent verification


@dataclass
class VerifyResult:
    ok: bool
    failure: str = ""
    checked: int = 0

    def __bool__(self):
        return self.ok


def verify_certificate(report, order=None):
    """Re-run every claim with fresh Gröbner bases (optionally in another monomial order)."""
    desc = report.polygon
    R0 = desc.edge_ideal(0).ring
    R = R0.with_order(order or R0.order)
    same_order = R.order == report.order
    P = [PolyIdeal(R, [R(g) for g in desc.edge_ideal(i).generators]) for i in range(desc.n)]
    alpha = lambda i, j: PolyIdeal(R, P[i].generators + P[j].generators)
    c, beta = R(report.c), R(report.beta)
    one = R.one
    count = 0

    def fail(msg):
        return VerifyResult(False, msg, count)

    if not alpha(1, 2).basis.contains(c):
        return fail("c ∉ P_1 + P_2")
    count += 1
    if not alpha(0, 1).basis.contains(one - c):
        return fail("1 - c ∉ P_0 + P_1")
    count += 1
    for j in range(desc.n):
        target = beta - (c * c - c) if j == 1 else beta
        if not P[j].basis.contains(target):
            return fail(f"beta congruence fails modulo P_{j}")
        count += 1
    for ev in list(report.c_evidence) + list(report.beta_evidence):
        if not ev.check():
            return fail(f"membership transcript for {ev.element} does not re-expand")
        count += 1
    cert = report.certificate
    expected_sets = [(c, one - c) if j == 1 else (R.zero, one) for j in range(desc.n)]
    if [tuple(R(v) for v in s) for s in cert.root_sets] != expected_sets:
        return fail("candidate root sets are not the forced ones")
    for j, s in enumerate(expected_sets):
        for r in s:
            if not P[j].basis.contains(r * r - r - beta):
                return fail(f"candidate {r} is not a root modulo P_{j}")
            count += 1
    table = [tuple(R(v) for v in cand.values) for cand in cert.candidates]
    if sorted(map(_key, table)) != sorted(map(_key, itertools.product(*expected_sets))):
        return fail("candidate table is not exhaustive")
    order_pairs = propagation_order(desc.n)
    for cand in cert.candidates:
        vals = [R(v) for v in cand.values]
        if cand.trail != order_pairs[:len(cand.trail)]:
            return fail("trail does not follow the propagation order")
        for i, j in cand.trail:
            if not alpha(i, j).basis.contains(vals[i] - vals[j]):
                return fail(f"trail congruence modulo P_{i} + P_{j} does not hold")
            count += 1
        if cand.failure is None:
            return fail("a candidate survives: root found")
        i, j, diff, nf = cand.failure
        if (i, j) != order_pairs[len(cand.trail)]:
            return fail("failure is not at the next vertex of the propagation order")
        diff, nf = R(diff), R(nf)
        if diff != vals[i] - vals[j]:
            return fail("recorded difference is wrong")
        A = alpha(i, j)
        if not A.basis.contains(diff - nf):
            return fail(f"recorded normal form is not congruent to the difference modulo P_{i} + P_{j}")
        recomputed = A.basis.reduce(diff)
        if not recomputed or not nf:
            return fail(f"difference reduces to zero modulo P_{i} + P_{j}")
        if same_order and recomputed != nf:
            return fail("recorded normal form differs from re-reduction")
        count += 1
    if report.power:
        w = [-beta, R.constant(-1), one]
        if [R(x) for x in report.power_witness] != _upoly_pow(w, report.power, one, R.zero):
            return fail("power witness does not expand to (T^2 - T - beta)^n")
        for i in range(desc.n):
            level = certify_poly_prime(P[i])
            if level is None and report.reducedness[i] != "user-asserted":
                return fail(f"P_{i} primality could not be re-certified")
        count += 1
    return VerifyResult(True, "", count)


def _key(values):
    return tuple(sorted(v.terms.items()) for v in values)
