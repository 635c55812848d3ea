"""Reader for ring definition files.

One declaration per line (polygon blocks may span lines); ``#`` starts a
comment::

    ring z12 = zmod 12
    ring f4 = gf 2 2 x^2+x+1
    ring p = product z12 f4
    ring q = quotient z12 by [4]
    ring l = localize z12 at-set [3]
    ring s = semilocal z12 at-primes [[2],[3]]
    polyring r = fp 2 vars [x,y]
    spectrum d in r = [[x],[y],[x,y]]
    polygon triangle in r { edges = [[y],[x],[x+y+1]]; vertices = [[x,y],[x,y+1],[x+1,y]] }
    tower t = fpbar 2 levels [1,2,6,24]
"""

import re
from dataclasses import dataclass, field

from .errors import DefinitionError, ReducibleModulus, RingforgeError, ZeroRingError
from .groebner import PolyIdeal, PolyRing
from .ideals import LocalizationSpec, ideal_expand, localize_finite, prime_handle, quotient_ring
from .rings import GaloisFieldRing, ProductRing, ZModRing

NAME = r"[A-Za-z_][A-Za-z0-9_]*"


@dataclass
class Definitions:
    rings: dict = field(default_factory=dict)
    polyrings: dict = field(default_factory=dict)
    spectra: dict = field(default_factory=dict)
    polygons: dict = field(default_factory=dict)
    towers: dict = field(default_factory=dict)
    localizations: dict = field(default_factory=dict)

    def names(self):
        out = {}
        for kind in ("rings", "polyrings", "spectra", "polygons", "towers"):
            for n in getattr(self, kind):
                out[n] = kind
        return out


def split_top(text, sep=","):
    """Split on ``sep`` outside brackets and parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur)
    if tail.strip() or parts:
        parts.append(tail)
    return [p.strip() for p in parts]


def parse_list(text):
    """``[a, b, [c, d]]`` into nested lists of stripped strings."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"expected a bracketed list, got {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return []
    out = []
    for item in split_top(inner):
        out.append(parse_list(item) if item.startswith("[") else item)
    return out


def _logical_lines(text):
    """Yield (line_no, column_offset, statement) joining polygon blocks across lines."""
    buf, start, depth = [], None, 0
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip() and not buf:
            continue
        if not buf:
            start = no
        buf.append(line)
        depth += line.count("{") - line.count("}")
        if depth <= 0:
            stmt = " ".join(buf)
            yield start, len(stmt) - len(stmt.lstrip()), stmt.strip()
            buf, depth = [], 0
    if buf:
        raise DefinitionError("unterminated block (missing '}')", start, 1)


class _Reader:
    def __init__(self):
        self.defs = Definitions()

    def fail(self, msg, line, col):
        raise DefinitionError(msg, line, col + 1)

    def run(self, text):
        for line, indent, stmt in _logical_lines(text):
            try:
                self.statement(stmt, line, indent)
            except DefinitionError:
                raise
            except (RingforgeError, ValueError, KeyError, SyntaxError, TypeError) as exc:
                msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
                self.fail(str(msg), line, indent)
        return self.defs

    def _name_free(self, name, line, col):
        if name in self.defs.names():
            self.fail(f"name {name!r} is already defined", line, col)

    def statement(self, stmt, line, indent):
        kw = stmt.split(None, 1)[0]
        handler = {"ring": self.ring, "polyring": self.polyring, "polygon": self.polygon,
                   "tower": self.tower, "spectrum": self.spectrum}.get(kw)
        if handler is None:
            self.fail(f"unknown declaration {kw!r}", line, indent)
        handler(stmt, line, indent)

    # ring ---------------------------------------------------------------

    def ring(self, stmt, line, indent):
        m = re.fullmatch(rf"ring\s+({NAME})\s*=\s*(\S+)\s*(.*)", stmt)
        if not m:
            self.fail("expected 'ring <name> = <construction>'", line, indent)
        name, kind, rest = m.groups()
        self._name_free(name, line, indent + stmt.index(name))
        col = indent + stmt.index(kind, stmt.index("="))
        if kind == "zmod":
            if not re.fullmatch(r"\d+", rest):
                self.fail("zmod needs an integer modulus", line, col)
            mod = int(rest)
            if mod < 2:
                self.fail("zmod modulus must be >= 2", line, col)
            R = ZModRing(mod)
        elif kind == "gf":
            parts = rest.split(None, 2)
            if len(parts) < 2 or not parts[0].isdigit() or not parts[1].isdigit():
                self.fail("expected 'gf <p> <k> [<modulus-poly>]'", line, col)
            p, k = int(parts[0]), int(parts[1])
            modulus = None
            if len(parts) == 3:
                try:
                    modulus = _univariate(parts[2], p)
                except (ValueError, SyntaxError) as exc:
                    self.fail(str(exc), line, col)
                if len(modulus) - 1 != k:
                    self.fail(f"modulus has degree {len(modulus) - 1}, expected {k}", line, col)
                if modulus[-1] != 1:
                    self.fail("modulus must be monic", line, col)
            try:
                R = GaloisFieldRing(p, k, modulus)
            except ReducibleModulus as exc:
                self.fail(f"modulus {parts[2].strip()} is reducible (factor {exc.factor})", line, col)
        elif kind == "product":
            names = rest.replace(",", " ").split()
            if not names:
                self.fail("product needs at least one factor", line, col)
            R = ProductRing([self._ring(n, line, col) for n in names], name=name)
        elif kind == "quotient":
            mm = re.fullmatch(rf"({NAME})\s+by\s+(\[.*\])", rest)
            if not mm:
                self.fail("expected 'quotient <ring> by [<elem>, ...]'", line, col)
            base = self._ring(mm.group(1), line, col)
            gens = [base.parse(g) for g in parse_list(mm.group(2))]
            R = quotient_ring(base, ideal_expand(base, gens), name=name)
        elif kind == "localize":
            mm = re.fullmatch(rf"({NAME})\s+at-set\s+(\[.*\])", rest)
            if not mm:
                self.fail("expected 'localize <ring> at-set [<elem>, ...]'", line, col)
            base = self._ring(mm.group(1), line, col)
            gens = [base.parse(g) for g in parse_list(mm.group(2))]
            try:
                res = localize_finite(base, LocalizationSpec.by_mult_set(gens), name=name)
            except ZeroRingError as exc:
                self.fail(str(exc), line, col)
            self.defs.localizations[name] = res
            R = res.ring
        elif kind == "semilocal":
            mm = re.fullmatch(rf"({NAME})\s+at-primes\s+(\[.*\])", rest)
            if not mm:
                self.fail("expected 'semilocal <ring> at-primes [[gens],[gens]]'", line, col)
            base = self._ring(mm.group(1), line, col)
            primes = [prime_handle(base, [base.parse(g) for g in gens]) for gens in parse_list(mm.group(2))]
            res = localize_finite(base, LocalizationSpec.semi_local_at(primes), name=name)
            self.defs.localizations[name] = res
            R = res.ring
        else:
            self.fail(f"unknown ring construction {kind!r}", line, col)
        R.name = name if kind in ("product", "quotient", "localize", "semilocal") else R.name
        self.defs.rings[name] = R

    def _ring(self, name, line, col):
        if name not in self.defs.rings:
            self.fail(f"unknown ring {name!r}", line, col)
        return self.defs.rings[name]

    # polynomial rings, spectra, polygons ---------------------------------

    def polyring(self, stmt, line, indent):
        m = re.fullmatch(rf"polyring\s+({NAME})\s*=\s*fp\s+(\d+)\s+vars\s+(\[.*\])(?:\s+order\s+(\w+))?", stmt)
        if not m:
            self.fail("expected 'polyring <name> = fp <p> vars [x,y]'", line, indent)
        name, p, vs, order = m.groups()
        self._name_free(name, line, indent)
        variables = parse_list(vs)
        for v in variables:
            if not re.fullmatch(NAME, v):
                self.fail(f"bad variable name {v!r}", line, indent + stmt.index(vs))
        self.defs.polyrings[name] = PolyRing(int(p), variables, order or "grevlex")

    def _polyring(self, name, line, col):
        if name not in self.defs.polyrings:
            self.fail(f"unknown polyring {name!r}", line, col)
        return self.defs.polyrings[name]

    def spectrum(self, stmt, line, indent):
        from .spectrum import poly_spectrum
        m = re.fullmatch(rf"spectrum\s+({NAME})\s+in\s+({NAME})\s*=\s*(\[.*\])", stmt)
        if not m:
            self.fail("expected 'spectrum <name> in <polyring> = [[gens], ...]'", line, indent)
        name, rname, body = m.groups()
        self._name_free(name, line, indent)
        R = self._polyring(rname, line, indent + stmt.index(rname))
        self.defs.spectra[name] = poly_spectrum(R, [[R(g) for g in gens] for gens in parse_list(body)])

    def polygon(self, stmt, line, indent):
        from .spectrum import PolygonDescriptor
        m = re.fullmatch(rf"polygon\s+({NAME})\s+in\s+({NAME})\s*\{{(.*)\}}", stmt)
        if not m:
            self.fail("expected 'polygon <name> in <polyring> { edges = ...; vertices = ... }'", line, indent)
        name, rname, body = m.groups()
        self._name_free(name, line, indent)
        R = self._polyring(rname, line, indent + stmt.index(rname))
        fields = {}
        for part in split_top(body, ";"):
            if not part:
                continue
            mm = re.fullmatch(r"(\w+)\s*=\s*(\[.*\])", part)
            if not mm or mm.group(1) not in ("edges", "vertices"):
                self.fail(f"bad polygon field {part!r}", line, indent + stmt.index(part))
            fields[mm.group(1)] = parse_list(mm.group(2))
        if set(fields) != {"edges", "vertices"}:
            self.fail("polygon needs both edges and vertices", line, indent)
        edges = [[R(g) for g in gens] for gens in fields["edges"]]
        verts = [[R(g) for g in gens] for gens in fields["vertices"]]
        self.defs.polygons[name] = PolygonDescriptor.from_generators(R, edges, verts, name=name)

    # towers ---------------------------------------------------------------

    def tower(self, stmt, line, indent):
        from .colimit import build_fpbar_tower
        m = re.fullmatch(rf"tower\s+({NAME})\s*=\s*fpbar\s+(\d+)\s+levels\s+(\[.*\])", stmt)
        if not m:
            self.fail("expected 'tower <name> = fpbar <p> levels [..]'", line, indent)
        name, p, lv = m.groups()
        self._name_free(name, line, indent)
        levels = [int(x) for x in parse_list(lv)]
        T = build_fpbar_tower(int(p), levels)
        T.name = name
        self.defs.towers[name] = T


def _univariate(text, p):
    """Coefficient list (low-first) of a one-variable polynomial over F_p."""
    names = sorted(set(re.findall(NAME, text)))
    if len(names) > 1:
        raise ValueError(f"modulus must use a single variable, found {names}")
    var = names[0] if names else "x"
    R = PolyRing(p, [var])
    f = R.parse(text)
    deg = max((e[0] for e in f.terms), default=0)
    return [f.terms.get((k,), 0) for k in range(deg + 1)]


def parse_definitions(text):
    return _Reader().run(text)


def load_definitions(path):
    with open(path, encoding="utf-8") as fh:
        return parse_definitions(fh.read())
