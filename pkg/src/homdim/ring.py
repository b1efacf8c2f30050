"""Graded algebras k[x_1..x_n]/(monomials) over a prime field."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement

import numpy as np

from .linalg import MAX_PRIME


class ParseError(ValueError):
    """Malformed ring, polynomial or object text.  Carries a location."""

    def __init__(self, message, line=None, offset=None, source=None):
        self.message = message
        self.fragment = None
        self.line = line
        self.offset = offset
        self.source = source
        where = []
        if source:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"offset {offset}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int = 101

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.p >= MAX_PRIME:
            raise ValueError(f"characteristic must be below 2**31, got {self.p}")

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(p)")
        return pow(a, self.p - 2, self.p)


def divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def support(mono):
    return frozenset(i for i, e in enumerate(mono) if e > 0)


def minimalize(monos):
    """Minimal generators of the monomial ideal generated by ``monos``."""
    ms = sorted(set(tuple(m) for m in monos), key=lambda m: (sum(m), m))
    out = []
    for m in ms:
        if not any(divides(g, m) for g in out):
            out.append(m)
    return tuple(sorted(out, reverse=True))


def _monomials_of_degree(n, d):
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


class GradedAlgebra:
    """Standard-graded quotient of a polynomial ring by a monomial ideal.

    The residue field is the degree-0 piece and the maximal ideal is the
    positive-degree part.  Monomials are exponent tuples; the fixed order is
    lexicographic with ``x_1 > x_2 > ...``.
    """

    def __init__(self, variables, relations=(), field=None, name=None):
        if isinstance(variables, int):
            variables = [f"x{i + 1}" for i in range(variables)]
        self.variables = tuple(variables)
        if not self.variables:
            raise ValueError("need at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        self.field = field if field is not None else PrimeField()
        n = len(self.variables)
        rels = []
        for r in relations:
            r = tuple(r) if not isinstance(r, str) else parse_monomial(r, self.variables)
            if len(r) != n:
                raise ValueError(f"relation {r} has {len(r)} exponents, expected {n}")
            if sum(r) == 0:
                raise ValueError("the unit monomial cannot be a relation")
            rels.append(r)
        self.relations = minimalize(rels)
        self.name = name
        self._basis: dict[int, list] = {}
        self._index: dict[int, dict] = {}
        self._mult: dict = {}

    @property
    def p(self):
        return self.field.p

    @property
    def num_vars(self):
        return len(self.variables)

    def __eq__(self, other):
        return (isinstance(other, GradedAlgebra) and self.variables == other.variables
                and self.relations == other.relations and self.field == other.field)

    def __hash__(self):
        return hash((self.variables, self.relations, self.field))

    def __repr__(self):
        rels = ", ".join(format_monomial(r, self.variables) for r in self.relations)
        return f"GF({self.p})[{', '.join(self.variables)}]/({rels})"

    def in_ideal(self, mono):
        return any(divides(r, mono) for r in self.relations)

    def basis(self, d):
        """Standard monomials of degree ``d`` in the fixed order."""
        if d < 0:
            return []
        if d not in self._basis:
            b = [m for m in _monomials_of_degree(self.num_vars, d) if not self.in_ideal(m)]
            self._basis[d] = b
            self._index[d] = {m: i for i, m in enumerate(b)}
        return self._basis[d]

    def index(self, d):
        self.basis(d)
        return self._index[d]

    def hilbert(self, d):
        return len(self.basis(d))

    @cached_property
    def top_degree(self):
        """Largest degree with a nonzero piece, or ``None`` when not Artinian."""
        pure = set()
        for r in self.relations:
            s = support(r)
            if len(s) == 1:
                pure.add(next(iter(s)))
        if len(pure) < self.num_vars:
            return None
        d = 0
        while self.basis(d + 1):
            d += 1
        return d

    @property
    def is_artinian(self):
        return self.top_degree is not None

    def mult_indices(self, mono, d):
        """Indices in degree ``d + deg(mono)`` of ``mono * basis(d)``; -1 marks zero."""
        key = (mono, d)
        hit = self._mult.get(key)
        if hit is None:
            e = sum(mono)
            idx = self.index(d + e)
            hit = np.array([idx.get(tuple(a + b for a, b in zip(mono, m)), -1)
                            for m in self.basis(d)], dtype=np.int64)
            self._mult[key] = hit
        return hit

    # element construction helpers
    def element(self, spec):
        if isinstance(spec, RingElement):
            if spec.algebra != self:
                raise ValueError("element belongs to a different algebra")
            return spec
        if isinstance(spec, str):
            return parse_polynomial(spec, self)
        if isinstance(spec, int):
            return RingElement(self, {(0,) * self.num_vars: spec})
        raise TypeError(f"cannot build ring element from {spec!r}")

    def zero(self):
        return RingElement(self, {})

    def one(self):
        return RingElement(self, {(0,) * self.num_vars: 1})

    def var(self, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else self.variables.index(name_or_index)
        e = [0] * self.num_vars
        e[i] = 1
        return RingElement(self, {tuple(e): 1})

    def monomial(self, exps, coeff=1):
        return RingElement(self, {tuple(exps): coeff})

    def to_json(self):
        return {"characteristic": self.p, "variables": list(self.variables),
                "relations": [format_monomial(r, self.variables) for r in self.relations]}


class RingElement:
    """Sparse element of a :class:`GradedAlgebra` in normal form."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms):
        p = algebra.p
        clean = {}
        for m, c in terms.items():
            c %= p
            if c and not algebra.in_ideal(m):
                clean[m] = c
        self.algebra = algebra
        self.terms = clean

    @property
    def is_zero(self):
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    @property
    def degree(self):
        """Degree if homogeneous and nonzero, else ``None``."""
        degs = {sum(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    @property
    def is_homogeneous(self):
        return len({sum(m) for m in self.terms}) <= 1

    def constant_term(self):
        return self.terms.get((0,) * self.algebra.num_vars, 0)

    def __add__(self, other):
        other = self.algebra.element(other) if not isinstance(other, RingElement) else other
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return RingElement(self.algebra, t)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self.algebra.element(other) if not isinstance(other, RingElement) else other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.algebra, {m: c * other for m, c in self.terms.items()})
        if other.algebra != self.algebra:
            raise ValueError("cannot multiply elements of different algebras")
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = t.get(m, 0) + c1 * c2
        return RingElement(self.algebra, t)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.algebra.element(other)
        return isinstance(other, RingElement) and self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"RingElement({format_polynomial(self)!r})"


def normal_form(algebra, raw):
    """Reduce a formal sum of ``(coefficient, exponents)`` pairs into ``algebra``."""
    t: dict = {}
    for c, m in raw:
        m = tuple(m)
        if len(m) != algebra.num_vars:
            raise ValueError(f"exponent tuple {m} has length {len(m)}, expected {algebra.num_vars}")
        if any(e < 0 for e in m):
            raise ValueError(f"negative exponent in {m}")
        t[m] = t.get(m, 0) + c
    return RingElement(algebra, t)


def graded_piece_basis(algebra, d):
    return list(algebra.basis(d))


def is_monomial_regular_sequence(ambient_num_vars, seq, relations=()):
    """Whether the monomials ``seq`` form a regular sequence.

    Over ``k[x]/J`` with ``J`` monomial, monomials form a regular sequence
    exactly when their supports are pairwise disjoint and avoid the support
    of every minimal generator of ``J``.
    """
    seen = set()
    for r in minimalize(relations) if relations else ():
        seen |= support(r)
    for m in seq:
        m = tuple(m)
        if len(m) != ambient_num_vars:
            raise ValueError(f"monomial {m} does not have {ambient_num_vars} exponents")
        if sum(m) == 0:
            raise ValueError("a constant monomial cannot be part of a regular sequence")
        s = support(m)
        if s & seen:
            return False
        seen |= s
    return True


def is_complete_intersection(algebra):
    """Minimal monomial relations have pairwise disjoint supports."""
    return is_monomial_regular_sequence(algebra.num_vars, algebra.relations)


# text formats ----------------------------------------------------------------

def format_monomial(mono, variables):
    parts = []
    for v, e in zip(variables, mono):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


def format_polynomial(elem):
    if elem.is_zero:
        return "0"
    p = elem.algebra.p
    out = []
    for m, c in elem.sorted_terms():
        sign = "+"
        if c > p // 2:
            sign, c = "-", p - c
        mono = format_monomial(m, elem.algebra.variables)
        if mono == "1":
            body = str(c)
        elif c == 1:
            body = mono
        else:
            body = f"{c}*{mono}"
        out.append((sign, body))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|(\+)|(-))")


def _tokenize(text, source=None, line=None):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", line=line,
                             offset=pos, source=source)
        start = m.start(m.lastindex)
        kind = ("num", "name", "^", "*", "+", "-")[m.lastindex - 1]
        toks.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    return toks


def parse_polynomial(text, algebra, source=None, line=None):
    """Parse text like ``3*s^2*t - t + 1`` into a ring element."""
    try:
        return _parse_polynomial(text, algebra, source, line)
    except ParseError as exc:
        exc.fragment = text
        raise


def _parse_polynomial(text, algebra, source, line):
    variables = algebra.variables
    toks = _tokenize(text, source, line)
    if not toks:
        raise ParseError("empty polynomial", line=line, offset=0, source=source)
    i = 0
    raw = []

    def err(msg, at):
        raise ParseError(msg, line=line, offset=at, source=source)

    sign = 1
    if toks[0][0] in "+-":
        sign = -1 if toks[0][0] == "-" else 1
        i = 1
    while True:
        coeff = 1
        exps = [0] * len(variables)
        seen_factor = False
        while True:
            if i >= len(toks):
                err("expected a term", len(text))
            kind, val, at = toks[i]
            if kind == "num":
                coeff *= int(val)
                i += 1
            elif kind == "name":
                if val not in variables:
                    err(f"unknown variable {val!r}", at)
                e = 1
                i += 1
                if i < len(toks) and toks[i][0] == "^":
                    if i + 1 >= len(toks) or toks[i + 1][0] != "num":
                        err("expected an exponent after '^'", toks[i][2])
                    e = int(toks[i + 1][1])
                    i += 2
                exps[variables.index(val)] += e
            else:
                err(f"unexpected {val!r}", at)
            seen_factor = True
            if i < len(toks) and toks[i][0] == "*":
                i += 1
                continue
            break
        assert seen_factor
        raw.append((sign * coeff, tuple(exps)))
        if i >= len(toks):
            break
        kind, val, at = toks[i]
        if kind not in "+-":
            err(f"unexpected {val!r}", at)
        sign = -1 if kind == "-" else 1
        i += 1
    return normal_form(algebra, raw)


def parse_monomial(text, variables, source=None, line=None):
    """Parse ``var^e*var^e`` into an exponent tuple (coefficient must be absent)."""
    try:
        return _parse_monomial(text, variables, source, line)
    except ParseError as exc:
        exc.fragment = text
        raise


def _parse_monomial(text, variables, source, line):
    exps = [0] * len(variables)
    pos = 0
    if not text.strip():
        raise ParseError("empty monomial", line=line, offset=0, source=source)
    for part in text.split("*"):
        stripped = part.strip()
        at = pos + (len(part) - len(part.lstrip()))
        m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?", stripped)
        if stripped == "1":
            pos += len(part) + 1
            continue
        if not m:
            raise ParseError(f"bad monomial factor {stripped!r}", line=line, offset=at, source=source)
        if m.group(1) not in variables:
            raise ParseError(f"unknown variable {m.group(1)!r}", line=line, offset=at, source=source)
        exps[variables.index(m.group(1))] += int(m.group(2) or 1)
        pos += len(part) + 1
    return tuple(exps)


def locate_fragment(exc, text):
    """Re-anchor a :class:`ParseError` raised inside a JSON string to a file line/column."""
    if exc.fragment is None or exc.line is not None:
        return exc
    pos = text.find(json.dumps(exc.fragment))
    if pos < 0:
        return exc
    line, col = json_location(text, pos + 1 + (exc.offset or 0))
    return ParseError(f"{exc.message} in {exc.fragment!r}", line=line, offset=col + 1, source=exc.source)


def json_location(text, needle_pos):
    line = text.count("\n", 0, needle_pos) + 1
    col = needle_pos - (text.rfind("\n", 0, needle_pos) + 1)
    return line, col


def load_json(text, source=None):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, offset=exc.colno, source=source) from None


def algebra_from_json(data, source=None):
    if not isinstance(data, dict):
        raise ParseError("ring definition must be a JSON object", source=source)
    try:
        p = int(data.get("characteristic", 101))
        variables = data["variables"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad ring definition: {exc}", source=source) from None
    rels = []
    for k, r in enumerate(data.get("relations", [])):
        rels.append(parse_monomial(r, tuple(variables), source=f"{source or 'ring'} relation {k}"))
    try:
        return GradedAlgebra(variables, rels, PrimeField(p))
    except ValueError as exc:
        raise ParseError(str(exc), source=source) from None


def load_algebra(path):
    with open(path) as fh:
        text = fh.read()
    try:
        return algebra_from_json(load_json(text, source=path), source=path)
    except ParseError as exc:
        raise locate_fragment(exc, text) from None
