"""
Sparse exact multivariate polynomials.

A :class:`Poly` stores a map from exponent tuples to nonzero
:class:`~detrepy.exactfield.FieldValue` coefficients together with the number
of ambient variables. Variables are addressed by 0-based index in the API and
printed 1-based (``x1``, ``x2``, ...). Terms are ordered graded
lexicographically; "monic" always refers to that order.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from .errors import FieldMismatchError, IdentityViolationError, ParseError
from .exactfield import FieldId, FieldValue, format_value

logger = logging.getLogger(__name__)

NEG_INF = float("-inf")

Exponent = Tuple[int, ...]


def grlex_key(e: Exponent) -> Tuple[int, Exponent]:
    return (sum(e), e)


class Poly:
    """Immutable sparse polynomial over a :class:`FieldId` in ``nvars`` variables."""

    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field: FieldId, nvars: int, terms: Optional[Mapping[Exponent, FieldValue]] = None):
        self.field = field
        self.nvars = nvars
        clean: Dict[Exponent, FieldValue] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} does not have length {nvars}")
                if not isinstance(c, FieldValue):
                    c = FieldValue(field, c)
                elif c.field != field:
                    raise FieldMismatchError(f"coefficient over {c.field} in a {field} polynomial")
                if not c.is_zero():
                    clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, field: FieldId, nvars: int, terms: Dict[Exponent, FieldValue]) -> "Poly":
        obj = cls.__new__(cls)
        obj.field = field
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, field: FieldId, nvars: int) -> "Poly":
        return cls._from_clean(field, nvars, {})

    @classmethod
    def constant(cls, field: FieldId, nvars: int, c) -> "Poly":
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, field: FieldId, nvars: int) -> "Poly":
        return cls.constant(field, nvars, 1)

    @classmethod
    def variable(cls, field: FieldId, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, field: FieldId, nvars: int, exponent: Sequence[int], coeff=1) -> "Poly":
        return cls(field, nvars, {tuple(exponent): coeff})

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> FieldValue:
        return self.terms.get((0,) * self.nvars, FieldValue.zero(self.field))

    def coeff(self, exponent: Sequence[int]) -> FieldValue:
        return self.terms.get(tuple(exponent), FieldValue.zero(self.field))

    def degree(self, i: int) -> Union[int, float]:
        """Degree in ``x_i``; ``NEG_INF`` for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(e[i] for e in self.terms)

    def degrees(self) -> List[Union[int, float]]:
        return [self.degree(i) for i in range(self.nvars)]

    def total_degree(self) -> Union[int, float]:
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def support(self) -> Set[int]:
        """Indices of variables occurring with positive degree."""
        out: Set[int] = set()
        for e in self.terms:
            out.update(i for i, k in enumerate(e) if k)
        return out

    def is_multiaffine(self, variables: Optional[Iterable[int]] = None) -> bool:
        idx = range(self.nvars) if variables is None else variables
        return all(e[i] <= 1 for e in self.terms for i in idx)

    def is_multiquadratic(self) -> bool:
        return all(k <= 2 for e in self.terms for k in e)

    def is_fixed(self) -> bool:
        """True when every coefficient lies in the fixed field."""
        return all(c.is_fixed() for c in self.terms.values())

    def leading_term(self) -> Tuple[Exponent, FieldValue]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def leading_coeff(self) -> FieldValue:
        return self.leading_term()[1]

    def monic(self) -> Tuple[FieldValue, "Poly"]:
        """Split off the leading coefficient: ``self == lc * monic``."""
        if not self.terms:
            return FieldValue.zero(self.field), self
        lc = self.leading_coeff()
        if lc.is_one():
            return lc, self
        return lc, self.scale(lc.inverse())

    def sorted_terms(self) -> List[Tuple[Exponent, FieldValue]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    # -- ring operations --------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"cannot combine {self.field} and {other.field} polynomials")
        if other.nvars != self.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _lift(self, other) -> Optional["Poly"]:
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, FieldValue)) and not isinstance(other, bool):
            return Poly.constant(self.field, self.nvars, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        return Poly._from_clean(self.field, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._from_clean(self.field, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "Poly":
        c = c if isinstance(c, FieldValue) else FieldValue(self.field, c)
        if c.is_zero():
            return Poly.zero(self.field, self.nvars)
        if c.is_one():
            return self
        return Poly._from_clean(self.field, self.nvars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldValue)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.field, self.nvars)
        out: Dict[Exponent, FieldValue] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                s = out.get(e)
                out[e] = v if s is None else s + v
        return Poly._from_clean(self.field, self.nvars, {e: c for e, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Poly.one(self.field, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction, FieldValue)) and not isinstance(other, bool):
            return self == Poly.constant(self.field, self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.nvars, frozenset(self.terms.items())))
        return self._hash

    def conj(self) -> "Poly":
        """Apply the field involution to every coefficient."""
        return Poly._from_clean(self.field, self.nvars, {e: c.conj() for e, c in self.terms.items()})

    # -- calculus and substitution ---------------------------------------

    def derivative(self, i: int) -> "Poly":
        out: Dict[Exponent, FieldValue] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                v = c * k
                if not v.is_zero():
                    ne = e[:i] + (k - 1,) + e[i + 1:]
                    out[ne] = v
        return Poly._from_clean(self.field, self.nvars, out)

    def specialize(self, i: int, value) -> "Poly":
        """Substitute ``x_i := value``; the result keeps ``nvars`` with ``deg_i = 0``."""
        v = value if isinstance(value, FieldValue) else FieldValue(self.field, value)
        out: Dict[Exponent, FieldValue] = {}
        for e, c in self.terms.items():
            k = e[i]
            term = c if k == 0 else c * (v ** k)
            if term.is_zero():
                continue
            ne = e[:i] + (0,) + e[i + 1:]
            s = out.get(ne)
            out[ne] = term if s is None else s + term
        return Poly._from_clean(self.field, self.nvars, {e: c for e, c in out.items() if not c.is_zero()})

    def evaluate(self, point: Mapping[int, object]) -> "Poly":
        f = self
        for i, v in point.items():
            f = f.specialize(i, v)
        return f

    def evaluate_all(self, values: Sequence[object]) -> FieldValue:
        """Value at a full point (one entry per variable)."""
        vals = [v if isinstance(v, FieldValue) else FieldValue(self.field, v) for v in values]
        total = FieldValue.zero(self.field)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t = t * (v ** k)
            total = total + t
        return total

    def slice(self, S: Iterable[int], T: Iterable[int]) -> "Poly":
        """``f_S^T``: differentiate in every ``i`` of ``S``, then set ``x_j = 0`` for ``j`` in ``T``."""
        S, T = set(S), set(T)
        if S & T:
            raise ValueError(f"slice index sets overlap: {sorted(S & T)}")
        f = self
        for i in sorted(S):
            f = f.derivative(i)
        for j in sorted(T):
            f = f.specialize(j, 0)
        return f

    def coeffs_in(self, i: int) -> List["Poly"]:
        """Coefficients of ``x_i^0, x_i^1, ...`` as polynomials free of ``x_i``."""
        if not self.terms:
            return []
        out: List[Dict[Exponent, FieldValue]] = [dict() for _ in range(int(self.degree(i)) + 1)]
        for e, c in self.terms.items():
            out[e[i]][e[:i] + (0,) + e[i + 1:]] = c
        return [Poly._from_clean(self.field, self.nvars, t) for t in out]

    @classmethod
    def from_coeffs(cls, coeffs: Sequence["Poly"], i: int) -> "Poly":
        if not coeffs:
            raise ValueError("empty coefficient list")
        field, nvars = coeffs[0].field, coeffs[0].nvars
        x = cls.variable(field, nvars, i)
        total = cls.zero(field, nvars)
        for k, c in enumerate(coeffs):
            total = total + c * (x ** k)
        return total

    def lead_in(self, i: int) -> "Poly":
        return self.coeffs_in(i)[-1]

    def compose(self, subs: Mapping[int, "Poly"]) -> "Poly":
        """Simultaneous substitution ``x_i := subs[i]``; unlisted variables stay."""
        for p in subs.values():
            self._check(p)
        powers: Dict[Tuple[int, int], Poly] = {}

        def power(i: int, k: int) -> Poly:
            key = (i, k)
            if key not in powers:
                powers[key] = subs[i] ** k
            return powers[key]

        total = Poly.zero(self.field, self.nvars)
        for e, c in self.terms.items():
            keep = tuple(0 if i in subs else k for i, k in enumerate(e))
            t = Poly._from_clean(self.field, self.nvars, {keep: c})
            for i, k in enumerate(e):
                if k and i in subs:
                    t = t * power(i, k)
            total = total + t
        return total

    def relabel(self, perm: Sequence[int], nvars: Optional[int] = None) -> "Poly":
        """Rename ``x_i -> x_{perm[i]}``."""
        n = self.nvars if nvars is None else nvars
        out: Dict[Exponent, FieldValue] = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    ne[perm[i]] = k
            out[tuple(ne)] = c
        return Poly._from_clean(self.field, n, out)

    def extract_vars(self, variables: Sequence[int]) -> "Poly":
        """Restrict to the listed variables (in that order); all others must be absent."""
        idx = list(variables)
        keep = set(idx)
        out: Dict[Exponent, FieldValue] = {}
        for e, c in self.terms.items():
            if any(k and i not in keep for i, k in enumerate(e)):
                raise ValueError("polynomial depends on a variable outside the extracted set")
            out[tuple(e[i] for i in idx)] = c
        return Poly._from_clean(self.field, len(idx), out)

    def embed(self, nvars: int, positions: Sequence[int]) -> "Poly":
        """Inverse of :meth:`extract_vars`: place variable ``k`` at ``positions[k]``."""
        return self.relabel(positions, nvars)

    def truncate(self, nvars: int) -> "Poly":
        """Drop trailing variables, which must not occur."""
        return self.extract_vars(range(nvars))

    # -- homogenization ----------------------------------------------------

    def multihomogenize(self, d: Sequence[int]) -> "Poly":
        """``prod y_i^{d_i} f(x_1/y_1, ...)`` in ``2n`` variables (``y_i`` at index ``n + i``)."""
        n = self.nvars
        if len(d) != n:
            raise ValueError(f"degree vector has length {len(d)}, expected {n}")
        out: Dict[Exponent, FieldValue] = {}
        for e, c in self.terms.items():
            if any(k > di for k, di in zip(e, d)):
                raise ValueError(f"degree {e} exceeds the bound {tuple(d)}")
            out[tuple(e) + tuple(di - k for k, di in zip(e, d))] = c
        return Poly._from_clean(self.field, 2 * n, out)

    def homogenize(self, degree: Optional[int] = None) -> "Poly":
        """``y^D f(x/y)`` in ``n + 1`` variables with ``y`` last; ``D`` defaults to the total degree."""
        if not self.terms:
            return Poly.zero(self.field, self.nvars + 1)
        D = int(self.total_degree()) if degree is None else degree
        out = {tuple(e) + (D - sum(e),): c for e, c in self.terms.items()}
        if any(k < 0 for e in out for k in e):
            raise ValueError(f"total degree exceeds {D}")
        return Poly._from_clean(self.field, self.nvars + 1, out)

    # -- division --------------------------------------------------------

    def exact_div(self, g: "Poly") -> Optional["Poly"]:
        """Exact quotient ``self / g``, or None when ``g`` does not divide ``self``."""
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return self
        if g.is_constant():
            return self.scale(g.constant_term().inverse())
        for i in range(self.nvars):
            if self.degree(i) < g.degree(i):
                return None
        ge, gc = g.leading_term()
        inv = gc.inverse()
        gterms = list(g.terms.items())
        r = dict(self.terms)
        q: Dict[Exponent, FieldValue] = {}
        while r:
            e = max(r, key=grlex_key)
            qe = tuple(a - b for a, b in zip(e, ge))
            if any(k < 0 for k in qe):
                return None
            qc = r[e] * inv
            q[qe] = qc
            for ge2, gc2 in gterms:
                te = tuple(a + b for a, b in zip(qe, ge2))
                v = r.get(te)
                v = -(qc * gc2) if v is None else v - qc * gc2
                if v.is_zero():
                    r.pop(te, None)
                else:
                    r[te] = v
        return Poly._from_clean(self.field, self.nvars, q)

    def divides(self, f: "Poly") -> bool:
        return f.exact_div(self) is not None

    # -- text ------------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({self.field.name}, {self.nvars}, {format_poly(self)!r})"


# ---------------------------------------------------------------------------
# gcd
# ---------------------------------------------------------------------------


def _normalize(f: Poly) -> Poly:
    return f.monic()[1]


def content(f: Poly, v: int) -> Poly:
    """gcd of the coefficients of ``f`` viewed as a polynomial in ``x_v``."""
    return gcd_many(f.coeffs_in(v), f.field, f.nvars)


def primitive_part(f: Poly, v: int) -> Poly:
    c = content(f, v)
    q = f.exact_div(c)
    if q is None:
        raise IdentityViolationError("content does not divide its polynomial")
    return q


def prem(a: Poly, b: Poly, v: int) -> Poly:
    """Pseudo-remainder of ``a`` by ``b`` in ``x_v``."""
    k = b.degree(v)
    lc = b.lead_in(v)
    x = Poly.variable(a.field, a.nvars, v)
    r = a
    while not r.is_zero() and r.degree(v) >= k:
        s = int(r.degree(v)) - int(k)
        r = lc * r - r.lead_in(v) * (x ** s) * b
    return r


def gcd(f: Poly, g: Poly) -> Poly:
    """
    Monic greatest common divisor.

    Recursive content/primitive-part reduction on the smallest variable
    occurring in either input, with a primitive pseudo-remainder sequence in
    that variable. ``gcd(0, 0) = 0``.
    """
    f._check(g)
    if f.is_zero():
        return _normalize(g)
    if g.is_zero():
        return _normalize(f)
    if f.is_constant() or g.is_constant():
        return Poly.one(f.field, f.nvars)
    if f.exact_div(g) is not None:
        return _normalize(g)
    if g.exact_div(f) is not None:
        return _normalize(f)
    sf, sg = f.support(), g.support()
    v = min(sf | sg)
    if v not in sf:
        return gcd(f, content(g, v))
    if v not in sg:
        return gcd(content(f, v), g)
    cf, cg = content(f, v), content(g, v)
    c = gcd(cf, cg)
    a = f.exact_div(cf)
    b = g.exact_div(cg)
    if a is None or b is None:
        raise IdentityViolationError("content division failed")
    if a.degree(v) < b.degree(v):
        a, b = b, a
    while True:
        r = prem(a, b, v)
        if r.is_zero():
            h = b
            break
        if r.degree(v) == 0:
            h = Poly.one(f.field, f.nvars)
            break
        a, b = b, primitive_part(r, v)
    return _normalize(c * h)


def gcd_many(polys: Iterable[Poly], field: FieldId, nvars: int) -> Poly:
    result = Poly.zero(field, nvars)
    for p in polys:
        result = gcd(result, p)
        if result.is_constant() and not result.is_zero():
            return result
    return result


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------


def _monomial_str(e: Exponent) -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"x{i + 1}")
        elif k > 1:
            parts.append(f"x{i + 1}^{k}")
    return "*".join(parts)


def format_poly(f: Poly) -> str:
    """Canonical text: graded-lex descending terms, ``x1*x2 - 1`` style."""
    if not f.terms:
        return "0"
    out: List[str] = []
    for e, c in f.sorted_terms():
        mono = _monomial_str(e)
        negative = f.field.kind == "QI" and c.is_fixed() and c.a < 0
        mag = -c if negative else c
        if mono and mag.is_one():
            body = mono
        elif mono:
            body = f"{format_value(mag)}*{mono}"
        else:
            body = format_value(mag)
        if not out:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


class _Parser:
    """Recursive-descent parser for the polynomial grammar."""

    def __init__(self, text: str, field: FieldId, nvars: int):
        self.text = text
        self.field = field
        self.nvars = nvars
        self.pos = 0

    def error(self, message: str, production: str) -> ParseError:
        return ParseError(message, self.text, self.pos, production)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str, production: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}", production)
        self.pos += 1

    def uint(self, production: str) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected an unsigned integer", production)
        return int(self.text[start:self.pos])

    def parse(self) -> Poly:
        if not self.text.strip():
            raise self.error("empty input", "expr")
        result = self.expr()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}", "expr")
        return result

    def expr(self) -> Poly:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        total = self.term()
        if sign < 0:
            total = -total
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.pos += 1
            t = self.term()
            total = total + t if op == "+" else total - t
        return total

    def term(self) -> Poly:
        result = self.power()
        while self.peek() in ("*", "/"):
            op = self.peek()
            self.pos += 1
            rhs = self.power()
            if op == "*":
                result = result * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise self.error("division requires a nonzero constant divisor", "term")
                result = result.scale(rhs.constant_term().inverse())
        return result

    def power(self) -> Poly:
        base = self.primary()
        if self.peek() == "^":
            self.pos += 1
            base = base ** self.uint("exponent")
        return base

    def primary(self) -> Poly:
        ch = self.peek()
        if not ch:
            raise self.error("unexpected end of input", "primary")
        if ch.isdigit():
            value = Poly.constant(self.field, self.nvars, self.uint("number"))
            # "2i" is shorthand for "2*i"
            if self.pos < len(self.text) and self.text[self.pos] == self.field.symbol:
                self.pos += 1
                value = value.scale(FieldValue.generator(self.field))
            return value
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            self.take(")", "primary")
            return inner
        if ch == "x":
            self.pos += 1
            idx = self.uint("variable")
            if idx < 1 or idx > self.nvars:
                self.pos -= len(str(idx)) + 1
                raise self.error(f"variable x{idx} outside x1..x{self.nvars}", "variable")
            return Poly.variable(self.field, self.nvars, idx - 1)
        if ch == self.field.symbol:
            self.pos += 1
            return Poly.constant(self.field, self.nvars, FieldValue.generator(self.field))
        raise self.error(f"unexpected {ch!r}", "primary")


def _max_var_index(text: str) -> int:
    best = 0
    i = 0
    while i < len(text):
        if text[i] == "x":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j > i + 1:
                best = max(best, int(text[i + 1:j]))
            i = j
        else:
            i += 1
    return best


def parse_poly(text: str, field: FieldId, nvars: Optional[int] = None) -> Poly:
    """
    Parse the polynomial grammar.

    ``nvars`` defaults to the largest variable index mentioned. Raises
    :class:`~detrepy.errors.ParseError` naming the failed production.
    """
    n = _max_var_index(text) if nvars is None else nvars
    return _Parser(text, field, n).parse()
