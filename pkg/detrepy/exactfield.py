"""
Exact arithmetic in fields with an order-two involution.

Three towers are supported, each given as ``K = F(delta)`` with ``delta**2 = d``
in the fixed field ``F`` of the involution:

- ``Q`` inside ``Q(i)`` (``d = -1``, conjugation negates the imaginary part),
- ``F_p`` inside ``F_p(a)`` for an odd prime ``p <= 97`` (``d`` the least
  quadratic non-residue, conjugation negates the ``a``-coordinate),
- ``F_2`` inside ``F_4 = F_2[a]/(a^2 + a + 1)`` (conjugation ``a -> 1 + a``).

A :class:`FieldValue` always carries the extension field ``K``; an element lies
in ``F`` when its second coordinate is zero.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import List, Optional, Tuple, Union

from sympy.ntheory import factorint, isprime, sqrt_mod

from .errors import FactorizationBoundError, FieldMismatchError, ParseError

logger = logging.getLogger(__name__)

MAX_PRIME = 97
FACTOR_BOUND = 10**6

Scalar = Union[int, Fraction, "FieldValue"]


@dataclass(frozen=True)
class FieldId:
    """Identifies the extension field ``K`` (and hence its fixed field ``F``)."""

    kind: str  # "QI", "FP" or "F4"
    p: int = 0
    d: int = -1

    @classmethod
    def gaussian(cls) -> "FieldId":
        return cls("QI", 0, -1)

    @classmethod
    def prime(cls, p: int) -> "FieldId":
        if p == 2:
            return cls.f4()
        if p > MAX_PRIME or p < 3 or not isprime(p):
            raise ValueError(f"unsupported prime {p}: need an odd prime <= {MAX_PRIME}")
        return cls("FP", p, _least_non_residue(p))

    @classmethod
    def f4(cls) -> "FieldId":
        return cls("F4", 2, 0)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_finite(self) -> bool:
        return self.kind != "QI"

    @property
    def symbol(self) -> str:
        return "i" if self.kind == "QI" else "a"

    @property
    def name(self) -> str:
        if self.kind == "QI":
            return "Qi"
        if self.kind == "F4":
            return "F4"
        return f"Fp2:{self.p}"

    @property
    def fixed_name(self) -> str:
        if self.kind == "QI":
            return "Q"
        if self.kind == "F4":
            return "F2"
        return f"Fp:{self.p}"

    def size(self) -> int:
        """Number of elements of ``K`` (0 for infinite fields)."""
        return 0 if self.kind == "QI" else self.p * self.p

    def __str__(self) -> str:
        return self.name


def _least_non_residue(p: int) -> int:
    squares = {(k * k) % p for k in range(1, p)}
    for d in range(2, p):
        if d not in squares:
            return d
    raise ValueError(f"no quadratic non-residue modulo {p}")


def resolve_field(name: str) -> Tuple[FieldId, bool]:
    """
    Resolve a field name to its ``FieldId``.

    Returns the field and a flag telling whether the name referred to the
    extension ``K`` (True) or to the fixed field ``F`` (False). Accepted names:
    ``Q``, ``Qi``, ``F2``, ``F4``, ``Fp:<p>``, ``Fp2:<p>``.
    """
    key = name.strip()
    if key in ("Q", "QQ"):
        return FieldId.gaussian(), False
    if key in ("Qi", "QI", "Q(i)"):
        return FieldId.gaussian(), True
    if key == "F2":
        return FieldId.f4(), False
    if key == "F4":
        return FieldId.f4(), True
    for prefix, ext in (("Fp2:", True), ("Fp:", False)):
        if key.startswith(prefix):
            try:
                p = int(key[len(prefix):])
            except ValueError:
                raise ValueError(f"unknown field {name!r}") from None
            return FieldId.prime(p), ext
    raise ValueError(f"unknown field {name!r}; expected Q, Qi, F2, F4, Fp:<p> or Fp2:<p>")


class FieldValue:
    """
    An exact element ``a + b*delta`` of ``K``.

    Instances are immutable. Arithmetic with ``int`` and ``Fraction`` operands
    coerces them into the field; arithmetic across different fields raises
    :class:`FieldMismatchError`.
    """

    __slots__ = ("field", "a", "b")

    def __init__(self, field: FieldId, a: Union[int, Fraction] = 0, b: Union[int, Fraction] = 0):
        object.__setattr__(self, "field", field)
        if field.kind == "QI":
            object.__setattr__(self, "a", Fraction(a))
            object.__setattr__(self, "b", Fraction(b))
        else:
            object.__setattr__(self, "a", _mod(a, field.p))
            object.__setattr__(self, "b", _mod(b, field.p))

    @classmethod
    def _raw(cls, field: FieldId, a, b) -> "FieldValue":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        return obj

    def __setattr__(self, key, value):
        raise AttributeError("FieldValue is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, field: FieldId) -> "FieldValue":
        return cls(field, 0, 0)

    @classmethod
    def one(cls, field: FieldId) -> "FieldValue":
        return cls(field, 1, 0)

    @classmethod
    def generator(cls, field: FieldId) -> "FieldValue":
        """The element ``delta`` (``i`` for the Gaussian rationals, ``a`` otherwise)."""
        return cls(field, 0, 1)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def is_one(self) -> bool:
        return self.a == 1 and not self.b

    def is_fixed(self) -> bool:
        return not self.b

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- coercion -----------------------------------------------------------

    def _coerce(self, other) -> "FieldValue":
        if isinstance(other, FieldValue):
            if other.field != self.field:
                raise FieldMismatchError(f"cannot combine {self.field} and {other.field} values")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return FieldValue(self.field, other, 0)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.field.kind == "QI":
            return FieldValue._raw(self.field, self.a + o.a, self.b + o.b)
        p = self.field.p
        return FieldValue._raw(self.field, (self.a + o.a) % p, (self.b + o.b) % p)

    __radd__ = __add__

    def __neg__(self):
        if self.field.kind == "QI":
            return FieldValue._raw(self.field, -self.a, -self.b)
        p = self.field.p
        return FieldValue._raw(self.field, (-self.a) % p, (-self.b) % p)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, e = self.a, self.b, o.a, o.b
        kind = self.field.kind
        if kind == "QI":
            if not b and not e:
                return FieldValue._raw(self.field, a * c, b)
            return FieldValue._raw(self.field, a * c - b * e, a * e + b * c)
        p = self.field.p
        if kind == "F4":
            return FieldValue._raw(self.field, (a * c + b * e) % 2, (a * e + b * c + b * e) % 2)
        return FieldValue._raw(self.field, (a * c + self.field.d * b * e) % p, (a * e + b * c) % p)

    __rmul__ = __mul__

    def inverse(self) -> "FieldValue":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        n = self.norm().a
        c = self.conj()
        if self.field.kind == "QI":
            return FieldValue._raw(self.field, c.a / n, c.b / n)
        p = self.field.p
        inv = pow(int(n), -1, p)
        return FieldValue._raw(self.field, (c.a * inv) % p, (c.b * inv) % p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = FieldValue.one(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- involution -----------------------------------------------------

    def conj(self) -> "FieldValue":
        """The involution ``x -> conj(x)``."""
        if self.field.kind == "QI":
            return FieldValue._raw(self.field, self.a, -self.b)
        if self.field.kind == "F4":
            return FieldValue._raw(self.field, (self.a + self.b) % 2, self.b)
        return FieldValue._raw(self.field, self.a, (-self.b) % self.field.p)

    def norm(self) -> "FieldValue":
        """``x * conj(x)``, an element of the fixed field."""
        a, b = self.a, self.b
        if self.field.kind == "QI":
            return FieldValue._raw(self.field, a * a + b * b, Fraction(0))
        if self.field.kind == "F4":
            return FieldValue._raw(self.field, (a * a + a * b + b * b) % 2, 0)
        p = self.field.p
        return FieldValue._raw(self.field, (a * a - self.field.d * b * b) % p, 0)

    def trace(self) -> "FieldValue":
        return self + self.conj()

    # -- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldValue):
            return self.field == other.field and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            o = FieldValue(self.field, other)
            return self.a == o.a and self.b == o.b
        return NotImplemented

    def __hash__(self) -> int:
        # fixed-field values hash like the int or Fraction they equal
        if not self.b:
            return hash(self.a)
        return hash((self.field, self.a, self.b))

    def sort_key(self) -> Tuple:
        return (self.a, self.b)

    def sign(self) -> int:
        """Sign of a rational fixed-field element (real-closure comparisons)."""
        if self.field.kind != "QI" or self.b:
            raise ValueError("sign is only defined for rational values")
        return (self.a > 0) - (self.a < 0)

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        return format_value(self)

    def __repr__(self) -> str:
        return f"FieldValue({self.field.name}, {format_value(self)})"


def _mod(x: Union[int, Fraction], p: int) -> int:
    if isinstance(x, Fraction):
        return (x.numerator * pow(x.denominator, -1, p)) % p
    return int(x) % p


def as_value(field: FieldId, x: Scalar) -> FieldValue:
    """Coerce ``x`` into ``field``."""
    if isinstance(x, FieldValue):
        if x.field != field:
            raise FieldMismatchError(f"expected a {field} value, got {x.field}")
        return x
    return FieldValue(field, x)


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------


def _fmt_rational(q: Union[int, Fraction]) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_value(x: FieldValue) -> str:
    """Literal form: ``3/2``, ``(2-5*i)``, ``(i)``, ``(3+2*a)``."""
    if not x.b:
        return _fmt_rational(x.a)
    sym = x.field.symbol
    b = x.b
    if b == 1:
        im = sym
    elif b == -1:
        im = f"-{sym}"
    else:
        im = f"{_fmt_rational(b)}*{sym}"
    if not x.a:
        return f"({im})"
    sep = "" if im.startswith("-") else "+"
    return f"({_fmt_rational(x.a)}{sep}{im})"


def parse_value(text: str, field: FieldId) -> FieldValue:
    """Parse a field literal; any constant expression of the polynomial grammar is accepted."""
    from .mpoly import parse_poly

    try:
        poly = parse_poly(str(text), field, 0)
    except ParseError as exc:
        raise ParseError("invalid field literal", str(text), exc.position, exc.production) from None
    return poly.constant_term()


# ---------------------------------------------------------------------------
# square roots and norms
# ---------------------------------------------------------------------------


def rational_sqrt(q: Fraction) -> Optional[Fraction]:
    """Nonnegative rational square root, or None."""
    if q < 0:
        return None
    n, m = q.numerator, q.denominator
    rn, rm = isqrt(n), isqrt(m)
    if rn * rn == n and rm * rm == m:
        return Fraction(rn, rm)
    return None


def sqrt_in_fixed_field(x: FieldValue) -> Optional[FieldValue]:
    """
    Square root of a fixed-field element inside the fixed field.

    Parameters
    ----------
    x : FieldValue
        Element with ``x.is_fixed()``.

    Returns
    -------
    FieldValue or None
        The nonnegative root over ``Q``, the least residue over ``F_p``, ``x``
        itself over ``F_2``; None when no root exists in the fixed field.
    """
    if not x.is_fixed():
        raise ValueError(f"{x} does not lie in the fixed field")
    field = x.field
    if field.kind == "QI":
        r = rational_sqrt(x.a)
        return None if r is None else FieldValue._raw(field, r, Fraction(0))
    if field.kind == "F4":
        return x
    p = field.p
    for r in range(p):
        if (r * r - x.a) % p == 0:
            return FieldValue._raw(field, r, 0)
    return None


@lru_cache(maxsize=4096)
def _finite_sqrt(field: FieldId, a: int, b: int) -> Optional[Tuple[int, int]]:
    target = FieldValue._raw(field, a, b)
    for u in range(field.p):
        for v in range(field.p):
            z = FieldValue._raw(field, u, v)
            if z * z == target:
                return (u, v)
    return None


def sqrt_in_field(x: FieldValue) -> Optional[FieldValue]:
    """Square root inside ``K`` with a canonical choice of sign, or None."""
    field = x.field
    if x.is_zero():
        return x
    if field.kind == "F4":
        return x * x
    if field.kind == "FP":
        found = _finite_sqrt(field, x.a, x.b)
        if found is None:
            return None
        root = FieldValue._raw(field, *found)
        neg = -root
        return root if root.sort_key() <= neg.sort_key() else neg
    u, v = x.a, x.b
    if not v:
        r = rational_sqrt(u) if u > 0 else rational_sqrt(-u)
        if r is None:
            return None
        return FieldValue._raw(field, r, Fraction(0)) if u > 0 else FieldValue._raw(field, Fraction(0), r)
    m = rational_sqrt(u * u + v * v)
    if m is None:
        return None
    s = rational_sqrt((u + m) / 2)
    if s is None or s == 0:
        return None
    return FieldValue._raw(field, s, v / (2 * s))


def _gaussian_prime_over(p: int) -> Tuple[int, int]:
    """``(x, y)`` with ``x^2 + y^2 = p`` for a prime ``p = 1 mod 4``."""
    r = sqrt_mod(-1 % p, p)
    a, b = p, r
    while b * b > p:
        a, b = b, a % b
    y = isqrt(p - b * b)
    if b * b + y * y != p:
        raise ArithmeticError(f"two-squares descent failed for {p}")
    return b, y


def _two_squares(n: int, bound: int) -> Optional[Tuple[int, int]]:
    """Gaussian integer of norm ``n``, or None if ``n`` is not a sum of two squares."""
    if n == 0:
        return (0, 0)
    factors = factorint(n, limit=bound)
    for q in factors:
        if not isprime(q):
            raise FactorizationBoundError(n, bound)
    re, im = 1, 0
    for q, e in sorted(factors.items()):
        if q == 2:
            base = (1, 1)
            power = e
        elif q % 4 == 3:
            if e % 2:
                return None
            base = (q, 0)
            power = e // 2
        else:
            base = _gaussian_prime_over(q)
            power = e
        for _ in range(power):
            re, im = re * base[0] - im * base[1], re * base[1] + im * base[0]
    return re, im


@lru_cache(maxsize=256)
def _finite_norm_witness(field: FieldId, target: int) -> Tuple[int, int]:
    for u in range(field.p):
        for v in range(field.p):
            z = FieldValue._raw(field, u, v)
            if z.norm().a == target:
                return (u, v)
    raise ArithmeticError(f"norm map of {field} misses {target}")


def hermitian_square_scalar(x: FieldValue, bound: int = FACTOR_BOUND) -> Optional[FieldValue]:
    """
    Find ``g`` in ``K`` with ``g * conj(g) = x`` for ``x`` in the fixed field.

    Over ``Q`` inside ``Q(i)`` this is the two-squares test on numerator times
    denominator, using trial division up to ``bound``. Over finite fields the
    norm map is surjective and a witness is found by search.

    Raises
    ------
    FactorizationBoundError
        If the integer to factor has a composite cofactor after trial division.
    """
    if not x.is_fixed():
        raise ValueError(f"{x} does not lie in the fixed field")
    field = x.field
    if x.is_zero():
        return x
    if field.kind != "QI":
        return FieldValue._raw(field, *_finite_norm_witness(field, int(x.a)))
    q = x.a
    if q < 0:
        return None
    n, m = q.numerator, q.denominator
    w = _two_squares(n * m, bound)
    if w is None:
        logger.debug("%s is not a norm from Q(i)", _fmt_rational(q))
        return None
    g = FieldValue._raw(field, Fraction(w[0], m), Fraction(w[1], m))
    return g * unit_normalizer(g)


def norm_one_units(field: FieldId) -> List[FieldValue]:
    """The elements of norm one used to canonicalize witnesses."""
    if field.kind == "QI":
        return [FieldValue(field, 1), FieldValue(field, 0, 1), FieldValue(field, -1), FieldValue(field, 0, -1)]
    return list(_finite_units(field))


@lru_cache(maxsize=32)
def _finite_units(field: FieldId) -> Tuple[FieldValue, ...]:
    out = []
    for u in range(field.p):
        for v in range(field.p):
            z = FieldValue._raw(field, u, v)
            if z.norm().a == 1:
                out.append(z)
    return tuple(out)


def unit_normalizer(lc: FieldValue) -> FieldValue:
    """
    Norm-one unit ``u`` making ``u * lc`` canonical.

    Over ``Q(i)`` the canonical value has positive real part, or zero real
    part and positive imaginary part. Over finite fields it is the smallest
    ``(a, b)`` pair reachable by a norm-one unit.
    """
    field = lc.field
    if lc.is_zero():
        return FieldValue.one(field)
    if field.kind == "QI":
        for u in norm_one_units(field):
            z = u * lc
            if z.a > 0 and z.b >= 0:
                return u
        raise ArithmeticError("no rotation normalizes a nonzero Gaussian value")
    return min(norm_one_units(field), key=lambda u: (u * lc).sort_key())


def random_value(field: FieldId, rng, bound: int = 5, fixed: bool = False, nonzero: bool = False) -> FieldValue:
    """Seeded random element with small numerators and denominators."""
    while True:
        if field.kind == "QI":
            a = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))
            b = 0 if fixed else Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))
            x = FieldValue(field, a, b)
        else:
            a = int(rng.integers(0, field.p))
            b = 0 if fixed else int(rng.integers(0, field.p))
            x = FieldValue(field, a, b)
        if not nonzero or not x.is_zero():
            return x


def elements(field: FieldId, fixed: bool = False) -> List[FieldValue]:
    """All elements of a finite field ``K`` (or of ``F`` when ``fixed``)."""
    if not field.is_finite:
        raise ValueError("cannot enumerate an infinite field")
    return [
        FieldValue._raw(field, u, v)
        for u in range(field.p)
        for v in (range(1) if fixed else range(field.p))
    ]
