"""
Constructive square and Hermitian-square certification.

Witnesses are always re-verified by exact multiplication before they are
returned. When no witness exists the ``certify_*`` entry points return a
refutation :class:`Certificate` naming the condition that failed; the plain
entry points return ``None``.

The recursions eliminate the lowest-index variable of positive degree first.
In characteristic two the discriminant criteria break down and the searches
become exhaustive over candidate coefficients, bounded by ``support_limit``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import TYPE_CHECKING, Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import BoundExceededError, IdentityViolationError
from .exactfield import (
    FACTOR_BOUND,
    FieldId,
    FieldValue,
    elements,
    hermitian_square_scalar,
    sqrt_in_field,
    sqrt_in_fixed_field,
    unit_normalizer,
)
from .mpoly import Poly, content, gcd, grlex_key
from .rayleigh import delta

if TYPE_CHECKING:
    from .detrep import MinorVector

logger = logging.getLogger(__name__)

KIND_MA = "ma-product"
KIND_HERMITIAN = "hermitian-square"
KIND_SCALAR = "scalar-square"
KIND_REFUTATION = "refutation"

CERTIFICATE_POINTS = 13
SUPPORT_LIMIT = 3


@dataclass
class Certificate:
    """
    Outcome of a certification: a witness or a named failed condition.

    Attributes
    ----------
    kind : str
        ``ma-product``, ``hermitian-square``, ``scalar-square`` or ``refutation``.
    target : Poly, optional
        The polynomial that was certified.
    scalar : FieldValue, optional
        Scalar factor of an ``ma-product`` witness.
    factors : list of Poly
        Monic multiaffine factors, or the single Hermitian-square witness ``g``.
    condition : str, optional
        Name of the failed condition for refutations.
    value : str, optional
        Text of the offending value (a polynomial or field element).
    gamma : str, optional
        Group element used when the condition was evaluated after transport.
    lam : tuple of int, optional
        Specialization point of a family condition.
    notes : list of str
        Supporting data, e.g. the irreducible factors of a failed resultant.
    """

    kind: str
    target: Optional[Poly] = None
    scalar: Optional[FieldValue] = None
    factors: List[Poly] = field(default_factory=list)
    condition: Optional[str] = None
    value: Optional[str] = None
    gamma: Optional[str] = None
    lam: Optional[Tuple[int, ...]] = None
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.kind != KIND_REFUTATION

    @property
    def witness(self) -> Optional[Poly]:
        return self.factors[0] if self.kind == KIND_HERMITIAN and self.factors else None

    @classmethod
    def refutation(cls, condition: str, target: Optional[Poly] = None, value=None, **kwargs) -> "Certificate":
        return cls(KIND_REFUTATION, target=target, condition=condition,
                   value=None if value is None else str(value), **kwargs)

    def verify(self) -> bool:
        """Re-check a witness by exact multiplication; refutations verify trivially."""
        if self.target is None or self.kind == KIND_REFUTATION:
            return True
        if self.kind == KIND_HERMITIAN:
            g = self.factors[0]
            return g * g.conj() == self.target
        prod_ = Poly.constant(self.target.field, self.target.nvars, self.scalar or 1)
        for p in self.factors:
            prod_ = prod_ * p
        return prod_ == self.target

    def describe(self) -> str:
        if self.kind == KIND_REFUTATION:
            text = f"refuted: {self.condition}"
            if self.value is not None:
                text += f" (value {self.value})"
            if self.gamma:
                text += f" under {self.gamma}"
            return text
        if self.kind == KIND_HERMITIAN:
            return f"Hermitian square of {self.factors[0]}"
        parts = [str(self.scalar)] if self.scalar is not None and not self.scalar.is_one() else []
        parts += [f"({p})" for p in self.factors]
        return " * ".join(parts) or "1"


class _Failed(Exception):
    def __init__(self, condition: str, value=None, notes: Optional[List[str]] = None):
        super().__init__(condition)
        self.condition = condition
        self.value = value
        self.notes = notes or []


def _sort_key(p: Poly):
    return (p.total_degree(), [(grlex_key(e), c.sort_key()) for e, c in p.sorted_terms()])


def _check_char2_support(q: Poly, limit: int) -> None:
    size = len(q.support())
    if size > limit:
        raise BoundExceededError("support size for exhaustive characteristic-2 search", size, limit)


# ---------------------------------------------------------------------------
# square roots and discriminants
# ---------------------------------------------------------------------------


def _scalar_sqrt(c: FieldValue, fixed: bool) -> Optional[FieldValue]:
    if fixed:
        return sqrt_in_fixed_field(c) if c.is_fixed() else None
    return sqrt_in_field(c)


def poly_sqrt(h: Poly, within_fixed: Optional[bool] = None) -> Optional[Poly]:
    """
    Polynomial ``g`` with ``g**2 == h``, or None.

    The root is searched over the fixed field when ``h`` has fixed coefficients
    (or ``within_fixed`` is set), otherwise over the extension. The sign is
    canonical: the leading coefficient is the canonical root of the leading
    coefficient of ``h``.
    """
    if h.is_zero():
        return h
    fixed = h.is_fixed() if within_fixed is None else within_fixed
    field_id, n = h.field, h.nvars
    if field_id.characteristic == 2:
        terms = {}
        for e, c in h.terms.items():
            if any(k % 2 for k in e):
                return None
            r = _scalar_sqrt(c, fixed)
            if r is None:
                return None
            terms[tuple(k // 2 for k in e)] = r
        return Poly(field_id, n, terms)
    e, c = h.leading_term()
    if any(k % 2 for k in e):
        return None
    lc = _scalar_sqrt(c, fixed)
    if lc is None:
        return None
    box = [int(d) // 2 for d in h.degrees()]
    lead = tuple(k // 2 for k in e)
    g = Poly.monomial(field_id, n, lead, lc)
    inv = (lc * 2).inverse()
    r = h - g * g
    while not r.is_zero():
        er, cr = r.leading_term()
        qe = tuple(a - b for a, b in zip(er, lead))
        if any(k < 0 or k > b for k, b in zip(qe, box)) or grlex_key(qe) >= grlex_key(lead):
            return None
        t = Poly.monomial(field_id, n, qe, cr * inv)
        r = r - (g * 2 + t) * t
        g = g + t
    return g


def discr(g: Poly, k: int) -> Poly:
    """``b^2 - 4ac`` for ``g = a x_k^2 + b x_k + c``."""
    cs = g.coeffs_in(k)
    if len(cs) > 3:
        raise ValueError(f"discriminant needs degree <= 2 in x{k + 1}, got {len(cs) - 1}")
    zero = Poly.zero(g.field, g.nvars)
    cs = cs + [zero] * (3 - len(cs))
    c, b, a = cs
    return b * b - a * c * 4


# ---------------------------------------------------------------------------
# quartic squares
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuarticCoeffs:
    """Coefficients ``b0..b4`` of ``h = sum b_j x^j``."""

    b: Tuple[FieldValue, ...]

    def __post_init__(self):
        if len(self.b) != 5:
            raise ValueError(f"a quartic has 5 coefficients, got {len(self.b)}")

    @classmethod
    def of(cls, field_id: FieldId, values: Sequence) -> "QuarticCoeffs":
        return cls(tuple(v if isinstance(v, FieldValue) else FieldValue(field_id, v) for v in values))

    @classmethod
    def from_poly(cls, h: Poly, k: int) -> "QuarticCoeffs":
        cs = h.coeffs_in(k)
        if len(cs) > 5:
            raise ValueError(f"degree {len(cs) - 1} in x{k + 1} exceeds 4")
        if any(not c.is_constant() for c in cs):
            raise ValueError(f"coefficients of x{k + 1} must be constants")
        vals = [c.constant_term() for c in cs]
        vals += [FieldValue.zero(h.field)] * (5 - len(vals))
        return cls(tuple(vals))

    @property
    def field(self) -> FieldId:
        return self.b[0].field

    def __getitem__(self, j: int) -> FieldValue:
        return self.b[j]

    def inverted(self) -> "QuarticCoeffs":
        """Coefficients after ``x -> -1/x``: ``b_k -> (-1)^k b_{4-k}``."""
        return QuarticCoeffs(tuple(self.b[4 - k] if k % 2 == 0 else -self.b[4 - k] for k in range(5)))

    def value_at_one(self) -> FieldValue:
        total = self.b[0]
        for x in self.b[1:]:
            total = total + x
        return total


def _bcd(b0, b1, b2, b3, b4):
    B = b4 * b1 * b1 - b3 * b3 * b0
    C = b1 * b1 * b1 - b0 * b1 * b2 * 4 + b0 * b0 * b3 * 8
    D = b1 * b1 * b2 - b0 * b2 * b2 * 4 + b0 * b1 * b3 * 2 + b0 * b0 * b4 * 16
    return B, C, D


def bcd_operators(h: QuarticCoeffs) -> Tuple[FieldValue, FieldValue, FieldValue]:
    """``(B, C, D)`` of a quartic; all vanish on squares."""
    return _bcd(*h.b)


def mirror_cubics(h: QuarticCoeffs) -> Tuple[FieldValue, FieldValue]:
    """
    The two remaining cubics, read off from ``C`` and ``D`` of the inverted quartic.

    ``b3^3 - 4 b4 b3 b2 + 8 b4^2 b1`` and ``b2 b3^2 - 4 b2^2 b4 + 2 b1 b3 b4 + 16 b0 b4^2``.
    """
    _, C, D = _bcd(*h.inverted().b)
    return -C, D


def is_square_quartic(h: QuarticCoeffs) -> Optional[Tuple[FieldValue, FieldValue, FieldValue]]:
    """
    ``(alpha, beta, delta)`` with ``(alpha x^2 + beta x + delta)^2 == h``, or None.

    Coefficients must lie in the fixed field and the root is taken there.

    Raises
    ------
    ValueError
        In characteristic two.
    """
    if h.field.characteristic == 2:
        raise ValueError("quartic square test needs characteristic != 2")
    b0, b1, b2, b3, b4 = h.b
    if not all(x.is_fixed() for x in h.b):
        raise ValueError("quartic coefficients must lie in the fixed field")
    zero = FieldValue.zero(h.field)
    if not b4.is_zero():
        alpha = sqrt_in_fixed_field(b4)
        if alpha is None:
            return None
        beta = b3 / (alpha * 2)
        dlt = (b2 - beta * beta) / (alpha * 2)
    elif not b3.is_zero():
        return None
    elif not b2.is_zero():
        alpha = zero
        beta = sqrt_in_fixed_field(b2)
        if beta is None:
            return None
        dlt = b1 / (beta * 2)
    else:
        alpha, beta = zero, zero
        dlt = sqrt_in_fixed_field(b0)
        if dlt is None:
            return None
    expanded = (
        dlt * dlt,
        beta * dlt * 2,
        beta * beta + alpha * dlt * 2,
        alpha * beta * 2,
        alpha * alpha,
    )
    if expanded != h.b:
        return None
    return alpha, beta, dlt


# ---------------------------------------------------------------------------
# multiaffine factorization
# ---------------------------------------------------------------------------


def factor_quadratic_linear(g: Poly, k: int, within_fixed: Optional[bool] = None) -> Optional[Tuple[Poly, Poly]]:
    """
    Split ``g`` (degree <= 2 in ``x_k``) into two factors of degree <= 1 in ``x_k``.

    Uses a square root ``q`` of the discriminant: with ``h = (b - q) / 2`` the
    first factor is ``(a / gcd(a, h)) x_k + h / gcd(a, h)``. Returns None when
    the discriminant is not a square.

    Raises
    ------
    ValueError
        In characteristic two or for degree > 2.
    IdentityViolationError
        If neither sign of ``q`` re-expands to ``g``.
    """
    if g.field.characteristic == 2:
        raise ValueError("discriminant splitting needs characteristic != 2")
    deg = g.degree(k)
    one = Poly.one(g.field, g.nvars)
    if deg > 2:
        raise ValueError(f"degree {deg} in x{k + 1} exceeds 2")
    if deg < 2:
        return g, one
    fixed = g.is_fixed() if within_fixed is None else within_fixed
    q = poly_sqrt(discr(g, k), fixed)
    if q is None:
        return None
    c, b, a = g.coeffs_in(k)
    x = Poly.variable(g.field, g.nvars, k)
    half = FieldValue(g.field, 2).inverse()
    for sign in (1, -1):
        h = (b - q * sign).scale(half)
        A = gcd(a, h)
        lin = a.exact_div(A)
        const = h.exact_div(A)
        if lin is None or const is None:
            continue
        first = lin * x + const
        second = g.exact_div(first)
        if second is not None and second.degree(k) <= 1:
            return first, second
    raise IdentityViolationError(f"discriminant splitting of {g} in x{k + 1} failed to re-expand")


def _monic_factors(f: Poly) -> Tuple[FieldValue, List[Poly]]:
    lc, m = f.monic()
    return lc, [m]


def ma_irreducible_factorization(f: Poly) -> Tuple[FieldValue, List[Poly]]:
    """
    Irreducible factors of a multiaffine ``f`` over disjoint variable sets.

    Components of the graph with an edge ``{i, j}`` whenever ``Delta_ij f != 0``
    give the factors; each is recovered by specializing the other variables
    at a 0/1 point that keeps ``f`` nonzero. Returns ``(scalar, monic factors)``.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has no factorization")
    if not f.is_multiaffine():
        raise ValueError("ma_irreducible_factorization needs a multiaffine polynomial")
    if f.is_constant():
        return f.constant_term(), []
    support = sorted(f.support())
    parent = {v: v for v in support}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in combinations(support, 2):
        if find(i) != find(j) and not delta(f, i, j).is_zero():
            parent[find(i)] = find(j)
    blocks: Dict[int, List[int]] = {}
    for v in support:
        blocks.setdefault(find(v), []).append(v)
    components = sorted(blocks.values())
    if len(components) == 1:
        return _monic_factors(f)
    factors = []
    for comp in components:
        inside = set(comp)
        h = f
        for v in support:
            if v in inside:
                continue
            zero_side = h.specialize(v, 0)
            h = zero_side if not zero_side.is_zero() else h.specialize(v, 1)
        factors.append(h.monic()[1])
    prod_ = Poly.one(f.field, f.nvars)
    for p in factors:
        prod_ = prod_ * p
    scalar = f.leading_coeff() / prod_.leading_coeff()
    if prod_.scale(scalar) != f:
        raise IdentityViolationError("multiaffine factors do not multiply back to f")
    logger.debug("multiaffine factorization into %d blocks", len(factors))
    return scalar, sorted(factors, key=_sort_key)


def _candidates(
    field_id: FieldId, nvars: int, box: Sequence[int], fixed: bool, lead: Optional[Tuple[int, ...]] = None
) -> Iterator[Poly]:
    # monic polynomials with exponents inside box, optionally with a prescribed leading exponent
    exps = sorted(product(*[range(b + 1) for b in box]), key=grlex_key)
    vals = elements(field_id, fixed)
    one = FieldValue.one(field_id)
    if lead is not None:
        rest = [e for e in exps if grlex_key(e) < grlex_key(tuple(lead))]
        for coeffs in product(vals, repeat=len(rest)):
            terms = {e: c for e, c in zip(rest, coeffs) if not c.is_zero()}
            terms[tuple(lead)] = one
            yield Poly(field_id, nvars, terms)
        return
    for coeffs in product(vals, repeat=len(exps)):
        p = Poly(field_id, nvars, {e: c for e, c in zip(exps, coeffs) if not c.is_zero()})
        if not p.is_zero() and not p.is_constant() and p.leading_coeff().is_one():
            yield p


def _exhaustive_ma(q: Poly, fixed: bool, limit: int) -> List[Poly]:
    _check_char2_support(q, limit)
    quad = [v for v in range(q.nvars) if q.degree(v) == 2]
    if not quad:
        return [] if q.is_constant() else ma_irreducible_factorization(q)[1]
    k = quad[0]
    support = q.support()
    box = [1 if v in support else 0 for v in range(q.nvars)]
    for p in _candidates(q.field, q.nvars, box, fixed):
        if p.degree(k) != 1:
            continue
        rest = q.exact_div(p)
        if rest is not None:
            return _exhaustive_ma(p, fixed, limit) + _exhaustive_ma(rest, fixed, limit)
    raise _Failed(f"no multiaffine factor of degree 1 in x{k + 1} over the {'fixed field' if fixed else 'extension'}", q)


def _ma_factor(q: Poly, fixed: bool, limit: int) -> List[Poly]:
    if q.is_constant():
        return []
    if q.field.characteristic == 2:
        return _exhaustive_ma(q, fixed, limit)
    quad = [v for v in range(q.nvars) if q.degree(v) == 2]
    if not quad:
        return ma_irreducible_factorization(q)[1]
    k = quad[0]
    split = factor_quadratic_linear(q, k, fixed)
    if split is None:
        raise _Failed(f"Discr_{{x{k + 1}}} is not a square", discr(q, k))
    first, second = split
    return _ma_factor(first, fixed, limit) + _ma_factor(second, fixed, limit)


def certify_ma_factorization(
    q: Poly, within_fixed: Optional[bool] = None, support_limit: int = SUPPORT_LIMIT
) -> Certificate:
    """Certificate for ``q`` being a product of multiaffine polynomials."""
    if q.is_zero():
        return Certificate.refutation("zero polynomial", q, q)
    if not q.is_multiquadratic():
        return Certificate.refutation("not multiquadratic", q, q)
    fixed = q.is_fixed() if within_fixed is None else within_fixed
    try:
        factors = _ma_factor(q, fixed, support_limit)
    except _Failed as exc:
        return Certificate.refutation(exc.condition, q, exc.value, notes=exc.notes)
    factors = [p.monic()[1] for p in factors]
    prod_ = Poly.one(q.field, q.nvars)
    for p in factors:
        prod_ = prod_ * p
    scalar = q.leading_coeff() / prod_.leading_coeff()
    if prod_.scale(scalar) != q:
        raise IdentityViolationError(f"multiaffine factors of {q} do not multiply back")
    return Certificate(KIND_MA, target=q, scalar=scalar, factors=sorted(factors, key=_sort_key))


def ma_factorization(
    q: Poly, within_fixed: Optional[bool] = None, support_limit: int = SUPPORT_LIMIT
) -> Optional[Tuple[FieldValue, List[Poly]]]:
    """
    ``(scalar, monic multiaffine factors)`` with exact product ``q``, or None.

    Factors are found over the fixed field when ``q`` has fixed coefficients,
    over the extension otherwise; ``within_fixed`` overrides.
    """
    cert = certify_ma_factorization(q, within_fixed, support_limit)
    if not cert.ok:
        logger.debug("no multiaffine factorization: %s", cert.condition)
        return None
    return cert.scalar, cert.factors


# ---------------------------------------------------------------------------
# Hermitian squares
# ---------------------------------------------------------------------------


def _normalize_witness(g: Poly) -> Poly:
    if g.is_zero():
        return g
    return g.scale(unit_normalizer(g.leading_coeff()))


def _scalar_witness(c: FieldValue, bound: int) -> FieldValue:
    if not c.is_fixed():
        raise _Failed("scalar is not in the fixed field", c)
    w = hermitian_square_scalar(c, bound)
    if w is None:
        raise _Failed("scalar is not a norm", c)
    return w


def _hermitian_exhaustive(q: Poly, bound: int, limit: int) -> Poly:
    _check_char2_support(q, limit)
    if q.is_constant():
        return Poly.constant(q.field, q.nvars, _scalar_witness(q.constant_term(), bound))
    degs = q.degrees()
    if any(int(d) % 2 for d in degs if d > 0):
        raise _Failed("odd degree in some variable", q)
    box = [int(d) // 2 if d > 0 else 0 for d in degs]
    lead_q = q.leading_term()[0]
    if any(k % 2 for k in lead_q):
        raise _Failed("leading exponent is not even", q)
    for g in _candidates(q.field, q.nvars, box, False, tuple(k // 2 for k in lead_q)):
        p = g * g.conj()
        ratio = q.leading_coeff() / p.leading_coeff()
        if ratio.is_fixed() and p.scale(ratio) == q:
            return g.scale(_scalar_witness(ratio, bound))
    raise _Failed("no Hermitian factor in the exhaustive search", q)


def _hermitian(q: Poly, bound: int, limit: int) -> Poly:
    if q.is_zero():
        return q
    if q.field.characteristic == 2:
        return _hermitian_exhaustive(q, bound, limit)
    if q.is_constant():
        return Poly.constant(q.field, q.nvars, _scalar_witness(q.constant_term(), bound))
    k = min(q.support())
    deg = q.degree(k)
    if deg != 2:
        raise _Failed(f"degree {deg} in x{k + 1} is not 2", q)
    cq = content(q, k)
    e = _hermitian(cq, bound, limit) if not cq.is_constant() else Poly.one(q.field, q.nvars)
    prim = q.exact_div(cq)
    if prim is None:
        raise IdentityViolationError("content does not divide its polynomial")
    dsc = discr(prim, k)
    d_elem = FieldValue.generator(q.field) ** 2
    r = poly_sqrt(dsc.scale(d_elem.inverse()), within_fixed=True)
    if r is None:
        raise _Failed(f"Discr_{{x{k + 1}}}/d is not a square", dsc)
    c0, b, a = prim.coeffs_in(k)
    half = FieldValue(q.field, 2).inverse()
    delta_elem = FieldValue.generator(q.field)
    x = Poly.variable(q.field, q.nvars, k)
    for sign in (1, -1):
        h = (b + r.scale(delta_elem * sign)).scale(half)
        s = gcd(a, h)
        ratio = a.exact_div(s * s.conj())
        if ratio is None or not ratio.is_constant():
            continue
        try:
            w = _scalar_witness(ratio.constant_term(), bound)
        except _Failed:
            continue
        s = s.scale(w)
        tbar = h.exact_div(s)
        if tbar is None:
            continue
        g = s * x + tbar.conj()
        if g * g.conj() == prim:
            return e * g
    lead = a if not a.is_constant() else None
    if lead is not None:
        try:
            _hermitian(lead, bound, limit)
        except _Failed as exc:
            raise _Failed(f"leading coefficient in x{k + 1} is not a Hermitian square: {exc.condition}", a) from None
    raise _Failed(f"coefficient of x{k + 1}^0 or x{k + 1}^2 is not a Hermitian square", prim)


def certify_hermitian_square(
    q: Poly, bound: int = FACTOR_BOUND, support_limit: int = SUPPORT_LIMIT
) -> Certificate:
    """
    Certificate for ``q = g * conj(g)`` with ``g`` over the extension.

    ``q`` must have fixed coefficients. The witness is normalized so that its
    graded-lex leading coefficient is canonical under norm-one units.
    """
    if not q.is_fixed():
        raise ValueError("Hermitian-square test needs fixed-field coefficients")
    if not q.is_multiquadratic():
        return Certificate.refutation("not multiquadratic", q, q)
    try:
        g = _hermitian(q, bound, support_limit)
    except _Failed as exc:
        return Certificate.refutation(exc.condition, q, exc.value, notes=exc.notes)
    g = _normalize_witness(g)
    if g * g.conj() != q:
        raise IdentityViolationError(f"Hermitian witness {g} does not reproduce {q}")
    return Certificate(KIND_HERMITIAN, target=q, factors=[g])


def hermitian_square_factor(
    q: Poly, bound: int = FACTOR_BOUND, support_limit: int = SUPPORT_LIMIT
) -> Optional[Poly]:
    """``g`` over the extension with ``g * conj(g) == q``, or None."""
    cert = certify_hermitian_square(q, bound, support_limit)
    return cert.witness if cert.ok else None


def conjugate_pairs(g: Poly) -> List[Tuple[Poly, Poly]]:
    """Irreducible monic factors ``p`` of a multiaffine ``g`` paired with monic ``conj(p)``."""
    _, factors = ma_irreducible_factorization(g)
    return [(p, p.conj().monic()[1]) for p in factors]


# ---------------------------------------------------------------------------
# hyperdeterminant and the certificate family
# ---------------------------------------------------------------------------


def hyperdet_values(v: Sequence[FieldValue]) -> FieldValue:
    """
    Cayley's 2x2x2 hyperdeterminant of eight values indexed by subsets of {1,2,3}.

    ``v[mask]`` is ``a_S`` for the bitmask of ``S``. Both the factored and the
    expanded form are evaluated and must agree.
    """
    e, a1, a2, a12, a3, a13, a23, a123 = (v[m] for m in range(8))
    first = (a1 * a23 + a2 * a13 - a3 * a12 - e * a123) ** 2 - (a1 * a2 - e * a12) * (a13 * a23 - a3 * a123) * 4
    second = (
        e * e * a123 * a123 + a1 * a1 * a23 * a23 + a2 * a2 * a13 * a13 + a3 * a3 * a12 * a12
        - e * a1 * a23 * a123 * 2 - e * a2 * a13 * a123 * 2 - e * a3 * a12 * a123 * 2
        - a1 * a2 * a13 * a23 * 2 - a1 * a3 * a12 * a23 * 2 - a2 * a3 * a12 * a13 * 2
        + e * a23 * a13 * a12 * 4 + a123 * a1 * a2 * a3 * 4
    )
    if first != second:
        raise IdentityViolationError("the two hyperdeterminant forms disagree")
    return first


def hyperdet(a: "MinorVector") -> FieldValue:
    """Hyperdeterminant of a minor vector with ``n = 3``."""
    if a.n != 3:
        raise ValueError(f"hyperdeterminant needs n = 3, got n = {a.n}")
    return hyperdet_values(a.values)


@dataclass(frozen=True)
class FamilyCondition:
    """One degree-12 condition: ``op`` of the quartic ``Discr_{x_k}(Delta_ij)`` in ``x_l`` at ``lam``."""

    pair: Tuple[int, int]
    k: int
    l: int
    op: str
    rest: Tuple[int, ...]
    lam: Tuple[int, ...]

    @property
    def name(self) -> str:
        i, j = self.pair
        lam = ",".join(str(x) for x in self.lam)
        return f"{self.op}_{{x{self.l + 1}}}(Discr_{{x{self.k + 1}}}(Delta_{{{i + 1}{j + 1}}})) at lambda=({lam})"


FAMILY_OPS = ("B", "C", "D", "C*", "D*")


def certificate_family(
    n: int, field: Optional[FieldId] = None, points: Optional[Sequence[int]] = None
) -> List[FamilyCondition]:
    """
    The finite family of degree-12 conditions for ``n x n`` minor vectors.

    For every pair ``i < j``, every ordered pair ``(k, l)`` of the remaining
    indices and every ``lam`` in ``points^(n-4)`` assigned to the other
    variables: ``B, C, D`` and the two mirror cubics of the quartic in ``x_l``
    given by ``Discr_{x_k}(Delta_ij f_a)``. Each condition has degree at most 12
    in every specialized variable, so 13 points per variable certify the
    polynomial identity. For ``n = 3`` the family is empty and only the
    hyperdeterminant conditions remain.

    Raises
    ------
    ValueError
        If ``n < 3`` or fewer than 13 of ``points`` are distinct in ``field``.
    """
    if n < 3:
        raise ValueError("the certificate family needs n >= 3")
    pts = list(range(CERTIFICATE_POINTS)) if points is None else list(points)
    distinct = {FieldValue(field, x) for x in pts} if field is not None else set(pts)
    if len(distinct) < CERTIFICATE_POINTS:
        where = f" in {field.name}" if field is not None else ""
        raise ValueError(f"need {CERTIFICATE_POINTS} distinct points{where}, got {len(distinct)}")
    out: List[FamilyCondition] = []
    for i, j in combinations(range(n), 2):
        others = [v for v in range(n) if v not in (i, j)]
        for k, l in permutations(others, 2):
            rest = tuple(v for v in others if v not in (k, l))
            for lam in product(pts, repeat=len(rest)):
                for op in FAMILY_OPS:
                    out.append(FamilyCondition((i, j), k, l, op, rest, tuple(lam)))
    return out


def _family_polys(f: Poly, i: int, j: int, k: int, l: int) -> Dict[str, Poly]:
    dq = discr(delta(f, i, j), k)
    cs = dq.coeffs_in(l) if not dq.is_zero() else []
    zero = Poly.zero(f.field, f.nvars)
    if len(cs) > 5:
        raise IdentityViolationError("discriminant of a Rayleigh difference has degree > 4")
    cs = cs + [zero] * (5 - len(cs))
    b0, b1, b2, b3, b4 = cs
    B, C, D = _bcd(b0, b1, b2, b3, b4)
    _, Ci, Di = _bcd(b4, -b3, b2, -b1, b0)
    return {"B": B, "C": C, "D": D, "C*": -Ci, "D*": Di}


def evaluate_family(f: Poly, conditions: Sequence[FamilyCondition]) -> List[Tuple[FamilyCondition, FieldValue]]:
    """Values of the family conditions on the multiaffine polynomial ``f = f_a``."""
    cache: Dict[Tuple[int, int, int, int], Dict[str, Poly]] = {}
    out = []
    for cond in conditions:
        key = (cond.pair[0], cond.pair[1], cond.k, cond.l)
        if key not in cache:
            cache[key] = _family_polys(f, *key)
        poly = cache[key][cond.op]
        val = poly.evaluate(dict(zip(cond.rest, cond.lam)))
        if not val.is_constant():
            raise IdentityViolationError(f"{cond.name} did not specialize to a constant")
        out.append((cond, val.constant_term()))
    return out


# ---------------------------------------------------------------------------
# scalar conditions
# ---------------------------------------------------------------------------

MODE_EXACT = "exact"
MODE_REAL = "real"


def scalar_condition_values(f: Poly) -> Tuple[FieldValue, Optional[FieldValue]]:
    """
    ``(a1 a2 - a0 a12, HypDet)`` read from the literal coefficients of ``f``.

    ``a_T`` is the coefficient of ``x^{[n] \\ T}``; the hyperdeterminant uses
    the subsets of ``{1, 2, 3}`` and is None for ``n < 3``.
    """
    n = f.nvars

    def coeff(mask: int) -> FieldValue:
        return f.coeff(tuple(0 if (mask >> v) & 1 else 1 for v in range(n)))

    first = coeff(1) * coeff(2) - coeff(0) * coeff(3)
    if n < 3:
        return first, None
    return first, hyperdet_values([coeff(m) for m in range(8)])


def check_norm_condition(value: FieldValue, mode: str = MODE_EXACT, bound: int = FACTOR_BOUND) -> bool:
    """``value`` is a Hermitian square (exact) or nonnegative (real closure)."""
    if mode == MODE_REAL:
        return value.sign() >= 0
    return hermitian_square_scalar(value, bound) is not None


def check_hyperdet_condition(value: FieldValue, mode: str = MODE_EXACT) -> bool:
    """``value / d`` is a square in the fixed field (exact) or ``value <= 0`` (real closure)."""
    if mode == MODE_REAL:
        return value.sign() <= 0
    if value.field.characteristic == 2:
        return True
    d_elem = FieldValue.generator(value.field) ** 2
    return sqrt_in_fixed_field(value / d_elem) is not None
