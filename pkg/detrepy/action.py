"""
The action of ``SL2(F)^n x| S_n`` on polynomials and matrices.

A :class:`GroupElement` carries one :class:`SL2` per variable and a
permutation. The permutation acts first, renaming ``x_i`` to
``x_{perm[i]}``; then each ``gamma_k`` acts on ``x_k`` by

    ``f -> (c x_k + d)^{d_k} f(..., (a x_k + b) / (c x_k + d), ...)``

computed on the multihomogenization as a linear change of coordinates, so no
rational functions appear. On matrices the action is defined through the
adjugate: ``beta (diag(x) + B) = (gamma.f)^{2-n} (gamma.G)^adj`` with
``G = adj(diag(x) + A)``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import ActionUndefinedError, FieldMismatchError, IdentityViolationError, ParseError
from .exactfield import FieldId, FieldValue, as_value, format_value, parse_value
from .mpoly import Poly
from .utils import Matrix, parse_nested

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SL2:
    """A 2x2 matrix ``[[a, b], [c, d]]`` over the fixed field with ``ad - bc = 1``."""

    a: FieldValue
    b: FieldValue
    c: FieldValue
    d: FieldValue

    def __post_init__(self):
        fields = {x.field for x in (self.a, self.b, self.c, self.d)}
        if len(fields) != 1:
            raise ValueError("SL2 entries must share one field")
        if not all(x.is_fixed() for x in (self.a, self.b, self.c, self.d)):
            raise ValueError("SL2 entries must lie in the fixed field")
        if not (self.a * self.d - self.b * self.c).is_one():
            raise ValueError("SL2 element must have determinant 1")

    @property
    def field(self) -> FieldId:
        return self.a.field

    @classmethod
    def from_entries(cls, field: FieldId, a, b, c, d) -> "SL2":
        return cls(as_value(field, a), as_value(field, b), as_value(field, c), as_value(field, d))

    @classmethod
    def identity(cls, field: FieldId) -> "SL2":
        return cls.from_entries(field, 1, 0, 0, 1)

    @classmethod
    def translation(cls, field: FieldId, t) -> "SL2":
        """``x -> x + t``."""
        return cls.from_entries(field, 1, t, 0, 1)

    @classmethod
    def inversion(cls, field: FieldId) -> "SL2":
        """``[[0, 1], [-1, 0]]``, sending ``x -> -1/x``."""
        return cls.from_entries(field, 0, 1, -1, 0)

    def __matmul__(self, other: "SL2") -> "SL2":
        return SL2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "SL2":
        return SL2(self.d, -self.b, -self.c, self.a)

    def is_identity(self) -> bool:
        return self.a.is_one() and self.d.is_one() and self.b.is_zero() and self.c.is_zero()

    def is_translation(self) -> bool:
        return self.a.is_one() and self.d.is_one() and self.c.is_zero()

    def entries(self) -> List[List[FieldValue]]:
        return [[self.a, self.b], [self.c, self.d]]


@dataclass(frozen=True)
class GroupElement:
    """An element of ``SL2(F)^n x| S_n``: per-variable ``gammas`` and a 0-based ``perm``."""

    gammas: Tuple[SL2, ...]
    perm: Tuple[int, ...]

    def __post_init__(self):
        if len(self.gammas) != len(self.perm):
            raise ValueError(f"{len(self.gammas)} SL2 factors for a permutation of {len(self.perm)}")
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"{list(self.perm)} is not a permutation")
        if len({g.field for g in self.gammas}) > 1:
            raise ValueError("group element mixes fields")

    @property
    def n(self) -> int:
        return len(self.perm)

    @property
    def field(self) -> FieldId:
        return self.gammas[0].field

    @classmethod
    def identity(cls, field: FieldId, n: int) -> "GroupElement":
        return cls(tuple(SL2.identity(field) for _ in range(n)), tuple(range(n)))

    @classmethod
    def single(cls, field: FieldId, n: int, k: int, gamma: SL2) -> "GroupElement":
        """``gamma`` on ``x_k``, identity elsewhere."""
        gammas = [SL2.identity(field)] * n
        gammas[k] = gamma
        return cls(tuple(gammas), tuple(range(n)))

    @classmethod
    def permutation(cls, field: FieldId, perm: Sequence[int]) -> "GroupElement":
        return cls(tuple(SL2.identity(field) for _ in perm), tuple(perm))

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.n)) and all(g.is_identity() for g in self.gammas)

    def inverse_perm(self) -> Tuple[int, ...]:
        inv = [0] * self.n
        for i, p in enumerate(self.perm):
            inv[p] = i
        return tuple(inv)

    def __str__(self) -> str:
        return format_group_element(self)


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """
    The element acting as ``g1`` after ``g2``.

    ``act_on_poly(compose(g1, g2), f, d) == act_on_poly(g1, act_on_poly(g2, f, d), d')``
    where ``d'`` is ``d`` carried through ``g2``'s permutation.
    """
    if g1.n != g2.n:
        raise ValueError(f"cannot compose elements of sizes {g1.n} and {g2.n}")
    inv1 = g1.inverse_perm()
    # per variable, the factor applied first multiplies on the left
    gammas = tuple(g2.gammas[inv1[v]] @ g1.gammas[v] for v in range(g1.n))
    perm = tuple(g1.perm[g2.perm[i]] for i in range(g1.n))
    return GroupElement(gammas, perm)


def inverse(g: GroupElement) -> GroupElement:
    inv = g.inverse_perm()
    gammas = tuple(g.gammas[g.perm[u]].inverse() for u in range(g.n))
    return GroupElement(gammas, inv)


# ---------------------------------------------------------------------------
# action on polynomials
# ---------------------------------------------------------------------------


def _permute_degrees(perm: Sequence[int], d: Sequence[int]) -> List[int]:
    out = [0] * len(d)
    for i, k in enumerate(d):
        out[perm[i]] = k
    return out


def _apply_gammas(gammas: Sequence[SL2], f: Poly, d: Sequence[int]) -> Poly:
    n = f.nvars
    if all(g.is_identity() for g in gammas):
        return f
    H = f.multihomogenize(d)
    subs = {}
    for k, g in enumerate(gammas):
        if g.is_identity() or d[k] == 0:
            continue
        x = Poly.variable(f.field, 2 * n, k)
        y = Poly.variable(f.field, 2 * n, n + k)
        subs[k] = x * g.a + y * g.b
        subs[n + k] = x * g.c + y * g.d
    H = H.compose(subs)
    for k in range(n):
        H = H.specialize(n + k, 1)
    return H.truncate(n)


def act_on_poly(g: GroupElement, f: Poly, d: Optional[Sequence[int]] = None) -> Poly:
    """
    ``g . f`` treating ``f`` as a polynomial of multidegree ``d``.

    ``d`` defaults to the degree vector of ``f``. The permutation is applied
    first, so the degree bound of the result is ``d`` permuted.

    Raises
    ------
    ValueError
        If ``deg_i f > d_i`` for some ``i`` or the sizes disagree.
    """
    if g.n != f.nvars:
        raise ValueError(f"group element of size {g.n} on a polynomial in {f.nvars} variables")
    if g.gammas and f.field != g.field:
        raise FieldMismatchError(f"group element over {g.field} acting on a {f.field} polynomial")
    if d is None:
        d = [max(int(k), 0) if not f.is_zero() else 0 for k in f.degrees()]
    if len(d) != f.nvars:
        raise ValueError(f"degree vector has length {len(d)}, expected {f.nvars}")
    if f.is_zero():
        return f
    for i, k in enumerate(f.degrees()):
        if k > d[i]:
            raise ValueError(f"deg_{i + 1} f = {k} exceeds the declared degree {d[i]}")
    h = f
    if g.perm != tuple(range(g.n)):
        h = f.relabel(g.perm)
        d = _permute_degrees(g.perm, d)
    return _apply_gammas(g.gammas, h, d)


def diagonal_conjugate(A: Sequence[Sequence[FieldValue]], lam: Sequence[FieldValue]) -> Matrix:
    """``D^{-1} A D`` for ``D = diag(lam)``: entry ``a_ij * lam_j / lam_i``."""
    n = len(A)
    if len(lam) != n:
        raise ValueError(f"need {n} scaling factors, got {len(lam)}")
    if any(x.is_zero() for x in lam):
        raise ValueError("diagonal scaling factors must be nonzero")
    inv = [x.inverse() for x in lam]
    return [[A[i][j] * lam[j] * inv[i] for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# action on matrices
# ---------------------------------------------------------------------------


def permute_matrix(A: Sequence[Sequence[FieldValue]], perm: Sequence[int]) -> Matrix:
    """The matrix whose charpoly is the relabeled charpoly: ``B[perm[i]][perm[j]] = A[i][j]``."""
    n = len(A)
    out: List[List[Optional[FieldValue]]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[perm[i]][perm[j]] = A[i][j]
    return out  # type: ignore[return-value]


def act_on_matrix(g: GroupElement, A: Sequence[Sequence[FieldValue]]) -> Tuple[FieldValue, Matrix]:
    """
    Transport ``A`` along ``g``.

    Returns ``(beta, B)`` with ``g . det(diag(x) + A) = beta * det(diag(x) + B)``
    where ``beta`` is the coefficient of ``x_1 ... x_n`` in the left side.

    Raises
    ------
    ActionUndefinedError
        If ``beta = 0``.
    IdentityViolationError
        If the adjugate construction does not reproduce ``g . f``.
    """
    from .rayleigh import adjugate, poly_det, symbolic_matrix

    n = len(A)
    if n != g.n:
        raise ValueError(f"group element of size {g.n} on a {n}x{n} matrix")
    field = A[0][0].field
    if g.is_identity():
        return FieldValue.one(field), [list(row) for row in A]
    Ap = permute_matrix(A, g.perm) if g.perm != tuple(range(n)) else [list(row) for row in A]
    X = symbolic_matrix(Ap, field)
    f = poly_det(X)
    gf = _apply_gammas(g.gammas, f, [1] * n)
    beta = gf.coeff((1,) * n)
    if beta.is_zero():
        raise ActionUndefinedError("action undefined at this matrix: coefficient of x1*...*xn vanishes")
    if n == 1:
        b = gf.constant_term() / beta
        return beta, [[b]]
    G = adjugate(X)
    gG = []
    for i in range(n):
        row = []
        for j in range(n):
            d = [0 if k in (i, j) else 1 for k in range(n)]
            row.append(_apply_gammas(g.gammas, G[i][j], d))
        gG.append(row)
    M = adjugate(gG)
    if n > 2:
        denom = gf ** (n - 2)
        divided = []
        for row in M:
            new_row = []
            for entry in row:
                q = entry.exact_div(denom)
                if q is None:
                    raise IdentityViolationError("adjugate entry is not divisible by (g.f)^(n-2)")
                new_row.append(q)
            divided.append(new_row)
        M = divided
    inv_beta = beta.inverse()
    B: Matrix = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = M[i][j].scale(inv_beta)
            if i == j:
                entry = entry - Poly.variable(field, n, i)
            if not entry.is_constant():
                raise IdentityViolationError(f"transported entry ({i + 1},{j + 1}) is not constant")
            row.append(entry.constant_term())
        B.append(row)
    if poly_det(symbolic_matrix(B, field)).scale(beta) != gf:
        raise IdentityViolationError("transported matrix does not reproduce g.f")
    logger.debug("transported a %dx%d matrix, beta = %s", n, n, beta)
    return beta, B


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def random_sl2(field: FieldId, rng, bound: int = 5, translation: bool = False) -> SL2:
    """
    Seeded random element with integer entries in ``[-bound, bound]``.

    ``a, b, c`` are drawn and ``d = (1 + bc) / a``; draws with ``a = 0`` in the
    field are rejected.
    """
    while True:
        b = FieldValue(field, int(rng.integers(-bound, bound + 1)))
        if translation:
            return SL2.translation(field, b)
        a = FieldValue(field, int(rng.integers(-bound, bound + 1)))
        c = FieldValue(field, int(rng.integers(-bound, bound + 1)))
        if a.is_zero():
            continue
        return SL2(a, b, c, (b * c + 1) / a)


def random_group_element(
    field: FieldId,
    n: int,
    rng,
    bound: int = 5,
    translations_only: bool = False,
    permute: bool = False,
) -> GroupElement:
    gammas = tuple(random_sl2(field, rng, bound, translation=translations_only) for _ in range(n))
    perm = tuple(int(k) for k in rng.permutation(n)) if permute else tuple(range(n))
    return GroupElement(gammas, perm)


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

_PART = re.compile(r"^\s*(perm|g(\d+))\s*=\s*(.+?)\s*$", re.DOTALL)


def parse_group_element(text: str, field: FieldId, n: Optional[int] = None) -> GroupElement:
    """
    Parse ``"perm=[2,1,3]; g1=[[a,b],[c,d]]; ..."``.

    The permutation is 1-based; omitted ``g_k`` are the identity and an omitted
    ``perm`` is the identity permutation.
    """
    perm: Optional[List[int]] = None
    gammas = {}
    offset = 0
    for part in text.split(";"):
        if not part.strip():
            offset += len(part) + 1
            continue
        m = _PART.match(part)
        if m is None:
            raise ParseError("expected 'perm=[...]' or 'g<k>=[[a,b],[c,d]]'", text, offset, "group-element")
        try:
            value = parse_nested(m.group(3))
        except ParseError as exc:
            raise ParseError(str(exc), text, offset, "group-element") from None
        if m.group(1) == "perm":
            if not isinstance(value, list):
                raise ParseError("permutation must be a list", text, offset, "group-element")
            perm = [int(str(v)) - 1 for v in value]
        else:
            k = int(m.group(2)) - 1
            if k < 0 or not (isinstance(value, list) and len(value) == 2 and all(len(r) == 2 for r in value)):
                raise ParseError("SL2 factor must be a 2x2 matrix", text, offset, "group-element")
            vals = [parse_value(str(x), field) for row in value for x in row]
            gammas[k] = SL2(*vals)
        offset += len(part) + 1
    size = n
    if size is None:
        size = max([len(perm) if perm is not None else 0] + [k + 1 for k in gammas])
    if perm is None:
        perm = list(range(size))
    if len(perm) != size or any(k >= size for k in gammas):
        raise ValueError(f"group element does not match {size} variables")
    return GroupElement(tuple(gammas.get(k, SL2.identity(field)) for k in range(size)), tuple(perm))


def format_group_element(g: GroupElement) -> str:
    parts = ["perm=[" + ",".join(str(p + 1) for p in g.perm) + "]"]
    for k, gamma in enumerate(g.gammas):
        if gamma.is_identity():
            continue
        rows = ",".join("[" + ",".join(format_value(x) for x in row) + "]" for row in gamma.entries())
        parts.append(f"g{k + 1}=[{rows}]")
    return "; ".join(parts)
