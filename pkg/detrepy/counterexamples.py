"""
The odd-variable family of polynomials outside the image of the principal minor map.

``f_{2n+1} = x1 * prod_j (x_{2j+1} x_{2j+2} + 1) + prod_j (x_{2j} x_{2j+1} + 1)``
with ``x_{2n+2} = x2``. Its Rayleigh difference ``Delta_12`` factors along an
odd cycle, so it never splits into two multiaffine polynomials, yet every
specialization of a single variable is determinantal. Indices in this module
are 1-based where they name variables of ``f_{2n+1}``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .detrep import is_in_image_general, poly_to_minors, principal_minors
from .errors import BoundExceededError
from .exactfield import FieldId, FieldValue
from .mpoly import Poly
from .rayleigh import delta
from .squares import Certificate, ma_factorization
from .utils import Matrix, zeros

logger = logging.getLogger(__name__)

FAMILY_BOUND = 4


@dataclass
class FamilyInstance:
    """``f_{2n+1}`` with its ``Delta_12`` factorization computed on first use."""

    n: int
    f: Poly
    _delta_factors: Optional[List[Poly]] = field(default=None, repr=False)

    @property
    def nvars(self) -> int:
        return 2 * self.n + 1

    @property
    def delta12(self) -> Poly:
        return delta(self.f, 0, 1)

    @property
    def delta12_factors(self) -> List[Poly]:
        if self._delta_factors is None:
            fac = ma_factorization(self.delta12)
            if fac is None:
                raise ValueError("Delta_12 of the family is not a product of multiaffine polynomials")
            self._delta_factors = fac[1]
        return self._delta_factors


def family(n: int, field_id: Optional[FieldId] = None) -> FamilyInstance:
    """``f_{2n+1}`` over ``field_id`` (default ``Q`` inside ``Q(i)``)."""
    if n < 2:
        raise ValueError("the family starts at n = 2")
    fid = field_id or FieldId.gaussian()
    m = 2 * n + 1

    def x(i: int) -> Poly:
        # x_{2n+2} is x_2
        return Poly.variable(fid, m, 1 if i == m + 1 else i - 1)

    one = Poly.one(fid, m)
    first, second = one, one
    for j in range(1, n + 1):
        first = first * (x(2 * j + 1) * x(2 * j + 2) + 1)
        second = second * (x(2 * j) * x(2 * j + 1) + 1)
    f = x(1) * first + second
    return FamilyInstance(n, f)


def expected_delta12(n: int, field_id: Optional[FieldId] = None) -> Poly:
    """``(x3 - x_{2n+1}) * prod_{i=3}^{2n} (x_i x_{i+1} + 1)``."""
    fid = field_id or FieldId.gaussian()
    m = 2 * n + 1
    x = [Poly.variable(fid, m, i) for i in range(m)]
    out = x[2] - x[m - 1]
    for i in range(3, 2 * n + 1):
        out = out * (x[i - 1] * x[i] + 1)
    return out


def _as_value(field_id: FieldId, t) -> FieldValue:
    return t if isinstance(t, FieldValue) else FieldValue(field_id, t)


def first_variable_matrix(n: int, t, field_id: Optional[FieldId] = None) -> Matrix:
    """
    ``A`` with ``det(diag(x_2..x_{2n+1}) + A) = f_{2n+1}(t, x_2, ...) / (1 + t)``.

    Rows and columns are indexed by ``2..2n+1``.

    Raises
    ------
    ValueError
        If ``t = -1``.
    """
    if n < 2:
        raise ValueError("the family starts at n = 2")
    fid = field_id or (t.field if isinstance(t, FieldValue) else FieldId.gaussian())
    tv = _as_value(fid, t)
    if (tv + 1).is_zero():
        raise ValueError("t = -1 is a pole")
    inv = (tv + 1).inverse()
    size = 2 * n
    top = 2 * n + 1
    A = zeros(fid, size)
    for i in range(2, top + 1):
        for j in range(2, top + 1):
            if i % 2 == 1 and j % 2 == 0:
                value = inv if i > j else -tv * inv
            elif i % 2 == 0 and j == i + 1:
                value = FieldValue(fid, -1)
            elif i % 2 == 0 and j == i - 1:
                value = FieldValue.one(fid)
            else:
                continue
            A[i - 2][j - 2] = value
    A[0][top - 2] = -tv
    return A


def _moving_base(n: int, tv: FieldValue) -> Matrix:
    # x_{2n+1} := t, rows and columns indexed by 1..2n
    fid = tv.field
    size = 2 * n
    inv = tv.inverse()
    one, minus = FieldValue.one(fid), FieldValue(fid, -1)
    B = zeros(fid, size)
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            value = None
            if (i, j) in ((1, 1), (2, 1)) or (j == i + 1 and i > 1) or (i % 2 == 1 and i >= 3 and j % 2 == 0 and j > i):
                value = one
            elif (i % 2 == 0 and j == i - 1) or (i, j) == (size, 1):
                value = minus
            elif i % 2 == 1 and i >= 3 and j == 1:
                value = tv
            elif i in (1, 2) and j % 2 == 0:
                value = inv
            if value is not None:
                B[i - 1][j - 1] = value
    return B


def _dihedral_elements(n: int) -> List[Tuple[int, ...]]:
    # 0-based permutations of [2n+1] fixing x1, generated by k -> k+2 and k -> 2n+3-k on 2..2n+1
    m = 2 * n + 1

    def rotate(k: int) -> int:
        return k if k == 1 else (k - 2 + 2) % (2 * n) + 2

    def reflect(k: int) -> int:
        return k if k == 1 else 2 * n + 3 - k

    seen = {tuple(range(m))}
    frontier = [tuple(range(m))]
    while frontier:
        perm = frontier.pop()
        for gen in (rotate, reflect):
            nxt = tuple(gen(perm[i] + 1) - 1 for i in range(m))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return sorted(seen)


def symmetry_moving(n: int, m: int) -> Tuple[int, ...]:
    """0-based symmetry ``pi`` of ``f_{2n+1}`` with ``pi(2n+1) = m``."""
    inst = family(n)
    for perm in _dihedral_elements(n):
        if perm[2 * n] == m - 1 and inst.f.relabel(perm) == inst.f:
            return perm
    raise ValueError(f"no symmetry moves x{2 * n + 1} to x{m}")


def moving_variable_matrix(n: int, m: int, t, field_id: Optional[FieldId] = None) -> Matrix:
    """
    ``B`` with ``det(diag(x_i : i != m) + B) = f_{2n+1}|_{x_m = t} / t``.

    Rows and columns follow the remaining variables in increasing order. For
    ``m < 2n+1`` the matrix for ``x_{2n+1}`` is relabeled by a dihedral
    symmetry of ``f_{2n+1}`` sending ``2n+1`` to ``m``.

    Raises
    ------
    ValueError
        If ``m`` is outside ``2..2n+1`` or ``t = 0``.
    """
    if n < 2:
        raise ValueError("the family starts at n = 2")
    if not 2 <= m <= 2 * n + 1:
        raise ValueError(f"m must lie in 2..{2 * n + 1}, got {m}")
    fid = field_id or (t.field if isinstance(t, FieldValue) else FieldId.gaussian())
    tv = _as_value(fid, t)
    if tv.is_zero():
        raise ValueError("t = 0 is a pole")
    B = _moving_base(n, tv)
    if m == 2 * n + 1:
        return B
    perm = symmetry_moving(n, m)
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    rest = [v for v in range(2 * n + 1) if v != m - 1]
    return [[B[inv[r]][inv[c]] for c in rest] for r in rest]


def specialized(inst: FamilyInstance, m: int, t) -> Poly:
    """``f|_{x_m = t}`` divided by its pole factor, in the remaining ``2n`` variables."""
    fid = inst.f.field
    tv = _as_value(fid, t)
    scale = (tv + 1) if m == 1 else tv
    rest = [v for v in range(inst.nvars) if v != m - 1]
    return inst.f.specialize(m - 1, tv).extract_vars(rest).scale(scale.inverse())


@dataclass
class SpecializationOutcome:
    m: int
    t: str
    ok: bool


@dataclass
class FamilyVerification:
    """Outcome of :func:`verify_family`."""

    n: int
    refutation: Optional[Certificate]
    cycle: List[str]
    checks: List[SpecializationOutcome] = field(default_factory=list)

    @property
    def refuted(self) -> bool:
        return self.refutation is not None and not self.refutation.ok

    @property
    def specializations_ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def passed(self) -> bool:
        return self.refuted and self.specializations_ok


def check_specialization(inst: FamilyInstance, m: int, t) -> bool:
    """Minors of the explicit matrix for ``x_m := t`` equal the specialized coefficients."""
    n = inst.n
    M = first_variable_matrix(n, t, inst.f.field) if m == 1 else moving_variable_matrix(n, m, t, inst.f.field)
    return principal_minors(M).values == poly_to_minors(specialized(inst, m, t)).values


def verify_family(n: int, family_bound: int = FAMILY_BOUND, points: Optional[Sequence[int]] = None) -> FamilyVerification:
    """
    Check that ``f_{2n+1}`` is outside the image while each one-variable
    specialization is inside it.

    The general image search must refute ``f_{2n+1}``; for every variable
    ``x_m`` and ``2n + 3`` values of ``t`` the explicit matrices must have the
    specialized coefficients as principal minors. Every coefficient is affine
    in ``x_m`` once the pole is cleared, so these points prove the identity.

    Raises
    ------
    BoundExceededError
        If ``n`` exceeds ``family_bound``.
    """
    if n > family_bound:
        raise BoundExceededError("n for family verification", n, family_bound)
    inst = family(n)
    cycle = [str(p) for p in inst.delta12_factors]
    result = is_in_image_general(poly_to_minors(inst.f), search_bound=inst.nvars)
    refutation = result if isinstance(result, Certificate) else None
    if refutation is None:
        logger.warning("f_%d unexpectedly lies in the image", inst.nvars)
    report = FamilyVerification(n, refutation, cycle)
    pts = list(points) if points is not None else list(range(1, 2 * n + 4))
    if len(set(pts)) < 2 * n + 3:
        raise ValueError(f"need {2 * n + 3} distinct points")
    for m in range(1, inst.nvars + 1):
        for t in pts:
            ok = check_specialization(inst, m, t)
            report.checks.append(SpecializationOutcome(m, str(t), ok))
        logger.info("x%d specializations checked", m)
    return report
