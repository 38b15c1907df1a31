"""
Rayleigh differences, resultants and symbolic determinants.

``delta(f, i, j) = f_i f_j - f f_ij`` measures how far ``f`` is from splitting
across ``x_i`` and ``x_j``. The degree-dependent resultant ``res_k`` and the
maps ``phi_i(g) = Res_{x_i}(g, f)`` transport factorizations of Rayleigh
differences between index pairs. Determinants of matrices with polynomial
entries use fraction-free Bareiss elimination.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .errors import IdentityViolationError
from .exactfield import FieldId, FieldValue
from .mpoly import Poly

logger = logging.getLogger(__name__)

PolyMatrix = List[List[Poly]]


def delta(f: Poly, i: int, j: int) -> Poly:
    """
    Rayleigh difference ``d_i f * d_j f - f * d_i d_j f``.

    When ``f`` is multiaffine in ``x_i`` and ``x_j`` the result is re-derived
    from slices as ``f_i^j f_j^i - f^{ij} f_{ij}`` and both must agree.

    Raises
    ------
    ValueError
        If ``i == j``.
    IdentityViolationError
        If the two formulas disagree.
    """
    if i == j:
        raise ValueError("Rayleigh difference needs two distinct indices")
    fi = f.derivative(i)
    fj = f.derivative(j)
    d = fi * fj - f * fi.derivative(j)
    if f.is_multiaffine([i, j]):
        via_slices = f.slice([i], [j]) * f.slice([j], [i]) - f.slice([], [i, j]) * f.slice([i, j], [])
        if via_slices != d:
            raise IdentityViolationError(f"slice identity fails for Delta_{{{i + 1}{j + 1}}}")
    return d


def splits(f: Poly, i: int, j: int) -> bool:
    """True when ``f`` factors with ``x_i`` and ``x_j`` in different factors."""
    return delta(f, i, j).is_zero()


def res_k(g: Poly, h: Poly, k: int) -> Poly:
    """Degree-dependent resultant ``g|_{x_k=0} * d_k h - h|_{x_k=0} * d_k g``."""
    return g.specialize(k, 0) * h.derivative(k) - h.specialize(k, 0) * g.derivative(k)


def resultant(a: Poly, b: Poly, k: int) -> Poly:
    """Classical ``Res_{x_k}(a, b)`` for ``b`` of degree one in ``x_k``."""
    if b.degree(k) != 1:
        raise ValueError(f"second argument must have degree 1 in x{k + 1}")
    if a.is_zero():
        return a
    b0, b1 = b.coeffs_in(k)
    coeffs = a.coeffs_in(k)
    d = len(coeffs) - 1
    total = Poly.zero(a.field, a.nvars)
    nb0 = -b0
    for j, aj in enumerate(coeffs):
        if aj.is_zero():
            continue
        total = total + aj * (nb0 ** j) * (b1 ** (d - j))
    return total


def phi(g: Poly, f: Poly, i: int) -> Poly:
    """``phi_i(g) = Res_{x_i}(g, f)``; ``f`` must have degree exactly one in ``x_i``."""
    if f.degree(i) != 1:
        raise ValueError(f"phi_{i + 1} needs f of degree 1 in x{i + 1}")
    return resultant(g, f, i)


# ---------------------------------------------------------------------------
# symbolic matrices
# ---------------------------------------------------------------------------


def symbolic_matrix(A: Sequence[Sequence[FieldValue]], field: Optional[FieldId] = None) -> PolyMatrix:
    """``diag(x_1, ..., x_n) + A`` as a matrix of polynomials in ``n`` variables."""
    n = len(A)
    fid = field if field is not None else A[0][0].field
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = Poly.constant(fid, n, A[i][j])
            if i == j:
                entry = entry + Poly.variable(fid, n, i)
            row.append(entry)
        rows.append(row)
    return rows


def poly_det(M: PolyMatrix, field: Optional[FieldId] = None, nvars: Optional[int] = None) -> Poly:
    """Fraction-free Bareiss determinant with exact polynomial division."""
    n = len(M)
    if n == 0:
        if field is None or nvars is None:
            raise ValueError("field and nvars are required for an empty matrix")
        return Poly.one(field, nvars)
    A = [row[:] for row in M]
    fid, nv = A[0][0].field, A[0][0].nvars
    sign = 1
    prev = Poly.one(fid, nv)
    for k in range(n - 1):
        if A[k][k].is_zero():
            swap = next((r for r in range(k + 1, n) if not A[r][k].is_zero()), None)
            if swap is None:
                return Poly.zero(fid, nv)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        pivot = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * pivot - A[i][k] * A[k][j]
                q = num.exact_div(prev)
                if q is None:
                    raise IdentityViolationError("Bareiss step is not an exact division")
                A[i][j] = q
        prev = pivot
    det = A[n - 1][n - 1]
    return -det if sign < 0 else det


def drop(M: Sequence[Sequence], rows: Sequence[int], cols: Sequence[int]):
    """Submatrix with the listed rows and columns removed."""
    rs, cs = set(rows), set(cols)
    return [[x for c, x in enumerate(row) if c not in cs] for r, row in enumerate(M) if r not in rs]


def minor(M: PolyMatrix, rows: Sequence[int], cols: Sequence[int]) -> Poly:
    sample = M[0][0]
    return poly_det(drop(M, rows, cols), sample.field, sample.nvars)


def adjugate(M: PolyMatrix) -> PolyMatrix:
    """``adj(M)[i][j] = (-1)^{i+j} det M(j, i)``."""
    n = len(M)
    sample = M[0][0]
    if n == 1:
        return [[Poly.one(sample.field, sample.nvars)]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            m = minor(M, [j], [i])
            out[i][j] = -m if (i + j) % 2 else m
    return out


def delta_from_minors(M: PolyMatrix, i: int, j: int) -> Tuple[Poly, Poly]:
    """
    ``(det M(i,j), det M(j,i))`` for ``M = diag(x) + A``.

    Their product is checked against ``delta(det M, i, j)``.
    """
    f = poly_det(M)
    gij = minor(M, [i], [j])
    gji = minor(M, [j], [i])
    if gij * gji != delta(f, i, j):
        raise IdentityViolationError(f"Desnanot-Jacobi identity fails at ({i + 1},{j + 1})")
    return gij, gji


def dodgson_identity(M: PolyMatrix, i: int, j: int, k: int, l: int) -> Tuple[Poly, Poly]:
    """
    Both sides of ``det M(i,k) det M(j,l) - det M det M({i,j},{k,l}) = det M(i,l) det M(j,k)``.

    The row pair and the column pair must be ordered the same way.
    """
    if i == j or k == l:
        raise ValueError("row and column indices must be distinct")
    if (i < j) != (k < l):
        raise ValueError("row pair and column pair must have the same orientation")
    lhs = minor(M, [i], [k]) * minor(M, [j], [l]) - poly_det(M) * minor(M, [i, j], [k, l])
    rhs = minor(M, [i], [l]) * minor(M, [j], [k])
    return lhs, rhs


# ---------------------------------------------------------------------------
# structural assumptions
# ---------------------------------------------------------------------------


@dataclass
class AssumptionReport:
    """Outcome of checking the structural assumptions behind the Hermitian construction."""

    irreducible: bool
    multiaffine: bool
    top_coefficient: bool
    hermitian_squares: bool
    derivatives_irreducible: bool
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_assumptions(f: Poly, hermitian: bool = True) -> AssumptionReport:
    """
    Check irreducibility, multiaffinity, a nonzero top coefficient, Hermitian-square
    Rayleigh differences and irreducible partial derivatives.

    ``hermitian=False`` skips the Hermitian-square test (it is expensive and
    callers often certify the Rayleigh differences themselves).
    """
    from .squares import certify_hermitian_square, ma_irreducible_factorization

    n = f.nvars
    failures: List[str] = []
    multiaffine = f.is_multiaffine()
    if not multiaffine:
        failures.append("not multiaffine")
    top = not f.coeff((1,) * n).is_zero()
    if not top:
        failures.append("coefficient of x1*...*xn vanishes")
    irreducible = multiaffine and f.support() == set(range(n))
    if irreducible:
        _, factors = ma_irreducible_factorization(f)
        irreducible = len(factors) == 1
    if not irreducible:
        failures.append("f is reducible")
    squares = True
    if hermitian and multiaffine:
        for i, j in combinations(range(n), 2):
            if not certify_hermitian_square(delta(f, i, j)).ok:
                failures.append(f"Delta_{{{i + 1}{j + 1}}} is not a Hermitian square")
                squares = False
                break
    derivs = True
    if multiaffine:
        for i in range(n):
            d = f.derivative(i)
            if d.is_zero():
                derivs = False
            elif not d.is_constant():
                _, factors = ma_irreducible_factorization(d)
                derivs = len(factors) <= 1
            if not derivs:
                failures.append(f"d f / d x{i + 1} is reducible")
                break
    logger.debug("assumption check: %s", failures or "all hold")
    return AssumptionReport(irreducible, multiaffine, top, squares, derivs, failures)
