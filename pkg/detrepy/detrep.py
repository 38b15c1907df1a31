"""
The principal minor map and its constructive inverses.

A vector of principal minors ``a = (a_S)`` corresponds to the multiaffine
polynomial ``f_a = sum_S a_S prod_{i not in S} x_i``, and ``a`` is the minor
vector of ``A`` exactly when ``f_a = det(diag(x) + A)``. Representations are
rebuilt from compatible factorizations ``Delta_ij(f) = g_ij g_ji`` through
``adj(G) / f^(n-2) = diag(x) + A``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .action import GroupElement, act_on_matrix, act_on_poly, format_group_element, inverse, random_group_element
from .errors import (
    ActionUndefinedError,
    BoundExceededError,
    ConditionViolationError,
    IdentityViolationError,
    RetryBudgetExceededError,
)
from .exactfield import FACTOR_BOUND, FieldId, FieldValue, hermitian_square_scalar, sqrt_in_fixed_field
from .mpoly import Poly, gcd_many
from .rayleigh import PolyMatrix, adjugate, check_assumptions, delta, phi, poly_det, res_k, symbolic_matrix
from .squares import (
    CERTIFICATE_POINTS,
    MODE_EXACT,
    MODE_REAL,
    Certificate,
    certificate_family,
    certify_hermitian_square,
    check_hyperdet_condition,
    check_norm_condition,
    evaluate_family,
    ma_factorization,
    ma_irreducible_factorization,
    scalar_condition_values,
)
from .utils import Matrix, block_diag, det_or_one, is_hermitian, mask_to_set, matrix_rank, principal_submatrix

logger = logging.getLogger(__name__)

GMatrix = PolyMatrix

RETRY_BUDGET = 20
SEARCH_BOUND = 6
SL2_BOUND = 5
BACKTRACK_LIMIT = 64


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass
class MinorVector:
    """Principal minors ``a_S`` indexed by subset bitmask (bit ``i`` set iff ``i + 1`` in ``S``)."""

    n: int
    values: List[FieldValue]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if len(self.values) != 1 << self.n:
            raise ValueError(f"a minor vector for n = {self.n} has {1 << self.n} entries, got {len(self.values)}")
        fields = {v.field for v in self.values}
        if len(fields) != 1:
            raise ValueError("minor vector entries must share one field")

    @property
    def field(self) -> FieldId:
        return self.values[0].field

    def __getitem__(self, mask: int) -> FieldValue:
        return self.values[mask]

    def minor(self, subset: Sequence[int]) -> FieldValue:
        mask = 0
        for i in subset:
            mask |= 1 << i
        return self.values[mask]

    def is_normalized(self) -> bool:
        return self.values[0].is_one()

    def is_fixed(self) -> bool:
        return all(v.is_fixed() for v in self.values)

    def normalized(self) -> "MinorVector":
        """Divide through by ``a_empty``."""
        lead = self.values[0]
        if lead.is_zero():
            raise ValueError("cannot normalize a minor vector with a_empty = 0")
        inv = lead.inverse()
        return MinorVector(self.n, [v * inv for v in self.values])

    @classmethod
    def from_mapping(cls, field_id: FieldId, n: int, minors: Dict[int, FieldValue]) -> "MinorVector":
        missing = [m for m in range(1 << n) if m not in minors]
        if missing:
            raise ValueError(f"missing minors for masks {missing[:5]}")
        return cls(n, [minors[m] if isinstance(minors[m], FieldValue) else FieldValue(field_id, minors[m])
                       for m in range(1 << n)])


@dataclass
class DetRep:
    """A matrix ``A`` with ``f = det(diag(x) + A)``."""

    A: Matrix
    hermitian: bool = False
    field: Optional[FieldId] = None

    def __post_init__(self):
        if self.A and any(len(row) != len(self.A) for row in self.A):
            raise ValueError("DetRep matrix must be square")
        if self.field is None and self.A:
            self.field = self.A[0][0].field
        if self.hermitian and not is_hermitian(self.A):
            raise IdentityViolationError("matrix flagged Hermitian is not conjugate-symmetric")

    @property
    def n(self) -> int:
        return len(self.A)

    def charpoly(self) -> Poly:
        return charpoly(self.A)

    def minors(self) -> MinorVector:
        return principal_minors(self.A)

    def represents(self, f: Poly) -> bool:
        return self.charpoly() == f


@dataclass
class Outcome:
    """A value, or the reason it does not exist."""

    value: object = None
    reason: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.reason is None


# ---------------------------------------------------------------------------
# minors and characteristic polynomials
# ---------------------------------------------------------------------------


def principal_minors(A: Matrix) -> MinorVector:
    """
    All ``2^n`` principal minors of ``A``, with ``A_empty = 1``.

    Parameters
    ----------
    A : list of list of FieldValue
        Square matrix.

    Returns
    -------
    MinorVector
    """
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("principal minors need a square matrix")
    field_id = A[0][0].field
    values = [det_or_one(principal_submatrix(A, mask_to_set(m)), field_id) for m in range(1 << n)]
    return MinorVector(n, values)


def minors_to_poly(a: MinorVector) -> Poly:
    """``f_a = sum_S a_S prod_{i not in S} x_i``."""
    if not a.is_normalized():
        raise ValueError("minors_to_poly needs a_empty = 1")
    n = a.n
    terms = {}
    for mask, v in enumerate(a.values):
        if not v.is_zero():
            terms[tuple(0 if (mask >> i) & 1 else 1 for i in range(n))] = v
    return Poly(a.field, n, terms)


def poly_to_minors(f: Poly) -> MinorVector:
    """Inverse of :func:`minors_to_poly` for multiaffine ``f`` with top coefficient 1."""
    if not f.is_multiaffine():
        raise ValueError("poly_to_minors needs a multiaffine polynomial")
    n = f.nvars
    if not f.coeff((1,) * n).is_one():
        raise ValueError("coefficient of x1*...*xn must be 1")
    values = [f.coeff(tuple(0 if (m >> i) & 1 else 1 for i in range(n))) for m in range(1 << n)]
    return MinorVector(n, values)


def charpoly(A: Matrix) -> Poly:
    """``det(diag(x_1, ..., x_n) + A)``."""
    if not A:
        raise ValueError("charpoly needs a nonempty matrix")
    return poly_det(symbolic_matrix(A))


def pencil_charpoly(A0: Matrix, A1: Matrix) -> Poly:
    """``det(diag(x_1..x_n) + A0 + x_{n+1} A1)`` in ``n + 1`` variables."""
    n = len(A0)
    if len(A1) != n:
        raise ValueError("pencil matrices must have the same size")
    field_id = A0[0][0].field
    y = Poly.variable(field_id, n + 1, n)
    M = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = Poly.constant(field_id, n + 1, A0[i][j]) + y.scale(A1[i][j])
            if i == j:
                entry = entry + Poly.variable(field_id, n + 1, i)
            row.append(entry)
        M.append(row)
    return poly_det(M)


def diagonal_invariants(A: Matrix) -> Tuple:
    """
    Invariants of ``A`` under diagonal similarity.

    Diagonal entries, products ``a_ij a_ji`` and 3-cycle products
    ``a_ij a_jk a_ki``; two matrices with nonzero off-diagonal entries are
    diagonally similar exactly when these agree.
    """
    n = len(A)
    diag = tuple(A[i][i] for i in range(n))
    pairs = tuple(A[i][j] * A[j][i] for i, j in combinations(range(n), 2))
    cycles = tuple(A[i][j] * A[j][k] * A[k][i] for i, j, k in combinations(range(n), 3))
    return diag, pairs, cycles


# ---------------------------------------------------------------------------
# reconstruction from G
# ---------------------------------------------------------------------------


def rep_from_g(G: GMatrix, f: Poly) -> DetRep:
    """
    Rebuild ``A`` from ``G`` with ``adj(G) = f^(n-2) (diag(x) + A)``.

    Parameters
    ----------
    G : list of list of Poly
        ``g_ij`` off the diagonal, ``g_ii = df/dx_i`` on it.
    f : Poly
        Multiaffine polynomial with top coefficient 1.

    Returns
    -------
    DetRep
        ``hermitian`` is set when the recovered matrix is conjugate-symmetric.

    Raises
    ------
    ConditionViolationError
        If ``det(G) != f^(n-1)``, a division by ``f^(n-2)`` is inexact, or an
        entry is not constant.
    """
    n = len(G)
    if n != f.nvars:
        raise ValueError(f"G is {n}x{n} but f has {f.nvars} variables")
    if n == 1:
        A = [[f.constant_term()]]
        return DetRep(A, hermitian=A[0][0].is_fixed())
    if poly_det(G) != f ** (n - 1):
        raise ConditionViolationError("det(G) differs from f^(n-1)")
    M = adjugate(G)
    if n > 2:
        denom = f ** (n - 2)
        divided = []
        for i, row in enumerate(M):
            new_row = []
            for j, entry in enumerate(row):
                q = entry.exact_div(denom)
                if q is None:
                    raise ConditionViolationError(f"adj(G)[{i + 1}][{j + 1}] is not divisible by f^{n - 2}")
                new_row.append(q)
            divided.append(new_row)
        M = divided
    A: Matrix = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = M[i][j]
            if i == j:
                entry = entry - Poly.variable(f.field, n, i)
            if not entry.is_constant():
                raise ConditionViolationError(f"entry ({i + 1},{j + 1}) of adj(G)/f^{n - 2} is not constant")
            row.append(entry.constant_term())
        A.append(row)
    if charpoly(A) != f:
        raise ConditionViolationError("reconstructed matrix does not reproduce f")
    return DetRep(A, hermitian=is_hermitian(A))


# ---------------------------------------------------------------------------
# Hermitian representations
# ---------------------------------------------------------------------------


class _Degenerate(Exception):
    """The compatible-factorization loop hit a degenerate coefficient."""


def _blocks(f: Poly) -> List[Tuple[List[int], Poly]]:
    scalar, factors = ma_irreducible_factorization(f)
    if not scalar.is_one():
        raise IdentityViolationError("block factors of a monic polynomial carry a scalar")
    blocks = []
    seen = set()
    for p in factors:
        vars_ = sorted(p.support())
        if seen & set(vars_):
            raise IdentityViolationError("irreducible blocks share a variable")
        seen.update(vars_)
        blocks.append((vars_, p.extract_vars(vars_)))
    return blocks


def _compatible_factorizations(f: Poly, witnesses: Dict[Tuple[int, int], Poly], bound: int) -> Dict[Tuple[int, int], Poly]:
    n = f.nvars
    g: Dict[Tuple[int, int], Poly] = {(0, 1): witnesses[(0, 1)]}
    logger.debug("g_12 = %s", g[(0, 1)])
    for k in range(2, n):
        d1k = delta(f, 0, k)
        images = [phi(g[(0, j)], f, k) for j in range(1, k)]
        q0 = gcd_many([d1k] + images, f.field, n)
        logger.debug("Q0 for k = %d: %s", k + 1, q0)
        w = witnesses[(0, k)]
        peel = [] if w.is_constant() else ma_irreducible_factorization(w)[1]
        found = None
        for flips in range(min(1 << len(peel), BACKTRACK_LIMIT)):
            q = q0
            for idx, p in enumerate(peel):
                pbar = p.conj()
                if q.exact_div(p * pbar) is not None:
                    q = q.exact_div(p if (flips >> idx) & 1 else pbar)
            qq = q * q.conj()
            ratio = d1k.leading_coeff() / qq.leading_coeff()
            if not ratio.is_fixed() or qq.scale(ratio) != d1k:
                continue
            c = hermitian_square_scalar(ratio, bound)
            if c is None:
                continue
            g1k = q.scale(c)
            others = {}
            for j in range(1, k):
                quot = images[j - 1].exact_div(g1k)
                if quot is None or quot.conj() * quot != delta(f, j, k):
                    break
                others[(j, k)] = quot.conj()
            else:
                found = (g1k, others)
                break
            logger.debug("peeling choice %d rejected at k = %d", flips, k + 1)
        if found is None:
            raise _Degenerate(f"no compatible factor of Delta_{{1{k + 1}}}")
        g[(0, k)] = found[0]
        g.update(found[1])
    return g


def _g_matrix(f: Poly, g: Dict[Tuple[int, int], Poly]) -> GMatrix:
    n = f.nvars
    G: GMatrix = [[Poly.zero(f.field, n) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        G[i][i] = f.derivative(i)
    for (i, j), gij in g.items():
        G[i][j] = gij
        G[j][i] = gij.conj()
    return G


def _hermitian_block(f: Poly, bound: int) -> DetRep:
    n = f.nvars
    if n == 1:
        return DetRep([[f.constant_term()]], hermitian=True)
    report = check_assumptions(f, hermitian=False)
    if not report.derivatives_irreducible:
        raise _Degenerate("; ".join(report.failures))
    witnesses = {}
    for i, j in combinations(range(n), 2):
        cert = certify_hermitian_square(delta(f, i, j), bound)
        if not cert.ok:
            raise _Degenerate(f"Delta_{{{i + 1}{j + 1}}} lost its Hermitian factorization")
        witnesses[(i, j)] = cert.witness
    g = _compatible_factorizations(f, witnesses, bound)
    try:
        rep = rep_from_g(_g_matrix(f, g), f)
    except ConditionViolationError as exc:
        raise _Degenerate(str(exc)) from exc
    if not rep.hermitian:
        raise _Degenerate("reconstructed matrix is not Hermitian")
    return rep


def _transport_block(f: Poly, rng, retry_budget: int, sl2_bound: int, bound: int) -> DetRep:
    n = f.nvars
    last = ""
    for attempt in range(retry_budget):
        translations_only = attempt == 0
        gamma = random_group_element(f.field, n, rng, bound=sl2_bound, translations_only=translations_only)
        moved = act_on_poly(gamma, f)
        beta = moved.coeff((1,) * n)
        if beta.is_zero():
            last = "transported top coefficient vanishes"
            continue
        moved = moved.scale(beta.inverse())
        try:
            rep = _hermitian_block(moved, bound)
        except _Degenerate as exc:
            last = str(exc)
            logger.warning("transport attempt %d degenerate: %s", attempt + 1, last)
            continue
        try:
            _, B = act_on_matrix(inverse(gamma), rep.A)
        except ActionUndefinedError as exc:
            last = str(exc)
            continue
        if charpoly(B) != f or not is_hermitian(B):
            raise IdentityViolationError("transported representation does not reproduce the block")
        logger.info("block of size %d represented after transport by %s", n, format_group_element(gamma))
        return DetRep(B, hermitian=True)
    raise RetryBudgetExceededError(retry_budget, last or "no usable group element")


def algorithm1(
    f: Poly,
    seed: int = 0,
    retry_budget: int = RETRY_BUDGET,
    sl2_bound: int = SL2_BOUND,
    bound: int = FACTOR_BOUND,
    rng=None,
) -> Union[DetRep, Certificate]:
    """
    Hermitian ``A`` over the extension with ``det(diag(x) + A) = f``, or a refutation.

    ``f`` must be multiaffine with fixed coefficients and top coefficient 1. Each
    irreducible block is handled separately and the results are assembled block
    diagonally. Within a block ``g_12`` is a Hermitian-square witness of
    ``Delta_12`` and each ``g_1k`` is carved out of
    ``gcd(Delta_1k, phi_k(g_12), ..., phi_k(g_1(k-1)))`` by peeling conjugate
    factor pairs; ``g_jk = conj(phi_k(g_1j) / g_1k)``. Blocks whose partial
    derivatives are reducible are moved by a sampled group element first
    (translations on the first attempt) and the result transported back.

    Parameters
    ----------
    f : Poly
    seed : int
        Seed for transport sampling; ignored when ``rng`` is given.
    retry_budget : int
        Number of group elements tried per degenerate block.
    sl2_bound : int
        Entry bound for sampled ``SL2`` elements.
    bound : int
        Trial-division bound for norm tests.

    Returns
    -------
    DetRep or Certificate
        A Hermitian representation, or a refutation naming a Rayleigh
        difference that is not a Hermitian square.

    Raises
    ------
    RetryBudgetExceededError
        If no sampled group element makes a degenerate block usable.
    """
    if not f.is_multiaffine():
        raise ValueError("algorithm1 needs a multiaffine polynomial")
    if not f.is_fixed():
        raise ValueError("algorithm1 needs coefficients in the fixed field")
    n = f.nvars
    if not f.coeff((1,) * n).is_one():
        raise ValueError("coefficient of x1*...*xn must be 1")
    for i, j in combinations(range(n), 2):
        d = delta(f, i, j)
        cert = certify_hermitian_square(d, bound)
        if not cert.ok:
            logger.info("Delta_%d%d is not a Hermitian square", i + 1, j + 1)
            return Certificate.refutation(
                f"Delta_{{{i + 1}{j + 1}}} is not a Hermitian square: {cert.condition}", d, cert.value
            )
    rng = np.random.default_rng(seed) if rng is None else rng
    blocks = _blocks(f)
    logger.info("block decomposition: %s", [[v + 1 for v in vars_] for vars_, _ in blocks])
    parts = []
    for vars_, block in blocks:
        try:
            rep = _hermitian_block(block, bound)
        except _Degenerate as exc:
            logger.info("block %s needs transport: %s", [v + 1 for v in vars_], exc)
            rep = _transport_block(block, rng, retry_budget, sl2_bound, bound)
        parts.append((vars_, rep.A))
    A = block_diag(parts, f.field, n)
    if charpoly(A) != f:
        raise IdentityViolationError("assembled representation does not reproduce f")
    return DetRep(A, hermitian=True, field=f.field)


def is_in_image_hermitian(a: MinorVector, seed: int = 0, **kwargs) -> Union[DetRep, Certificate]:
    """Hermitian matrix with principal minors ``a``, or a refutation."""
    if not a.is_normalized():
        raise ValueError("membership needs a_empty = 1")
    for mask, v in enumerate(a.values):
        if not v.is_fixed():
            return Certificate.refutation(f"minor a_{mask} is not in the fixed field", value=v)
    return algorithm1(minors_to_poly(a), seed=seed, **kwargs)


@dataclass
class HermitianPencil:
    """``f / lam = det(diag(x) + W + x_{n+1} v v*)``."""

    W: Matrix
    v: List[FieldValue]
    lam: FieldValue


def hermitian_pencil_rep(f: Poly, seed: int = 0, **kwargs) -> Union[HermitianPencil, Certificate]:
    """
    Rank-one Hermitian pencil for ``f`` in ``n + 1`` variables.

    ``f`` must be multiaffine in ``x_1..x_n`` with nonzero coefficient ``lam``
    of ``x_1...x_n`` and total degree at most ``n``. The polynomial
    ``h = z f|_{y=0} - df/dy`` (``y = x_{n+1}``) is represented by a bordered
    Hermitian matrix ``[[W, v], [v*, 0]]``; the border gives ``v``.
    """
    m = f.nvars
    n = m - 1
    if n < 1:
        raise ValueError("a pencil needs at least two variables")
    if not f.is_multiaffine(range(n)):
        raise ValueError("f must be multiaffine in x1..xn")
    if f.total_degree() > n:
        raise ValueError(f"total degree exceeds {n}")
    lam = f.coeff((1,) * n + (0,))
    if lam.is_zero():
        raise ValueError("coefficient of x1*...*xn vanishes")
    if f.degree(n) > 1:
        return Certificate.refutation(f"degree {f.degree(n)} in x{m} exceeds the rank of a rank-one pencil", f, f)
    fz = f.scale(lam.inverse())
    z = Poly.variable(f.field, m, n)
    h = fz.specialize(n, 0) * z - fz.derivative(n)
    result = algorithm1(h, seed=seed, **kwargs)
    if isinstance(result, Certificate):
        return result
    H = result.A
    if not H[n][n].is_zero():
        raise IdentityViolationError("bordered representation has a nonzero corner")
    W = [row[:n] for row in H[:n]]
    u = [H[i][n] for i in range(n)]
    outer = [[u[i] * u[j].conj() for j in range(n)] for i in range(n)]
    extracted = rank_one_extract(outer)
    v = extracted.value if extracted.ok else u
    if pencil_charpoly(W, [[v[i] * v[j].conj() for j in range(n)] for i in range(n)]) != fz:
        raise IdentityViolationError("pencil does not reproduce f / lam")
    return HermitianPencil(W, list(v), lam)


# ---------------------------------------------------------------------------
# general image
# ---------------------------------------------------------------------------


def _free_of(p: Poly, variables: Sequence[int]) -> bool:
    return all(p.degree(v) <= 0 for v in variables)


def _product(field_id: FieldId, nvars: int, factors: Sequence[Poly], scalar=None) -> Poly:
    out = Poly.constant(field_id, nvars, 1 if scalar is None else scalar)
    for p in factors:
        out = out * p
    return out


def _bipartitions(factors: List[Poly]):
    m = len(factors)
    masks = sorted(range(1 << m), key=lambda s: (-bin(s).count("1"), s))
    for mask in masks:
        left = [p for i, p in enumerate(factors) if (mask >> i) & 1]
        right = [p for i, p in enumerate(factors) if not (mask >> i) & 1]
        yield left, right


def _splittable(r: Poly, left_free: Sequence[int], right_free: Sequence[int]) -> Optional[List[Poly]]:
    # None when r splits as left * right with both multiaffine and free of the given variables
    if r.is_zero():
        return []
    fac = ma_factorization(r)
    if fac is None:
        return []
    scalar, factors = fac
    nvars = r.nvars
    for left, right in _bipartitions(factors):
        pl = _product(r.field, nvars, left)
        pr = _product(r.field, nvars, right, scalar)
        if pl.is_multiaffine() and pr.is_multiaffine() and _free_of(pl, left_free) and _free_of(pr, right_free):
            return None
    return factors


def _general_search(f: Poly) -> Union[DetRep, Certificate]:
    n = f.nvars
    if n == 1:
        return DetRep([[f.constant_term()]])
    field_id = f.field
    options = {}
    for j in range(1, n):
        d = delta(f, 0, j)
        fac = ma_factorization(d)
        if fac is None:
            return Certificate.refutation(f"Delta_{{1{j + 1}}} is not a product of multiaffine polynomials", d, d)
        scalar, factors = fac
        cands = []
        for left, right in _bipartitions(factors):
            g1j = _product(field_id, n, left)
            gj1 = _product(field_id, n, right, scalar)
            if g1j.is_multiaffine() and gj1.is_multiaffine():
                cands.append((g1j, gj1))
        if not cands:
            return Certificate.refutation(
                f"Delta_{{1{j + 1}}} admits no split into two multiaffine polynomials",
                d, d, notes=[str(p) for p in factors],
            )
        options[j] = cands
    first_failure: List[Certificate] = []

    def local_check(j: int, g1j: Poly, gj1: Poly) -> bool:
        for k in range(1, n):
            if k == j:
                continue
            for name, (g, a, b) in (
                (f"res_{{x{k + 1}}}(g_{{{j + 1}1}}, f)", (gj1, [j, k], [k, 0])),
                (f"res_{{x{k + 1}}}(g_{{1{j + 1}}}, f)", (g1j, [0, k], [k, j])),
            ):
                r = res_k(g, f, k)
                bad = _splittable(r, a, b)
                if bad is not None:
                    if not first_failure:
                        first_failure.append(
                            Certificate.refutation(
                                f"{name} admits no split into multiaffine factors free of the required variables",
                                r, r, notes=[str(p) for p in bad],
                            )
                        )
                    return False
        return True

    chosen: Dict[int, Tuple[Poly, Poly]] = {}

    def assemble() -> Optional[DetRep]:
        g: Dict[Tuple[int, int], Poly] = {}
        for j, (g1j, gj1) in chosen.items():
            g[(0, j)], g[(j, 0)] = g1j, gj1
        for i, j in permutations(range(1, n), 2):
            q = res_k(g[(0, i)], f, j).exact_div(g[(0, j)])
            if q is None:
                return None
            g[(j, i)] = q
        for i, j in combinations(range(n), 2):
            if g[(i, j)] * g[(j, i)] != delta(f, i, j):
                return None
        for i, j, k in permutations(range(n), 3):
            if res_k(g[(i, j)], f, k) != g[(i, k)] * g[(k, j)]:
                return None
        G = [[f.derivative(i) if i == j else g[(i, j)] for j in range(n)] for i in range(n)]
        try:
            return rep_from_g(G, f)
        except ConditionViolationError as exc:
            logger.debug("candidate G rejected: %s", exc)
            return None

    def search(j: int) -> Optional[DetRep]:
        if j == n:
            return assemble()
        for g1j, gj1 in options[j]:
            logger.debug("trying g_1%d = %s", j + 1, g1j)
            if not local_check(j, g1j, gj1):
                continue
            consistent = True
            for i in range(1, j):
                gi = chosen[i][0]
                gji = res_k(gi, f, j).exact_div(g1j)
                gij = res_k(g1j, f, i).exact_div(gi)
                if gji is None or gij is None or gij * gji != delta(f, i, j):
                    consistent = False
                    break
            if not consistent:
                continue
            chosen[j] = (g1j, gj1)
            found = search(j + 1)
            if found is not None:
                return found
            del chosen[j]
        return None

    rep = search(1)
    if rep is not None:
        return rep
    if first_failure:
        return first_failure[0]
    return Certificate.refutation("no choice of factorizations satisfies the resultant conditions", f, f)


def is_in_image_general(a: MinorVector, search_bound: int = SEARCH_BOUND) -> Union[DetRep, Certificate]:
    """
    Matrix (not necessarily Hermitian) with principal minors ``a``, or a refutation.

    Every ``Delta_1j(f_a)`` is split into ``g_1j g_j1`` over all bipartitions of
    its multiaffine factors; the remaining ``g_ij`` follow from
    ``res_{x_j}(g_1i, f) = g_1j g_ji``. Candidates are pruned as soon as some
    ``res_{x_k}(g_j1, f)`` cannot split as ``g_jk g_k1``.

    Raises
    ------
    BoundExceededError
        If ``n`` exceeds ``search_bound``.
    """
    if a.n > search_bound:
        raise BoundExceededError("n for the general image search", a.n, search_bound)
    if not a.is_normalized():
        raise ValueError("membership needs a_empty = 1")
    n = a.n
    field_id = a.field
    if n == 1:
        return DetRep([[a[1]]])
    if n == 2:
        A = [[a[1], FieldValue.one(field_id)], [a[1] * a[2] - a[3], a[2]]]
        return DetRep(A)
    f = minors_to_poly(a)
    parts = []
    for vars_, block in _blocks(f):
        result = _general_search(block)
        if isinstance(result, Certificate):
            logger.info("general image refuted on block %s", [v + 1 for v in vars_])
            return result
        parts.append((vars_, result.A))
    A = block_diag(parts, field_id, n)
    if principal_minors(A).values != a.values:
        raise IdentityViolationError("witness minors differ from the input")
    return DetRep(A, hermitian=is_hermitian(A))


# ---------------------------------------------------------------------------
# necessary conditions
# ---------------------------------------------------------------------------


@dataclass
class ConditionResult:
    name: str
    passed: bool
    value: str
    gamma: Optional[str] = None
    lam: Optional[Tuple[int, ...]] = None


@dataclass
class NecessaryConditions:
    """Outcome of the sampled necessary-condition filter; passing is not a proof of membership."""

    mode: str
    conditions: List[ConditionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    @property
    def failures(self) -> List[ConditionResult]:
        return [c for c in self.conditions if not c.passed]


def necessary_conditions_hermitian(
    a: MinorVector,
    seed: int = 0,
    samples: int = 25,
    mode: str = MODE_EXACT,
    points: Optional[Sequence[int]] = None,
    sl2_bound: int = SL2_BOUND,
    bound: int = FACTOR_BOUND,
) -> NecessaryConditions:
    """
    Evaluate the degree-12 family and sampled scalar conditions on ``a``.

    The scalar conditions are checked at the identity and at ``samples``
    seeded group elements: ``a1 a2 - a0 a12`` must be a Hermitian square
    (``>= 0`` in real mode) and ``HypDet / d`` a square in the fixed field
    (``HypDet <= 0`` in real mode).
    """
    if mode not in (MODE_EXACT, MODE_REAL):
        raise ValueError(f"unknown mode {mode!r}")
    if not a.is_normalized():
        raise ValueError("necessary conditions need a_empty = 1")
    f = minors_to_poly(a)
    n = a.n
    report = NecessaryConditions(mode)
    if n >= 4:
        pts = list(range(CERTIFICATE_POINTS)) if points is None else list(points)
        family = certificate_family(n, a.field, pts)
        for cond, value in evaluate_family(f, family):
            report.conditions.append(ConditionResult(cond.name, value.is_zero(), str(value), None, cond.lam))
    if n < 2:
        return report
    rng = np.random.default_rng(seed)
    gammas: List[GroupElement] = [GroupElement.identity(a.field, n)]
    gammas += [random_group_element(a.field, n, rng, bound=sl2_bound, permute=True) for _ in range(samples)]
    first = "a1*a2 - a0*a12 >= 0" if mode == MODE_REAL else "a1*a2 - a0*a12 is a Hermitian square"
    second = "HypDet <= 0" if mode == MODE_REAL else "HypDet/d is a square"
    for gamma in gammas:
        moved = act_on_poly(gamma, f)
        label = None if gamma.is_identity() else format_group_element(gamma)
        norm_value, hyper = scalar_condition_values(moved)
        report.conditions.append(
            ConditionResult(first, check_norm_condition(norm_value, mode, bound), str(norm_value), label)
        )
        if hyper is not None:
            report.conditions.append(ConditionResult(second, check_hyperdet_condition(hyper, mode), str(hyper), label))
    if report.passed:
        logger.warning("necessary conditions pass; this filter does not certify membership")
    else:
        logger.info("necessary conditions fail: %s", report.failures[0].name)
    return report


# ---------------------------------------------------------------------------
# rank one and diagonal rescaling
# ---------------------------------------------------------------------------


def rank_one_extract(A: Matrix, bound: int = FACTOR_BOUND) -> Outcome:
    """``v`` with ``A = v v*``, or the reason none exists over this field."""
    n = len(A)
    if not is_hermitian(A):
        return Outcome(None, "matrix is not Hermitian")
    rank = matrix_rank(A)
    if rank == 0:
        return Outcome([FieldValue.zero(A[0][0].field) for _ in range(n)])
    if rank != 1:
        return Outcome(None, f"rank {rank} != 1")
    p = next(i for i in range(n) if not A[i][i].is_zero())
    w = hermitian_square_scalar(A[p][p], bound)
    if w is None:
        return Outcome(None, f"diagonal entry a_{p + 1}{p + 1} is not a norm over this field")
    wc = w.conj()
    v = [A[i][p] / wc for i in range(n)]
    if any(v[i] * v[j].conj() != A[i][j] for i in range(n) for j in range(n)):
        raise IdentityViolationError("rank-one factor does not reproduce the matrix")
    return Outcome(v)


def hermitize_by_diagonal(A: Matrix) -> Outcome:
    """
    Real diagonal ``D`` with ``D^-1 A D`` Hermitian, or the failed condition.

    ``lambda_ij = a_ij / conj(a_ji)`` must lie in the fixed field (and be
    positive over the rationals); the scaling is propagated along a spanning
    forest of the nonzero pattern, one root per component, and every other
    edge checks the cocycle condition.
    """
    n = len(A)
    field_id = A[0][0].field
    for i in range(n):
        if not A[i][i].is_fixed():
            return Outcome(None, f"diagonal entry a_{i + 1}{i + 1} is not in the fixed field")
    edges = {}
    for i, j in combinations(range(n), 2):
        zi, zj = A[i][j].is_zero(), A[j][i].is_zero()
        if zi != zj:
            return Outcome(None, f"asymmetric zero pattern at ({i + 1},{j + 1})")
        if zi:
            continue
        lam = A[j][i] / A[i][j].conj()
        if not lam.is_fixed():
            return Outcome(None, f"lambda_{j + 1}{i + 1} is not in the fixed field")
        if field_id.kind == "QI" and lam.sign() <= 0:
            return Outcome(None, f"lambda_{j + 1}{i + 1} is not positive")
        edges[(i, j)] = lam
    squares: Dict[int, FieldValue] = {}
    for root in range(n):
        if root in squares:
            continue
        # components of the nonzero pattern scale independently
        squares[root] = FieldValue.one(field_id)
        order = [root]
        for u in order:
            for (i, j), lam in edges.items():
                if i == u and j not in squares:
                    squares[j] = squares[i] * lam
                    order.append(j)
                elif j == u and i not in squares:
                    squares[i] = squares[j] * lam.inverse()
                    order.append(i)
    for (i, j), lam in edges.items():
        if squares[j] != squares[i] * lam:
            return Outcome(None, f"cocycle condition fails on ({i + 1},{j + 1})")
    d = []
    for i in range(n):
        r = sqrt_in_fixed_field(squares[i])
        if r is None:
            return Outcome(None, f"square root outside field for d_{i + 1}^2 = {squares[i]}")
        d.append(r)
    B = [[A[i][j] * d[j] / d[i] for j in range(n)] for i in range(n)]
    if not is_hermitian(B):
        raise IdentityViolationError("diagonal rescaling did not produce a Hermitian matrix")
    return Outcome(d)

