from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple

from .errors import ParseError
from .exactfield import FieldId, FieldValue, format_value, parse_value

Matrix = List[List[FieldValue]]


def identity(field: FieldId, n: int) -> Matrix:
    return [[FieldValue(field, 1 if i == j else 0) for j in range(n)] for i in range(n)]


def zeros(field: FieldId, n: int, m: int = -1) -> Matrix:
    m = n if m < 0 else m
    return [[FieldValue.zero(field) for _ in range(m)] for _ in range(n)]


def as_matrix(field: FieldId, rows: Sequence[Sequence[object]]) -> Matrix:
    return [[x if isinstance(x, FieldValue) else FieldValue(field, x) for x in row] for row in rows]


def transpose(M):
    return [list(col) for col in zip(*M)] if M else []


def conj_transpose(M: Matrix) -> Matrix:
    return [[M[j][i].conj() for j in range(len(M))] for i in range(len(M[0]))] if M else []


def is_hermitian(M: Matrix) -> bool:
    n = len(M)
    return all(M[i][j] == M[j][i].conj() for i in range(n) for j in range(n))


def matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for t in range(1, k):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def submatrix(M, rows: Sequence[int], cols: Sequence[int]):
    return [[M[i][j] for j in cols] for i in rows]


def principal_submatrix(M, S: Sequence[int]):
    return submatrix(M, S, S)


def scalar_det(M: Matrix) -> FieldValue:
    """Determinant over a field by Gaussian elimination."""
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix has no field; use det_or_one")
    A = [row[:] for row in M]
    det = FieldValue.one(A[0][0].field)
    for c in range(n):
        pivot = next((r for r in range(c, n) if not A[r][c].is_zero()), None)
        if pivot is None:
            return FieldValue.zero(det.field)
        if pivot != c:
            A[c], A[pivot] = A[pivot], A[c]
            det = -det
        p = A[c][c]
        det = det * p
        inv = p.inverse()
        for r in range(c + 1, n):
            if A[r][c].is_zero():
                continue
            factor = A[r][c] * inv
            A[r] = [a - factor * b for a, b in zip(A[r], A[c])]
    return det


def det_or_one(M: Matrix, field: FieldId) -> FieldValue:
    return FieldValue.one(field) if not M else scalar_det(M)


def matrix_rank(M: Matrix) -> int:
    if not M:
        return 0
    A = [row[:] for row in M]
    rows, cols = len(A), len(A[0])
    rank = 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if not A[r][c].is_zero()), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        inv = A[rank][c].inverse()
        for r in range(rows):
            if r != rank and not A[r][c].is_zero():
                factor = A[r][c] * inv
                A[r] = [a - factor * b for a, b in zip(A[r], A[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def block_diag(blocks: Sequence[Tuple[Sequence[int], Matrix]], field: FieldId, n: int) -> Matrix:
    """Assemble blocks given as (variable indices, matrix on those indices)."""
    out = zeros(field, n)
    for idx, B in blocks:
        for r, i in enumerate(idx):
            for c, j in enumerate(idx):
                out[i][j] = B[r][c]
    return out


# -- subsets as bitmasks -------------------------------------------------


def mask_to_set(mask: int) -> List[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def set_to_mask(S: Iterable[int]) -> int:
    mask = 0
    for i in S:
        mask |= 1 << i
    return mask


def subset_label(mask: int) -> str:
    members = mask_to_set(mask)
    return "{" + ",".join(str(i + 1) for i in members) + "}"


# -- literal input --------------------------------------------------------


def resolve_input(arg: str) -> str:
    """Return file contents when ``arg`` names an existing file, else ``arg`` itself."""
    try:
        path = Path(arg)
        if len(arg) < 4096 and path.is_file():
            return path.read_text(encoding="utf-8").strip()
    except OSError:
        pass
    return arg.strip()


def _split_nested(text: str):
    # bracketed lists whose leaves are raw literals, e.g. [[1,(1+i)],[(1-i),2]]
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def value():
        nonlocal pos
        skip()
        if pos < len(text) and text[pos] == "[":
            pos += 1
            items = []
            skip()
            if pos < len(text) and text[pos] == "]":
                pos += 1
                return items
            while True:
                items.append(value())
                skip()
                if pos < len(text) and text[pos] == ",":
                    pos += 1
                    continue
                if pos < len(text) and text[pos] == "]":
                    pos += 1
                    return items
                raise ParseError("expected ',' or ']'", text, pos, "matrix")
        start = pos
        depth = 0
        while pos < len(text):
            ch = text[pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif depth == 0 and ch in ",]":
                break
            pos += 1
        leaf = text[start:pos].strip().strip('"')
        if not leaf:
            raise ParseError("empty matrix entry", text, start, "matrix")
        return leaf

    out = value()
    skip()
    if pos != len(text):
        raise ParseError("trailing characters after matrix", text, pos, "matrix")
    return out


def parse_nested(text: str):
    try:
        data = json.loads(text)
    except (json.JSONDecodeError, ValueError):
        data = _split_nested(text)
    return data


def parse_matrix(text: str, field: FieldId) -> Matrix:
    data = parse_nested(text)
    if isinstance(data, dict) and "entries" in data:
        data = data["entries"]
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError("expected a list of rows", text, 0, "matrix")
    n = len(data)
    if any(len(r) != n for r in data):
        raise ParseError("matrix must be square", text, 0, "matrix")
    return [[parse_value(str(x), field) for x in row] for row in data]


def format_matrix(M: Matrix) -> List[List[str]]:
    return [[format_value(x) for x in row] for row in M]
