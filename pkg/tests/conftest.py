"""Shared fixtures for the detrepy test suite."""

from fractions import Fraction

import numpy as np
import pytest

from detrepy.exactfield import FieldId, FieldValue
from detrepy.mpoly import parse_poly
from detrepy.utils import as_matrix

QI = FieldId.gaussian()


def gauss(a, b=0) -> FieldValue:
    return FieldValue(QI, Fraction(a), Fraction(b))


def poly(text: str, nvars=None, field=QI):
    return parse_poly(text, field, nvars)


def random_hermitian(rng, n: int, bound: int = 3):
    """Hermitian matrix with small Gaussian-integer entries."""
    A = [[None] * n for _ in range(n)]
    for i in range(n):
        A[i][i] = gauss(int(rng.integers(-bound, bound + 1)))
        for j in range(i + 1, n):
            z = gauss(int(rng.integers(-bound, bound + 1)), int(rng.integers(-bound, bound + 1)))
            A[i][j] = z
            A[j][i] = z.conj()
    return A


def random_rational_matrix(rng, n: int, bound: int = 4):
    return as_matrix(
        QI,
        [[Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, 3))) for _ in range(n)]
         for _ in range(n)],
    )


@pytest.fixture
def qi():
    """Q inside Q(i)."""
    return QI


@pytest.fixture
def f4():
    """F2 inside F4."""
    return FieldId.f4()


@pytest.fixture
def rng():
    """Seeded generator; every randomized test is reproducible."""
    return np.random.default_rng(0)


@pytest.fixture
def hermitian_example():
    """The 4-variable polynomial with Rayleigh differences (x_k^2 + 1)(x_l^2 + 1)."""
    return poly("x1*x2*x3*x4 - x1*x2 - x1*x3 - x1*x4 - x2*x3 - x2*x4 - x3*x4 + 1")


@pytest.fixture
def odd_cycle_example():
    """5-variable polynomial whose Delta_12 splits but which is not a principal minor polynomial."""
    return poly(
        "x1*x2*x3*x4*x5 + x1*x2*x3*x4 + x1*x2*x3*x5 + x1*x2*x4*x5 + x1*x3*x4*x5"
        " + x2*x3*x4*x5 + x1*x2*x4 + x1*x2*x5 + x1*x3*x4 + x2*x3*x5 + x3*x4*x5"
    )
