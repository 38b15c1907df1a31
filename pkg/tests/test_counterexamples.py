"""Tests for counterexamples.py."""

from fractions import Fraction

import pytest

from conftest import QI, poly
from detrepy.counterexamples import (
    check_specialization,
    expected_delta12,
    family,
    first_variable_matrix,
    moving_variable_matrix,
    specialized,
    symmetry_moving,
    verify_family,
)
from detrepy.detrep import charpoly
from detrepy.errors import BoundExceededError
from detrepy.rayleigh import delta


class TestFamily:
    def test_five_variables(self):
        """f_5 matches its closed form."""
        inst = family(2)
        assert inst.nvars == 5
        assert inst.f == poly("x1*(x3*x4 + 1)*(x5*x2 + 1) + (x2*x3 + 1)*(x4*x5 + 1)")

    @pytest.mark.parametrize("n", [2, 3])
    def test_delta12(self, n):
        """Delta_12 is (x3 - x_{2n+1}) times the chain of quadratic factors."""
        inst = family(n)
        assert inst.delta12 == expected_delta12(n)
        assert delta(inst.f, 0, 1) == inst.delta12

    def test_delta12_factors(self):
        """The odd cycle has 2n - 1 multiaffine factors."""
        assert len(family(2).delta12_factors) == 3
        assert len(family(3).delta12_factors) == 5

    def test_start(self):
        """The family begins at five variables."""
        with pytest.raises(ValueError):
            family(1)


class TestSpecializations:
    @pytest.mark.parametrize("t", [0, 2, -3])
    def test_first_variable(self, t):
        """Setting x1 = t is represented by the first explicit matrix."""
        inst = family(2)
        A = first_variable_matrix(2, t)
        assert charpoly(A) == specialized(inst, 1, t)
        assert check_specialization(inst, 1, t)

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_other_variables(self, m):
        """Setting x_m = t is represented by the relabeled second matrix."""
        inst = family(2)
        for t in (1, -2, 5):
            assert check_specialization(inst, m, t)
        assert charpoly(moving_variable_matrix(2, m, 3)) == specialized(inst, m, 3)

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_symmetry_moving(self, m):
        """The chosen symmetry fixes f and sends x5 to x_m."""
        inst = family(2)
        perm = symmetry_moving(2, m)
        assert perm[4] == m - 1
        assert perm[0] == 0
        assert inst.f.relabel(perm) == inst.f

    def test_poles(self):
        """t = -1 and t = 0 are poles; x1 is handled by the other matrix."""
        with pytest.raises(ValueError):
            first_variable_matrix(2, -1)
        with pytest.raises(ValueError):
            moving_variable_matrix(2, 5, 0)
        with pytest.raises(ValueError):
            moving_variable_matrix(2, 1, 2)

    def test_rational_point(self):
        """Specializations at non-integer points use exact arithmetic."""
        inst = family(2)
        assert check_specialization(inst, 1, Fraction(1, 3))
        assert check_specialization(inst, 4, Fraction(-5, 2))


class TestVerification:
    def test_five_variables(self):
        """f_5 is refuted while all of its specializations are determinantal."""
        report = verify_family(2)
        assert report.refuted
        assert report.specializations_ok
        assert report.passed
        assert len(report.cycle) == 3
        assert len(report.checks) == 5 * 7

    @pytest.mark.slow
    def test_seven_variables(self):
        """f_7 passes the same verification."""
        report = verify_family(3)
        assert report.passed

    @pytest.mark.slow
    def test_nine_variables(self):
        """f_9 is refuted and each of its 9 * 11 specializations is checked."""
        report = verify_family(4)
        assert report.refuted
        assert report.specializations_ok
        assert report.passed
        assert len(report.checks) == 9 * 11

    def test_bound(self):
        """Sizes above the family bound are rejected."""
        with pytest.raises(BoundExceededError):
            verify_family(5)

    def test_field(self):
        """Instances over the rationals use the default field."""
        assert family(2).f.field == QI
