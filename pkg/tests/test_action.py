"""Tests for action.py."""

import pytest

from conftest import QI, gauss, poly, random_hermitian
from detrepy.action import (
    SL2,
    GroupElement,
    act_on_matrix,
    act_on_poly,
    compose,
    diagonal_conjugate,
    format_group_element,
    inverse,
    parse_group_element,
    permute_matrix,
    random_group_element,
    random_sl2,
)
from detrepy.errors import ActionUndefinedError, ParseError
from detrepy.rayleigh import poly_det, symbolic_matrix
from detrepy.utils import as_matrix, scalar_det


def charpoly(A):
    return poly_det(symbolic_matrix(A, QI))


class TestSL2:
    def test_validation(self):
        """Entries must be fixed and the determinant must be one."""
        with pytest.raises(ValueError):
            SL2.from_entries(QI, 1, 2, 3, 4)
        with pytest.raises(ValueError):
            SL2(gauss(0, 1), gauss(0), gauss(0), gauss(0, -1))

    def test_group_law(self):
        """Products and inverses stay in SL2."""
        g = SL2.from_entries(QI, 2, 1, 1, 1)
        assert (g @ g.inverse()).is_identity()
        assert (SL2.translation(QI, 2) @ SL2.translation(QI, 3)) == SL2.translation(QI, 5)
        assert SL2.translation(QI, 3).is_translation()
        assert not SL2.inversion(QI).is_translation()

    def test_random_draws(self, rng):
        """Sampled elements are valid and reproducible."""
        for _ in range(50):
            g = random_sl2(QI, rng)
            assert (g.a * g.d - g.b * g.c).is_one()
        assert random_sl2(QI, rng, translation=True).is_translation()


class TestPolynomialAction:
    def test_translation(self):
        """Translating x1 by one sends x1*x2 to (x1 + 1)*x2."""
        g = GroupElement.single(QI, 2, 0, SL2.translation(QI, 1))
        assert act_on_poly(g, poly("x1*x2")) == poly("x1*x2 + x2")

    def test_inversion(self):
        """Inversion on x1 sends x1 + 2 to 1 - 2*x1."""
        g = GroupElement.single(QI, 1, 0, SL2.inversion(QI))
        assert act_on_poly(g, poly("x1 + 2")) == poly("1 - 2*x1")

    def test_declared_degree(self):
        """A larger declared degree multiplies by the denominator."""
        g = GroupElement.single(QI, 1, 0, SL2.inversion(QI))
        assert act_on_poly(g, poly("x1 + 2"), [2]) == poly("2*x1^2 - x1")
        with pytest.raises(ValueError):
            act_on_poly(g, poly("x1^2"), [1])

    def test_permutation(self):
        """The permutation renames x_i to x_{perm[i]}."""
        g = GroupElement.permutation(QI, (1, 2, 0))
        assert act_on_poly(g, poly("x1 + 2*x2 + 3*x3")) == poly("x2 + 2*x3 + 3*x1")

    def test_composition_law(self, rng, hermitian_example):
        """Acting by a composite equals acting twice."""
        d = [1] * 4
        for _ in range(5):
            g1 = random_group_element(QI, 4, rng, bound=2, permute=True)
            g2 = random_group_element(QI, 4, rng, bound=2, permute=True)
            once = act_on_poly(compose(g1, g2), hermitian_example, d)
            twice = act_on_poly(g1, act_on_poly(g2, hermitian_example, d), d)
            assert once == twice

    def test_inverse(self, rng, hermitian_example):
        """g^-1 undoes g."""
        d = [1] * 4
        g = random_group_element(QI, 4, rng, bound=3, permute=True)
        assert act_on_poly(inverse(g), act_on_poly(g, hermitian_example, d), d) == hermitian_example
        assert compose(inverse(g), g).is_identity()

    def test_size_mismatch(self):
        """Group element and polynomial must have the same number of variables."""
        with pytest.raises(ValueError):
            act_on_poly(GroupElement.identity(QI, 2), poly("x1"))


class TestMatrixAction:
    def test_transport_reproduces_action(self, rng):
        """beta * det(diag(x) + B) equals g applied to det(diag(x) + A)."""
        done = 0
        while done < 5:
            A = random_hermitian(rng, 3)
            g = random_group_element(QI, 3, rng, bound=3, permute=True)
            try:
                beta, B = act_on_matrix(g, A)
            except ActionUndefinedError:
                continue
            assert charpoly(B).scale(beta) == act_on_poly(g, charpoly(A), [1, 1, 1])
            done += 1

    def test_translation_keeps_matrix(self):
        """Translations shift only the diagonal."""
        A = as_matrix(QI, [[1, 2], [3, 4]])
        g = GroupElement.single(QI, 2, 0, SL2.translation(QI, 5))
        beta, B = act_on_matrix(g, A)
        assert beta == 1
        assert B == as_matrix(QI, [[6, 2], [3, 4]])

    def test_undefined(self):
        """The action is undefined when the top coefficient vanishes."""
        g = GroupElement.single(QI, 1, 0, SL2.inversion(QI))
        with pytest.raises(ActionUndefinedError):
            act_on_matrix(g, as_matrix(QI, [[0]]))

    def test_permute_matrix(self):
        """Permuting rows and columns relabels the characteristic polynomial."""
        A = as_matrix(QI, [[1, 2, 0], [3, 4, 5], [0, 6, 7]])
        perm = (2, 0, 1)
        assert charpoly(permute_matrix(A, perm)) == charpoly(A).relabel(perm)

    def test_diagonal_conjugate(self):
        """Diagonal similarity keeps the determinant."""
        A = as_matrix(QI, [[1, 2], [3, 4]])
        B = diagonal_conjugate(A, [gauss(1), gauss(0, 2)])
        assert scalar_det(B) == scalar_det(A)
        assert B[0][1] == gauss(0, 4)
        with pytest.raises(ValueError):
            diagonal_conjugate(A, [gauss(1), gauss(0)])


class TestText:
    def test_parse(self):
        """The permutation is 1-based and omitted factors are the identity."""
        g = parse_group_element("perm=[2,1,3]; g1=[[1,1],[0,1]]", QI)
        assert g.perm == (1, 0, 2)
        assert g.gammas[0] == SL2.translation(QI, 1)
        assert g.gammas[2].is_identity()

    def test_format(self):
        """Identity factors are omitted from the text."""
        g = GroupElement.single(QI, 2, 1, SL2.inversion(QI))
        assert format_group_element(g) == "perm=[1,2]; g2=[[0,1],[-1,0]]"
        assert parse_group_element(format_group_element(g), QI) == g

    def test_errors(self):
        """Malformed text is a ParseError; invalid SL2 entries are a ValueError."""
        with pytest.raises(ParseError):
            parse_group_element("rotate=[1]", QI)
        with pytest.raises(ValueError):
            parse_group_element("g1=[[1,2],[3,4]]", QI)
        with pytest.raises(ValueError):
            parse_group_element("perm=[1,2]; g3=[[1,0],[0,1]]", QI)
