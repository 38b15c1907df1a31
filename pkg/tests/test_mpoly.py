"""Tests for mpoly.py."""

import re
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import QI, gauss, poly
from detrepy.errors import FieldMismatchError, ParseError
from detrepy.exactfield import FieldId
from detrepy.mpoly import NEG_INF, Poly, format_poly, gcd, gcd_many, parse_poly, prem

small_polys = st.dictionaries(
    st.tuples(*[st.integers(0, 2)] * 3),
    st.builds(gauss, st.integers(-3, 3), st.integers(-2, 2)),
    max_size=4,
).map(lambda terms: Poly(QI, 3, terms))


class TestParse:
    def test_infers_variable_count(self):
        """nvars defaults to the largest index mentioned."""
        f = poly("x1*x3 + 2")
        assert f.nvars == 3
        assert f.coeff((1, 0, 1)) == 1
        assert f.constant_term() == 2

    def test_gaussian_coefficients(self):
        """The symbol i is the adjoined square root of -1."""
        f = poly("(1+i)*x1 - i*x2")
        assert f.coeff((1, 0)) == gauss(1, 1)
        assert f.coeff((0, 1)) == gauss(0, -1)

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("(3+2i)*x1", "(3+2*i)*x1"),
            ("(1-i)", "(1-i)"),
            ("2i", "(2*i)"),
            ("(1/2+3i)", "(1/2+3*i)"),
        ],
    )
    def test_implicit_symbol_product(self, text, expected):
        """A number directly followed by i multiplies it."""
        assert format_poly(parse_poly(text, QI)) == expected
        assert parse_poly(text, QI) == parse_poly(re.sub(r"(\d)i", r"\1*i", text), QI)

    def test_implicit_finite_symbol(self, f4):
        """Over F4 the shorthand uses a."""
        assert parse_poly("(1+1a)*x1", f4) == parse_poly("(1+a)*x1", f4)

    def test_constant_division(self):
        """Division by a nonzero constant is allowed."""
        assert poly("x1/2") == poly("x1").scale(Fraction(1, 2))

    def test_powers(self):
        """Powers expand exactly."""
        assert poly("(x1+1)^2") == poly("x1^2 + 2*x1 + 1")

    @pytest.mark.parametrize(
        "text, nvars, production",
        [
            ("", None, "expr"),
            ("x1 +", None, "primary"),
            ("x1^", None, "exponent"),
            ("x3", 2, "variable"),
            ("(x1 + 1", None, "primary"),
            ("x1 / x2", None, "term"),
            ("x1 $", None, "expr"),
        ],
    )
    def test_errors_name_production(self, text, nvars, production):
        """Malformed input raises ParseError with the failed production."""
        with pytest.raises(ParseError) as exc:
            parse_poly(text, QI, nvars)
        assert exc.value.production == production

    def test_finite_field_symbol(self, f4):
        """Over F4 the generator is written a."""
        f = parse_poly("a*x1 + 1", f4)
        assert f.coeff((1,)).b == 1
        with pytest.raises(ParseError):
            parse_poly("i*x1", f4)


class TestFormat:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("x2*x1 - 1", "x1*x2 - 1"),
            ("1 + x1^2 + 2*x1", "x1^2 + 2*x1 + 1"),
            ("-x1 + x2", "-x1 + x2"),
            ("(1+i)*x1 - x2", "(1+i)*x1 - x2"),
            ("0*x1", "0"),
        ],
    )
    def test_canonical(self, text, expected):
        """Terms are printed in descending graded-lex order."""
        assert format_poly(poly(text)) == expected

    @given(small_polys)
    @settings(max_examples=100, deadline=None)
    def test_reparse(self, f):
        """The canonical text parses back to the same polynomial."""
        assert parse_poly(format_poly(f), QI, 3) == f


class TestRing:
    @given(small_polys, small_polys, small_polys)
    @settings(max_examples=100, deadline=None)
    def test_ring_axioms(self, f, g, h):
        """Addition and multiplication satisfy the commutative ring axioms."""
        assert f * (g + h) == f * g + f * h
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
        assert f - f == Poly.zero(QI, 3)

    @given(small_polys, small_polys)
    @settings(max_examples=100, deadline=None)
    def test_conjugation(self, f, g):
        """Conjugation is a ring automorphism of order two."""
        assert (f * g).conj() == f.conj() * g.conj()
        assert f.conj().conj() == f
        assert (f * f.conj()).is_fixed()

    def test_degrees(self):
        """Degrees per variable; the zero polynomial has degree -inf."""
        f = poly("x1^2*x2 + x3")
        assert f.degrees() == [2, 1, 1]
        assert f.total_degree() == 3
        assert Poly.zero(QI, 2).degree(0) == NEG_INF
        assert not f.is_multiaffine()
        assert poly("x1*x2 + x3").is_multiaffine()

    def test_leading_term(self):
        """Leading terms use graded lex order."""
        e, c = poly("2*x1*x2 + 3*x1^2 + x3", 3).leading_term()
        assert e == (2, 0, 0) and c == 3
        lc, m = poly("2*x1 + 4").monic()
        assert lc == 2 and m == poly("x1 + 2")

    def test_mismatch(self, f4):
        """Polynomials over different fields or variable counts do not combine."""
        with pytest.raises(FieldMismatchError):
            poly("x1") + parse_poly("x1", f4)
        with pytest.raises(ValueError):
            poly("x1", 1) + poly("x1", 2)


class TestSubstitution:
    def test_specialize_keeps_variables(self):
        """Specialization keeps nvars and removes the variable."""
        f = poly("x1*x2 + x2 + 1")
        g = f.specialize(0, 2)
        assert g.nvars == 2
        assert g == poly("3*x2 + 1", 2)
        assert f.evaluate_all([2, 3]) == 10

    def test_slice(self):
        """Differentiate in S, then set T to zero."""
        f = poly("x1*x2*x3 + x1 + 2")
        assert f.slice({0}, {2}) == Poly.one(QI, 3)
        assert f.slice({0, 1}, set()) == poly("x3", 3)
        with pytest.raises(ValueError):
            f.slice({0}, {0})

    def test_coefficients_in_variable(self):
        """coeffs_in and from_coeffs are inverse."""
        f = poly("x1^2*x2 + x1 + x2 + 1")
        cs = f.coeffs_in(0)
        assert cs == [poly("x2 + 1", 2), poly("1", 2), poly("x2", 2)]
        assert Poly.from_coeffs(cs, 0) == f

    def test_compose(self):
        """Simultaneous substitution."""
        f = poly("x1*x2")
        g = f.compose({0: poly("x1 + 1", 2)})
        assert g == poly("x1*x2 + x2")
        swapped = f.compose({0: poly("x2", 2), 1: poly("x1", 2)})
        assert swapped == f

    def test_relabel(self):
        """relabel renames x_i to x_{perm[i]}."""
        assert poly("x1 + 2*x2").relabel([1, 0]) == poly("2*x1 + x2")

    def test_extract_and_embed(self):
        """Extracting the variables of a polynomial and embedding them back is lossless."""
        f = poly("x1*x3 + x3", 3)
        g = f.extract_vars([0, 2])
        assert g == poly("x1*x2 + x2")
        assert g.embed(3, [0, 2]) == f
        with pytest.raises(ValueError):
            f.extract_vars([0, 1])

    def test_homogenize(self):
        """The homogenizing variable comes last."""
        f = poly("x1^2 + x2 + 1")
        assert f.homogenize() == poly("x1^2 + x2*x3 + x3^2")
        assert poly("x1*x2 + 1").multihomogenize([1, 1]) == poly("x1*x2 + x3*x4")


class TestDivision:
    def test_exact_div(self):
        """Exact quotients or None."""
        assert poly("x1^2 - 1").exact_div(poly("x1 - 1")) == poly("x1 + 1")
        assert poly("x1^2 + 1").exact_div(poly("x1 - 1")) is None
        assert poly("x1 - 1", 2).divides(poly("x1^2*x2 - x2"))
        with pytest.raises(ZeroDivisionError):
            poly("x1").exact_div(Poly.zero(QI, 1))

    def test_gcd_univariate(self):
        """gcd(x^2 - 1, x^2 + 2x + 1) = x + 1."""
        assert gcd(poly("x1^2 - 1"), poly("x1^2 + 2*x1 + 1")) == poly("x1 + 1")

    def test_gcd_multivariate(self):
        """The common factor of two products is found and made monic."""
        a = poly("(2*x1 + 2*x2)*(x1 - x3)")
        b = poly("(x1 + x2)*(x2 + x3 + 1)")
        assert gcd(a, b) == poly("x1 + x2", 3)

    def test_gcd_gaussian(self):
        """Common factors with non-real coefficients."""
        a = poly("(x1 + i)*(x1 + 2)")
        b = poly("(x1 + i)*(x1 - 2)")
        assert gcd(a, b) == poly("x1 + i")

    def test_gcd_edge_cases(self):
        """gcd(0, 0) = 0 and a unit gcd is 1."""
        zero = Poly.zero(QI, 2)
        assert gcd(zero, zero) == zero
        assert gcd(poly("x1", 2), poly("x2", 2)) == Poly.one(QI, 2)
        assert gcd(zero, poly("3*x1", 2)) == poly("x1", 2)

    def test_gcd_many(self):
        """gcd over a list of polynomials."""
        fs = [poly("x1*x2", 2), poly("x1^2", 2), poly("x1*x2 + x1", 2)]
        assert gcd_many(fs, QI, 2) == poly("x1", 2)

    def test_prem(self):
        """Pseudo-remainder by a divisor vanishes."""
        a = poly("x1^2*x2 - x2", 2)
        b = poly("x2*x1 + x2", 2)
        assert prem(a, b, 0).is_zero()

    def test_finite_gcd(self):
        """gcd over a finite field."""
        fid = FieldId.prime(5)
        a = parse_poly("(x1 + 1)*(x1 + 2)", fid)
        b = parse_poly("(x1 + 1)*(x1 + 3)", fid)
        assert gcd(a, b) == parse_poly("x1 + 1", fid)
