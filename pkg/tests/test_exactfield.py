"""Tests for exactfield.py."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import QI, gauss
from detrepy.errors import FieldMismatchError, ParseError
from detrepy.exactfield import (
    FieldId,
    FieldValue,
    elements,
    format_value,
    hermitian_square_scalar,
    norm_one_units,
    parse_value,
    random_value,
    resolve_field,
    sqrt_in_field,
    sqrt_in_fixed_field,
    unit_normalizer,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gaussians = st.builds(lambda a, b: FieldValue(QI, a, b), rationals, rationals)


class TestFieldId:
    def test_resolve_names(self):
        """Fixed-field names and extension names resolve to the same tower."""
        assert resolve_field("Q") == (FieldId.gaussian(), False)
        assert resolve_field("Qi") == (FieldId.gaussian(), True)
        assert resolve_field("F2") == (FieldId.f4(), False)
        assert resolve_field("F4") == (FieldId.f4(), True)
        fid, ext = resolve_field("Fp:7")
        assert fid.p == 7 and not ext

    def test_unknown_name(self):
        """Unknown field names are rejected."""
        with pytest.raises(ValueError):
            resolve_field("R")

    def test_prime_validation(self):
        """Only odd primes up to 97 build an Fp tower; 2 means F4."""
        assert FieldId.prime(2) == FieldId.f4()
        with pytest.raises(ValueError):
            FieldId.prime(9)
        with pytest.raises(ValueError):
            FieldId.prime(101)

    def test_non_residue(self):
        """The extension of F3 adjoins a root of 2."""
        fid = FieldId.prime(3)
        assert fid.d == 2
        a = FieldValue.generator(fid)
        assert a * a == FieldValue(fid, 2)


class TestArithmetic:
    def test_gaussian_unit(self):
        """i^2 = -1 and conj(i) = -i."""
        i = gauss(0, 1)
        assert i * i == -1
        assert i.conj() == gauss(0, -1)

    def test_inverse(self):
        """(1 + 2i)^-1 = (1 - 2i)/5."""
        z = gauss(1, 2)
        assert z.inverse() == gauss(Fraction(1, 5), Fraction(-2, 5))
        with pytest.raises(ZeroDivisionError):
            gauss(0).inverse()

    def test_f4_involution(self, f4):
        """In F4, a^2 = a + 1, conj(a) = 1 + a and a has norm 1."""
        a = FieldValue.generator(f4)
        assert a * a == a + 1
        assert a.conj() == a + 1
        assert a.norm().is_one()

    def test_mixed_fields(self, f4):
        """Values over different fields do not combine."""
        with pytest.raises(FieldMismatchError):
            gauss(1) + FieldValue.one(f4)

    def test_immutable(self):
        """Field values cannot be mutated."""
        with pytest.raises(AttributeError):
            gauss(1).a = 2

    @pytest.mark.parametrize(
        "fid, key", [(QI, 3), (FieldId.prime(5), 3), (FieldId.f4(), 1)], ids=["Qi", "Fp2:5", "F4"]
    )
    def test_hash_matches_equal_int(self, fid, key):
        """Fixed-field values that equal an int hash like it, so mixed lookups work."""
        value = FieldValue(fid, key)
        assert value == key
        assert hash(value) == hash(key)
        assert {value: "v"}[key] == "v"
        assert key in {value}
        assert hash(gauss(Fraction(1, 2))) == hash(Fraction(1, 2))

    @given(gaussians, gaussians, gaussians)
    @settings(max_examples=200, deadline=None)
    def test_field_axioms(self, x, y, z):
        """Distributivity, commutativity and inverses hold exactly."""
        assert (x + y) * z == x * z + y * z
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        if not x.is_zero():
            assert (x * x.inverse()).is_one()

    @given(gaussians, gaussians)
    @settings(max_examples=200, deadline=None)
    def test_involution_laws(self, x, y):
        """The involution is an order-two field automorphism and norms are fixed."""
        assert x.conj().conj() == x
        assert (x * y).conj() == x.conj() * y.conj()
        assert (x + y).conj() == x.conj() + y.conj()
        assert x.norm().is_fixed()
        assert x.trace().is_fixed()

    @pytest.mark.parametrize("p", [3, 5, 7, 11])
    def test_finite_involution(self, p):
        """Over Fp2 the involution fixes exactly the prime field."""
        fid = FieldId.prime(p)
        fixed = [x for x in elements(fid) if x.conj() == x]
        assert len(fixed) == p
        assert all(x.is_fixed() for x in fixed)


class TestText:
    def test_format(self):
        """Literals use parentheses for non-fixed values."""
        assert format_value(gauss(2, -5)) == "(2-5*i)"
        assert format_value(gauss(0, 1)) == "(i)"
        assert format_value(gauss(Fraction(3, 2))) == "3/2"
        assert format_value(gauss(-4)) == "-4"

    def test_parse(self):
        """Field literals parse back to the same value."""
        assert parse_value("(2-5*i)", QI) == gauss(2, -5)
        assert parse_value("3/2", QI) == gauss(Fraction(3, 2))
        assert parse_value("-i", QI) == gauss(0, -1)

    def test_parse_error_names_production(self):
        """Malformed literals raise ParseError naming the failed production."""
        with pytest.raises(ParseError) as exc:
            parse_value("(1+", QI)
        assert exc.value.production


class TestSquareRoots:
    def test_fixed_field(self):
        """Rational square roots exist only for rational squares."""
        assert sqrt_in_fixed_field(gauss(Fraction(9, 4))) == gauss(Fraction(3, 2))
        assert sqrt_in_fixed_field(gauss(2)) is None
        assert sqrt_in_fixed_field(gauss(-1)) is None
        with pytest.raises(ValueError):
            sqrt_in_fixed_field(gauss(0, 1))

    def test_extension(self):
        """sqrt(-1) = i and sqrt(2i) = 1 + i."""
        assert sqrt_in_field(gauss(-1)) == gauss(0, 1)
        assert sqrt_in_field(gauss(0, 2)) == gauss(1, 1)
        assert sqrt_in_field(gauss(0, 1)) is None

    def test_finite(self):
        """Every element of F_p is a square in F_p2, and roots square back."""
        fid = FieldId.prime(7)
        for x in elements(fid, fixed=True):
            r = sqrt_in_field(x)
            assert r is not None and r * r == x
        squares = [x for x in elements(fid) if sqrt_in_field(x) is not None]
        assert len(squares) == (49 - 1) // 2 + 1


class TestNorms:
    @pytest.mark.parametrize("value", [5, Fraction(13, 17), 2, 25, Fraction(1, 2), 0])
    def test_accepts(self, value):
        """Sums of two rational squares have exact witnesses."""
        g = hermitian_square_scalar(gauss(value))
        assert g is not None
        assert g * g.conj() == gauss(value)

    @pytest.mark.parametrize("value", [3, 7, Fraction(3, 5), -1, 21])
    def test_rejects(self, value):
        """Values with a prime 3 mod 4 to an odd power, or negative values, are not norms."""
        assert hermitian_square_scalar(gauss(value)) is None

    def test_not_fixed(self):
        """Only fixed-field values can be norms."""
        with pytest.raises(ValueError):
            hermitian_square_scalar(gauss(1, 1))

    def test_round_trip(self):
        """200 seeded random Gaussian rationals: the norm of g always has a witness."""
        rng = np.random.default_rng(0)
        for _ in range(200):
            g = random_value(QI, rng, nonzero=True)
            w = hermitian_square_scalar(g.norm())
            assert w is not None
            assert w.norm() == g.norm()
            assert w.a > 0 and w.b >= 0

    @pytest.mark.parametrize("name", ["F2", "Fp:3", "Fp:7"])
    def test_finite_surjective(self, name):
        """Over finite fields every fixed element is a norm."""
        fid = resolve_field(name)[0]
        for x in elements(fid, fixed=True):
            w = hermitian_square_scalar(x)
            assert w.norm() == x


class TestUnits:
    def test_gaussian_units(self):
        """The norm-one units of Z[i] are the fourth roots of unity."""
        units = norm_one_units(QI)
        assert len(units) == 4
        assert all(u.norm().is_one() for u in units)

    @pytest.mark.parametrize("z", [(0, -1), (-2, 1), (-3, -3), (1, 0)])
    def test_normalizer(self, z):
        """The normalized value has positive real part and nonnegative imaginary part."""
        v = gauss(*z)
        u = unit_normalizer(v)
        w = u * v
        assert u.norm().is_one()
        assert w.a > 0 and w.b >= 0

    def test_enumeration(self, f4):
        """F4 has four elements, two of them fixed."""
        assert len(elements(f4)) == 4
        assert len(elements(f4, fixed=True)) == 2
        with pytest.raises(ValueError):
            elements(QI)
