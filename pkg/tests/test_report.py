"""Tests for report.py."""

import json

import pytest
from pydantic import ValidationError

from conftest import QI, poly
from detrepy import __version__
from detrepy.counterexamples import FamilyVerification, SpecializationOutcome, family
from detrepy.detrep import DetRep, principal_minors
from detrepy.errors import ParseError
from detrepy.report import (
    FamilyReportBuilder,
    MinorVectorModel,
    from_certificate,
    from_detrep,
    from_minor_vector,
    load_report,
    parse_minor_vector,
    save_json,
    to_json,
    to_minor_vector,
)
from detrepy.squares import Certificate, certify_hermitian_square
from detrepy.utils import as_matrix


class TestMinorVectorModel:
    def test_numbers_accepted(self):
        """Integer keys and numeric values are stringified."""
        model = MinorVectorModel(n=1, minors={0: 1, 1: 5})
        assert model.minors == {"0": "1", "1": "5"}
        assert model.field == "Qi"

    def test_masks_checked(self):
        """Keys must be exactly 0..2^n-1 and the empty minor must be 1."""
        with pytest.raises(ValidationError):
            MinorVectorModel(n=2, minors={0: 1, 1: 2})
        with pytest.raises(ValidationError):
            MinorVectorModel(n=1, minors={0: 2, 1: 2})
        with pytest.raises(ValidationError):
            MinorVectorModel(n=-1, minors={})

    def test_conversion(self):
        """A minor vector survives conversion to the model and back."""
        a = principal_minors(as_matrix(QI, [[1, 2], [3, 4]]))
        model = from_minor_vector(a)
        assert model.minors == {"0": "1", "1": "1", "2": "4", "3": "-2"}
        assert to_minor_vector(model).values == a.values


class TestParseMinorVector:
    @pytest.mark.parametrize(
        "text",
        [
            '{"0": "1", "1": "1", "2": "4", "3": "-2"}',
            "[1, 1, 4, -2]",
            '{"n": 2, "minors": {"0": "1", "1": "1", "2": "4", "3": "-2"}}',
        ],
    )
    def test_forms(self, text):
        """Bitmask objects, flat lists and serialized models are accepted."""
        a = parse_minor_vector(text, QI)
        assert a.n == 2
        assert a.values == [1, 1, 4, -2]

    def test_field_literals(self):
        """Entries are field literals."""
        a = parse_minor_vector('["1", "(1+i)"]', QI)
        assert not a[1].is_fixed()

    @pytest.mark.parametrize(
        "text",
        [
            '{"a": 1}',
            "[1, 2, 3]",
            '{"0": 1, "2": 3}',
            '{"n": 2, "minors": {"0": "1"}}',
            "[[1, 2], [3, 4]]",
        ],
    )
    def test_errors(self, text):
        """Malformed vectors are ParseErrors naming the minors production."""
        with pytest.raises(ParseError) as exc:
            parse_minor_vector(text, QI)
        assert exc.value.production == "minors"


class TestConversions:
    def test_detrep(self):
        """Matrices are written as row-major literals."""
        model = from_detrep(DetRep(as_matrix(QI, [[1, 2], [3, 4]])))
        assert model.entries == [["1", "2"], ["3", "4"]]
        assert model.field == "Qi"
        assert not model.hermitian

    def test_certificate(self):
        """Witness factors and refutation conditions are kept as text."""
        model = from_certificate(certify_hermitian_square(poly("x1^2 + 1")))
        assert model.ok
        assert len(model.factors) == 1
        refutation = from_certificate(Certificate.refutation("no split", value=3))
        assert not refutation.ok
        assert refutation.condition == "no split"
        assert refutation.value == "3"

    def test_to_json(self):
        """JSON output is indented and parses back."""
        text = to_json(MinorVectorModel(n=0, minors={0: 1}))
        assert json.loads(text) == {"n": 0, "field": "Qi", "minors": {"0": "1"}}
        assert "\n  " in text


class TestFamilyReport:
    def verification(self):
        checks = [SpecializationOutcome(m, "1", True) for m in range(1, 6)]
        checks += [SpecializationOutcome(m, "2", True) for m in range(1, 6)]
        return FamilyVerification(2, Certificate.refutation("odd cycle"), [], checks)

    def test_builder(self):
        """The builder collects instance, refutation and specializations."""
        report = FamilyReportBuilder(2).set_instance(family(2)).set_verification(self.verification()).build()
        assert report.passed and report.refuted
        assert report.nvars == 5
        assert report.points == ["1", "2"]
        assert len(report.specializations) == 10
        assert len(report.cycle) == 3
        assert report.detrepy_version == __version__
        assert report.steps[0].startswith("built f_5")

    def test_failed_specialization(self):
        """A single bad specialization fails the report."""
        verification = self.verification()
        verification.checks[3].ok = False
        report = FamilyReportBuilder(2).set_instance(family(2)).set_verification(verification).build()
        assert report.refuted and not report.passed

    def test_not_refuted(self):
        """Without a refutation the report does not pass."""
        report = FamilyReportBuilder(2).set_instance(family(2)).set_refutation(None).build()
        assert not report.refuted and not report.passed
        assert "found a representation" in report.steps[-1]

    def test_instance_required(self):
        """Building before the instance is set is an error."""
        with pytest.raises(ValueError):
            FamilyReportBuilder(2).build()

    def test_save_and_load(self, tmp_path):
        """Reports are written as JSON and validated on load."""
        report = FamilyReportBuilder(2).set_instance(family(2)).set_verification(self.verification()).build()
        path = tmp_path / "out" / "family.json"
        save_json(report, path)
        loaded = load_report(path)
        assert loaded == report
        assert path.read_text(encoding="utf-8").endswith("\n")
