"""
Serialization models for detrepy results.

Every result that leaves the library (minor vectors, representations,
certificates, necessary-condition reports and family verifications) has a
pydantic model here. The CLI prints ``json.dumps(model.model_dump(), indent=2)``
and reads its inputs back with ``model_validate``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from .errors import ParseError
from .exactfield import FieldId, format_value, parse_value, resolve_field
from .mpoly import format_poly
from .utils import format_matrix, parse_nested

REPORT_VERSION = "1.0"


class MinorVectorModel(BaseModel):
    """Principal minors keyed by subset bitmask."""

    n: int = Field(ge=0, description="Matrix size")
    field: str = Field(default="Qi", description="Field name (Q, Qi, F2, F4, Fp:<p>, Fp2:<p>)")
    minors: Dict[str, str] = Field(description="Minor a_S keyed by the decimal bitmask of S")

    @field_validator("minors", mode="before")
    @classmethod
    def stringify(cls, v):
        """Accept numbers as minor values and integer masks as keys."""
        if isinstance(v, dict):
            return {str(k): str(x) for k, x in v.items()}
        return v

    @model_validator(mode="after")
    def check_masks(self) -> "MinorVectorModel":
        expected = {str(m) for m in range(1 << self.n)}
        if set(self.minors) != expected:
            raise ValueError(f"minors must be keyed exactly by 0..{(1 << self.n) - 1}")
        if self.minors["0"].strip() != "1":
            raise ValueError("the empty minor (key 0) must be 1")
        return self


class DetRepModel(BaseModel):
    """A matrix ``A`` with ``f = det(diag(x) + A)``."""

    n: int = Field(description="Matrix size")
    field: str = Field(description="Field of the entries")
    hermitian: bool = Field(description="Whether A equals its conjugate transpose")
    entries: List[List[str]] = Field(description="Row-major field literals")


class CertificateModel(BaseModel):
    """A witness factorization or a named failed condition."""

    kind: str = Field(description="ma-product, hermitian-square, scalar-square or refutation")
    ok: bool = Field(description="False for refutations")
    condition: Optional[str] = Field(None, description="Failed condition of a refutation")
    value: Optional[str] = Field(None, description="Offending value")
    target: Optional[str] = Field(None, description="Polynomial that was certified")
    scalar: Optional[str] = Field(None, description="Scalar factor of a product witness")
    factors: List[str] = Field(default_factory=list, description="Witness factors")
    gamma: Optional[str] = Field(None, description="Group element used for the evaluation")
    lam: Optional[List[int]] = Field(None, description="Specialization point")
    notes: List[str] = Field(default_factory=list, description="Supporting data")


class ConditionModel(BaseModel):
    name: str = Field(description="Condition name")
    passed: bool = Field(description="Whether the condition holds")
    value: str = Field(description="Evaluated value")
    gamma: Optional[str] = Field(None, description="Group element the condition was pulled back along")
    lam: Optional[List[int]] = Field(None, description="Specialization point of a family condition")


class NecessaryConditionsReport(BaseModel):
    """Sampled necessary conditions; passing does not certify membership."""

    n: int = Field(description="Matrix size")
    field: str = Field(description="Field name")
    mode: str = Field(description="exact or real")
    seed: int = Field(description="Seed of the sampled group elements")
    samples: int = Field(description="Number of sampled group elements")
    passed: bool = Field(description="All evaluated conditions hold")
    failures: int = Field(description="Number of failed conditions")
    conditions: List[ConditionModel] = Field(default_factory=list, description="Every evaluated condition")


class SpecializationCheck(BaseModel):
    m: int = Field(description="Specialized variable index (1-based)")
    t: str = Field(description="Value substituted for x_m")
    ok: bool = Field(description="Minors of the explicit matrix match the specialized coefficients")


class FamilyReport(BaseModel):
    """Verification of one member of the odd-cycle family."""

    version: str = Field(default=REPORT_VERSION, description="Report schema version")
    detrepy_version: str = Field(description="detrepy package version")
    n: int = Field(description="Family parameter")
    nvars: int = Field(description="Number of variables, 2n+1")
    polynomial: str = Field(description="f_{2n+1}")
    delta12: str = Field(description="Rayleigh difference Delta_12")
    cycle: List[str] = Field(description="Irreducible factors of Delta_12, forming an odd cycle")
    refuted: bool = Field(description="The general image search refuted f_{2n+1}")
    refutation: Optional[CertificateModel] = Field(None, description="Refutation certificate")
    points: List[str] = Field(default_factory=list, description="Values used for every specialization")
    specializations: List[SpecializationCheck] = Field(default_factory=list, description="One entry per (m, t)")
    steps: List[str] = Field(default_factory=list, description="Verification steps in order")
    passed: bool = Field(description="Refuted and every specialization verified")


# ---------------------------------------------------------------------------
# conversions
# ---------------------------------------------------------------------------


def field_from_name(name: str) -> FieldId:
    return resolve_field(name)[0]


def from_minor_vector(a) -> MinorVectorModel:
    return MinorVectorModel(
        n=a.n,
        field=a.field.name,
        minors={str(m): format_value(v) for m, v in enumerate(a.values)},
    )


def to_minor_vector(model: MinorVectorModel, field_id: Optional[FieldId] = None):
    from .detrep import MinorVector

    fid = field_id or field_from_name(model.field)
    return MinorVector(model.n, [parse_value(model.minors[str(m)], fid) for m in range(1 << model.n)])


def from_detrep(rep) -> DetRepModel:
    return DetRepModel(
        n=rep.n,
        field=rep.field.name if rep.field is not None else "Qi",
        hermitian=rep.hermitian,
        entries=format_matrix(rep.A),
    )


def from_certificate(cert) -> CertificateModel:
    return CertificateModel(
        kind=cert.kind,
        ok=cert.ok,
        condition=cert.condition,
        value=cert.value,
        target=None if cert.target is None else format_poly(cert.target),
        scalar=None if cert.scalar is None else format_value(cert.scalar),
        factors=[format_poly(p) for p in cert.factors],
        gamma=cert.gamma,
        lam=None if cert.lam is None else list(cert.lam),
        notes=list(cert.notes),
    )


def from_conditions(result, n: int, field_id: FieldId, seed: int, samples: int) -> NecessaryConditionsReport:
    conditions = [
        ConditionModel(
            name=c.name,
            passed=c.passed,
            value=c.value,
            gamma=c.gamma,
            lam=None if c.lam is None else list(c.lam),
        )
        for c in result.conditions
    ]
    return NecessaryConditionsReport(
        n=n,
        field=field_id.name,
        mode=result.mode,
        seed=seed,
        samples=samples,
        passed=result.passed,
        failures=len(result.failures),
        conditions=conditions,
    )


def to_json(model: BaseModel) -> str:
    return json.dumps(model.model_dump(), indent=2, ensure_ascii=False)


def save_json(model: BaseModel, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(model) + "\n", encoding="utf-8")


def parse_minor_vector(text: str, field_id: FieldId):
    """
    Read a minor vector literal.

    Accepted forms: a serialized :class:`MinorVectorModel`, a JSON object
    keyed by bitmask, or a list of ``2^n`` literals in bitmask order.
    """
    from .detrep import MinorVector

    data: Any = parse_nested(text)
    if isinstance(data, dict) and "minors" in data:
        payload = dict(data)
        payload.setdefault("field", field_id.name)
        try:
            model = MinorVectorModel.model_validate(payload)
        except ValueError as exc:
            raise ParseError(f"invalid minor vector: {exc}", text, 0, "minors") from None
        return to_minor_vector(model, field_id)
    if isinstance(data, dict):
        keys: List[Tuple[int, Any]] = []
        for k, v in data.items():
            try:
                keys.append((int(k), v))
            except ValueError:
                raise ParseError(f"minor key {k!r} is not a bitmask", text, 0, "minors") from None
        values = dict(keys)
        size = len(values)
        n = size.bit_length() - 1
        if size == 0 or 1 << n != size or set(values) != set(range(size)):
            raise ParseError("minor keys must be exactly 0..2^n-1", text, 0, "minors")
        return MinorVector(n, [parse_value(str(values[m]), field_id) for m in range(size)])
    if isinstance(data, list) and data and not any(isinstance(x, list) for x in data):
        size = len(data)
        n = size.bit_length() - 1
        if 1 << n != size:
            raise ParseError(f"a minor vector has 2^n entries, got {size}", text, 0, "minors")
        return MinorVector(n, [parse_value(str(x), field_id) for x in data])
    raise ParseError("expected a JSON object keyed by bitmask or a flat list", text, 0, "minors")


class FamilyReportBuilder:
    """Accumulates the steps of a family verification into a :class:`FamilyReport`."""

    def __init__(self, n: int):
        self.n = n
        self.nvars = 2 * n + 1
        self.polynomial = ""
        self.delta12 = ""
        self.cycle: List[str] = []
        self.refutation: Optional[CertificateModel] = None
        self.points: List[str] = []
        self.specializations: List[SpecializationCheck] = []
        self.steps: List[str] = []

    def add_step(self, text: str) -> "FamilyReportBuilder":
        self.steps.append(text)
        return self

    def set_instance(self, instance) -> "FamilyReportBuilder":
        self.polynomial = format_poly(instance.f)
        self.delta12 = format_poly(instance.delta12)
        self.cycle = [format_poly(p) for p in instance.delta12_factors]
        return self.add_step(f"built f_{self.nvars} and factored Delta_12 into {len(self.cycle)} factors")

    def set_refutation(self, cert) -> "FamilyReportBuilder":
        if cert is None:
            return self.add_step("general image search found a representation")
        self.refutation = from_certificate(cert)
        return self.add_step(f"general image search refuted: {cert.condition}")

    def add_specialization(self, m: int, t: str, ok: bool) -> "FamilyReportBuilder":
        if t not in self.points:
            self.points.append(t)
        self.specializations.append(SpecializationCheck(m=m, t=t, ok=ok))
        return self

    def set_verification(self, verification) -> "FamilyReportBuilder":
        """Copy everything from a ``FamilyVerification``."""
        self.set_refutation(verification.refutation)
        for check in verification.checks:
            self.add_specialization(check.m, check.t, check.ok)
        bad = sum(1 for s in self.specializations if not s.ok)
        return self.add_step(
            f"checked {len(self.specializations)} specializations at {len(self.points)} points, {bad} failed"
        )

    def build(self) -> FamilyReport:
        from . import __version__

        if not self.polynomial:
            raise ValueError("instance must be set before building the report")
        refuted = self.refutation is not None and not self.refutation.ok
        ok = all(s.ok for s in self.specializations) and bool(self.specializations)
        return FamilyReport(
            detrepy_version=__version__,
            n=self.n,
            nvars=self.nvars,
            polynomial=self.polynomial,
            delta12=self.delta12,
            cycle=self.cycle,
            refuted=refuted,
            refutation=self.refutation,
            points=self.points,
            specializations=self.specializations,
            steps=self.steps,
            passed=refuted and ok,
        )


def load_report(path: Union[str, Path]) -> FamilyReport:
    with open(path, "r", encoding="utf-8") as f:
        return FamilyReport.model_validate(json.load(f))
