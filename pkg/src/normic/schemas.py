"""Pydantic models for every request, response, and JSON file format.

Exact rationals travel as strings "num/den" (plain integers also accepted
on input) so artifacts are diff-able and reproducible across languages.
All response payloads carry a versioned ``schema_id``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .errors import SchemaError

SCHEMA_VERSION = "1.0.0"

_RATIONAL_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")

Rational = Union[int, str]


def parse_rational(value: Rational) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL_RE.match(value):
        return Fraction(value)
    raise SchemaError(f"not a rational: {value!r} (want an integer or 'num/den')")


def rational_str(value) -> Rational:
    f = Fraction(value)
    if f.denominator == 1:
        return int(f)
    return f"{f.numerator}/{f.denominator}"


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _check_rational(value: Rational) -> Rational:
    parse_rational(value)
    return value


# ---------------------------------------------------------------------------
# bundle descriptions (desc.json)


class FactorModel(StrictModel):
    """One factor: degree, splitting degree over K, optional coefficients
    (constant term first)."""

    degree: int = Field(ge=1)
    splitting_degree: int = Field(ge=1)
    coeffs: Optional[list[Rational]] = None

    @field_validator("coeffs")
    @classmethod
    def _coeffs_rational(cls, v):
        if v is not None:
            for c in v:
                _check_rational(c)
        return v


class DescModel(StrictModel):
    """The bundle N(z) = c * prod P_i(x) over Q(zeta_n), with the Kummer
    layer given by a rational constant a (when polynomials are carried)."""

    schema_id: Literal["normic/desc.v1"] = "normic/desc.v1"
    n: int = Field(ge=1)
    factors: list[FactorModel] = Field(min_length=1)
    kummer_a: Optional[Rational] = None
    lead_constant: Rational = 1

    @field_validator("kummer_a", "lead_constant")
    @classmethod
    def _rational_fields(cls, v):
        if v is not None:
            _check_rational(v)
        return v


class TargetsModel(StrictModel):
    """Hypothesized obstruction targets: either explicit character
    coordinates or generators of the subgroup B0 meant to obstruct."""

    schema_id: Literal["normic/targets.v1"] = "normic/targets.v1"
    subgroup_generators: Optional[list[list[int]]] = None
    values: Optional[list[list[int]]] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.subgroup_generators is None) == (self.values is None):
            raise ValueError("give exactly one of subgroup_generators or values")
        return self


# ---------------------------------------------------------------------------
# requests


class GroupRequest(StrictModel):
    op: Literal["canonical", "subgroups", "element-order"]
    orders: list[int] = Field(min_length=1)
    coords: Optional[list[int]] = None
    cap: int = Field(default=4096, ge=1)

    @field_validator("orders")
    @classmethod
    def _orders_positive(cls, v):
        if any(r < 1 for r in v):
            raise ValueError("orders must be positive")
        return v


class BrauerRequest(StrictModel):
    desc: DescModel


class ConstructRequest(StrictModel):
    target: list[int] = Field(min_length=1)
    a: Optional[int] = None
    places: Optional[list[int]] = None
    obstruct_with: Optional[list[int]] = None
    obstruct_generators: Optional[list[list[int]]] = None
    verify: bool = True

    @field_validator("target")
    @classmethod
    def _target_positive(cls, v):
        if any(r < 1 for r in v):
            raise ValueError("target orders must be positive")
        return v

    @model_validator(mode="after")
    def _one_obstruction_spec(self):
        if self.obstruct_with is not None and self.obstruct_generators is not None:
            raise ValueError("give at most one of obstruct_with or obstruct_generators")
        return self


class SymbolRequest(StrictModel):
    p: int = Field(ge=3)
    n: int = Field(ge=1)
    a: Rational
    b: Rational

    @field_validator("a", "b")
    @classmethod
    def _rational_fields(cls, v):
        _check_rational(v)
        return v


class ObstructRequest(StrictModel):
    desc: DescModel
    places: list[int] = Field(default_factory=list)
    targets: Optional[TargetsModel] = None


class SelftestRequest(StrictModel):
    seed: int = 0


# ---------------------------------------------------------------------------
# responses


class GroupResponse(StrictModel):
    schema_id: Literal["normic/group.v1"] = "normic/group.v1"
    op: str
    orders: list[int]
    result: dict


class BrauerResponse(StrictModel):
    schema_id: Literal["normic/brauer.v1"] = "normic/brauer.v1"
    ambient_orders: list[int]
    membership_orders: list[int]
    kernel_order: int
    quotient_invariant_factors: list[int]
    generators: dict[str, list[int]]
    lifting_certified: bool


class SubgroupVerdict(StrictModel):
    generators: list[list[int]]
    order: int
    verdict: Literal["empty", "nonempty", "unknown"]


class ClassificationModel(StrictModel):
    conclusive: bool
    subgroups: list[SubgroupVerdict]
    minimal_obstructing: list[dict]


class HypothesisModel(StrictModel):
    provenance: Literal["hypothesized-target"] = "hypothesized-target"
    s: list[list[int]]
    classification: dict


class ObstructResponse(StrictModel):
    schema_id: Literal["normic/obstruct.v1"] = "normic/obstruct.v1"
    group_orders: list[int]
    local_images: list[dict]
    total: dict
    verified: ClassificationModel
    hypothesis: Optional[HypothesisModel] = None


class ConstructResponse(StrictModel):
    schema_id: Literal["normic/construct.v1"] = "normic/construct.v1"
    plan: dict
    verify: Optional[dict] = None
    obstruction: Optional[ObstructResponse] = None


class SymbolResponse(StrictModel):
    schema_id: Literal["normic/symbol.v1"] = "normic/symbol.v1"
    p: int
    n: int
    numerator: int
    invariant: str


class SelftestCheck(StrictModel):
    name: str
    cases: int
    mismatches: list[str]


class SelftestResponse(StrictModel):
    schema_id: Literal["normic/selftest.v1"] = "normic/selftest.v1"
    seed: int
    checks: list[SelftestCheck]
    passed: bool


ALL_MODELS = {
    "desc": DescModel,
    "targets": TargetsModel,
    "group_request": GroupRequest,
    "brauer_request": BrauerRequest,
    "construct_request": ConstructRequest,
    "symbol_request": SymbolRequest,
    "obstruct_request": ObstructRequest,
    "selftest_request": SelftestRequest,
    "group_response": GroupResponse,
    "brauer_response": BrauerResponse,
    "construct_response": ConstructResponse,
    "symbol_response": SymbolResponse,
    "obstruct_response": ObstructResponse,
    "selftest_response": SelftestResponse,
}


def schema_catalog() -> dict:
    return {
        "version": SCHEMA_VERSION,
        "schemas": {name: model.model_json_schema() for name, model in ALL_MODELS.items()},
    }
