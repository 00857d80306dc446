"""Request models shared by the HTTP service and the command line."""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class Request(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    threads: int = Field(1, ge=1)
    tol: str = "1/1000"


class PresentationModel(BaseModel):
    generators: list[str]
    relators: list[str] = []


class LoCertRequest(Request):
    presentation: PresentationModel
    depth: int = Field(9, ge=1)
    base: Optional[str] = None
    max_rule_len: int = 12
    max_rules: int = 400


class ConeCheckRequest(Request):
    group: Literal["braid", "z2"] = "braid"
    n: int = Field(3, ge=2)
    radius: int = Field(4, ge=0)
    cone: Literal["dehornoy", "lex", "first-coordinate"] = "dehornoy"


class CircularOrderModel(BaseModel):
    carrier: list[Union[int, str]]
    triples: list[list[Union[int, str]]]


class RealizeRequest(Request):
    order: CircularOrderModel
    enumeration: Optional[list[Union[int, str]]] = None


class LiftTable(BaseModel):
    element: str
    breakpoints: list[list[str]]


class MobiusTable(BaseModel):
    element: str
    matrix: list[list[str]]


class BlowUpRequest(Request):
    action: list[LiftTable]
    point: str
    weights: Optional[list[str]] = None


class EulerPairRequest(Request):
    action: list[Union[LiftTable, MobiusTable]]
    genus: int = Field(ge=1)
    elements: Optional[list[str]] = None


class EulerBestvinaRequest(Request):
    index: int = Field(1, ge=1)


class EulerGenus2Request(Request):
    i: int = 1


class ArcModel(BaseModel):
    vertices: list[list[Union[str, int]]]


class EulerRaysRequest(Request):
    delta: ArcModel
    tau_plus: ArcModel
    tau_minus: ArcModel


class AlexanderRequest(Request):
    example: Literal["twist-row", "bestvina"] = "twist-row"
    window: int = Field(8, ge=1)
    tau: Optional[ArcModel] = None
    reading: Literal["conjugate-then-apply", "left-to-right"] = "conjugate-then-apply"
    rescaled_up_to: int = Field(5, ge=0)


class BraidCmpRequest(Request):
    n: int = Field(3, ge=2)
    left: str
    right: str


class BraidTripleRequest(Request):
    n: int = Field(3, ge=2)
    words: list[str] = Field(min_length=3, max_length=3)
