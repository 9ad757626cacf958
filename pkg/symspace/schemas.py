"""
JSON input models. Each model validates its payload and builds the matching
domain object through to_domain().
"""

import math
from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, Field, TypeAdapter, field_validator, model_validator

from .function_model import (
    ConstantFunction, IndicatorFunction, LogWeight, PowerLogWeight, PowerWeight, PsiFunction,
    RemarkWeight,
)
from .lorentz_spaces import LambdaSpace, LorentzZygmundSpace
from .measure_core import StepFunction

_INFINITY_WORDS = {"inf", "+inf", "infinity", "+infinity"}


def _parse_exponent(value):
    if isinstance(value, str) and value.strip().lower() in _INFINITY_WORDS:
        return math.inf
    return value


# Functions

class StepFunctionModel(BaseModel):
    kind: Literal["step"]
    cells: List[List[float]]

    @field_validator("cells")
    @classmethod
    def pairs_only(cls, cells):
        if any(len(c) != 2 for c in cells):
            raise ValueError("every cell must be a [measure, value] pair")
        return cells

    def to_domain(self) -> StepFunction:
        return StepFunction([tuple(c) for c in self.cells])


class PsiModel(BaseModel):
    kind: Literal["psi"]
    p: float = Field(gt=1)
    alpha: float = 0.0

    def to_domain(self) -> PsiFunction:
        return PsiFunction(self.p, self.alpha)


class ConstModel(BaseModel):
    kind: Literal["const"]
    value: float = 1.0

    def to_domain(self) -> ConstantFunction:
        return ConstantFunction(self.value)


class IndicatorModel(BaseModel):
    kind: Literal["indicator"]
    t: float = Field(gt=0, le=1)
    height: float = 1.0

    def to_domain(self) -> IndicatorFunction:
        return IndicatorFunction(self.t, self.height)


FunctionModel = Annotated[
    Union[StepFunctionModel, PsiModel, ConstModel, IndicatorModel],
    Field(discriminator="kind"),
]


# Weights

class PowerWeightModel(BaseModel):
    kind: Literal["weight"] = "weight"
    variant: Literal["power"]
    gamma: float

    def to_domain(self) -> PowerWeight:
        return PowerWeight(self.gamma)


class PowerLogWeightModel(BaseModel):
    kind: Literal["weight"] = "weight"
    variant: Literal["powerlog"]
    p: float
    alpha: float = 0.0

    def to_domain(self) -> PowerLogWeight:
        return PowerLogWeight(self.p, self.alpha)


class RemarkWeightModel(BaseModel):
    kind: Literal["weight"] = "weight"
    variant: Literal["remark"]
    alpha: float
    C: float

    def to_domain(self) -> RemarkWeight:
        return RemarkWeight(self.alpha, self.C)


class LogWeightModel(BaseModel):
    kind: Literal["weight"] = "weight"
    variant: Literal["log"]
    C: float

    def to_domain(self) -> LogWeight:
        return LogWeight(self.C)


WeightModel = Annotated[
    Union[PowerWeightModel, PowerLogWeightModel, RemarkWeightModel, LogWeightModel],
    Field(discriminator="variant"),
]


# Spaces

class LorentzZygmundModel(BaseModel):
    space: Literal["lz", "lz0"]
    p: float = Field(gt=1)
    q: float = Field(ge=1)
    alpha: float = 0.0

    @field_validator("q", mode="before")
    @classmethod
    def infinite_q(cls, q):
        return _parse_exponent(q)

    @field_validator("p")
    @classmethod
    def finite_p(cls, p):
        if not math.isfinite(p):
            raise ValueError("p must be finite")
        return p

    def to_domain(self) -> LorentzZygmundSpace:
        return LorentzZygmundSpace(self.p, self.q, self.alpha, closure=self.space == "lz0")


class LambdaModel(BaseModel):
    space: Literal["lambda"]
    weight: WeightModel

    def to_domain(self) -> LambdaSpace:
        return LambdaSpace(self.weight.to_domain())


SpaceModel = Annotated[Union[LorentzZygmundModel, LambdaModel], Field(discriminator="space")]

function_adapter = TypeAdapter(FunctionModel)
space_adapter = TypeAdapter(SpaceModel)
weight_adapter = TypeAdapter(WeightModel)


def parse_function(text: str):
    return function_adapter.validate_json(text).to_domain()


def parse_space(text: str):
    return space_adapter.validate_json(text).to_domain()


def parse_weight(text: str):
    return weight_adapter.validate_json(text).to_domain()


# Run configuration

class RunConfig(BaseModel):
    command: str
    grid_n: int = Field(default=4096, ge=4, le=2 ** 20)
    levels: List[int] = Field(default_factory=lambda: list(range(10, 17)))
    seed: int = 7
    output_format: Literal["json", "csv"] = "json"
    output_path: Optional[str] = None
    timing: bool = False
    cells_per_octave: int = Field(default=16, ge=1, le=256)

    @model_validator(mode="after")
    def levels_increasing(self):
        if not self.levels:
            raise ValueError("levels must be nonempty")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("levels must be strictly increasing")
        if self.levels[0] < 1 or self.levels[-1] > 20:
            raise ValueError("levels must lie in [1, 20] (n = 2^level)")
        return self


def parse_levels(text: str) -> List[int]:
    """'10:16' (inclusive) or '10,12,14'"""
    text = text.strip()
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",") if v.strip()]
