"""Schémas de l'optimiseur : objectif, configuration, scénario produit scalaire."""
from __future__ import annotations

import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from diffhw.errors import from_pydantic
from diffhw.expr import Const, Expr, add, div, exp, mul, sub
from diffhw.mapper.config import load_yaml_section


class ObjectiveKind(str, Enum):
    TIME = "time"
    ENERGY = "energy"
    EDP = "edp"


class Penalty(str, Enum):
    LAGRANGE = "lagrange"
    EXPONENTIAL = "exponential"


class Objective(BaseModel):
    """F ∈ {temps, énergie, EDP} sous contrainte de surface a ≤ A."""

    kind: ObjectiveKind = ObjectiveKind.EDP
    area_max: float = Field(gt=0)
    lagrange: float = Field(default=0.0, ge=0)
    penalty: Penalty = Penalty.LAGRANGE

    model_config = {"frozen": True, "extra": "forbid"}

    def figure(self, runtime: float, energy: float) -> float:
        if self.kind is ObjectiveKind.TIME:
            return runtime
        if self.kind is ObjectiveKind.ENERGY:
            return energy
        return energy * runtime

    def figure_expr(self, runtime: Expr, energy: Expr) -> Expr:
        if self.kind is ObjectiveKind.TIME:
            return runtime
        if self.kind is ObjectiveKind.ENERGY:
            return energy
        return mul(energy, runtime)

    def value(self, figure: float, area: float) -> float:
        """Objectif pénalisé : F + λ(a − A) ou F·e^((a − A)/A)."""
        if math.isinf(self.area_max):
            return figure
        if self.penalty is Penalty.EXPONENTIAL:
            return figure * math.exp((area - self.area_max) / self.area_max)
        return figure + self.lagrange * (area - self.area_max)

    def expr(self, figure: Expr, area: Expr) -> Expr:
        if math.isinf(self.area_max):
            return figure
        a_max = Const(self.area_max)
        if self.penalty is Penalty.EXPONENTIAL:
            return mul(figure, exp(div(sub(area, a_max), a_max)))
        return add(figure, mul(Const(self.lagrange), sub(area, a_max)))

    def feasible(self, area: float) -> bool:
        return area <= self.area_max


class OptimizerConfig(BaseModel):
    learning_rate: Optional[float] = Field(default=None, gt=0)  # None = auto (pas initial ≤ max_step)
    max_step: float = Field(default=0.1, gt=0, le=1)
    max_epochs: int = Field(default=50, ge=1)
    tolerance: float = Field(default=1e-4, gt=0)
    target: Optional[float] = Field(default=None, gt=0)
    boundary_check: bool = True
    max_backtrack: int = Field(default=4, ge=0)
    increase_tolerance: float = Field(default=0.05, ge=0)

    model_config = {"frozen": True, "extra": "forbid"}


class BoundedParam(BaseModel):
    seed: float = Field(gt=0)
    lower: float = Field(gt=0)
    upper: float = Field(gt=0)

    @model_validator(mode="after")
    def _ordered(self) -> "BoundedParam":
        if not self.lower <= self.seed <= self.upper:
            raise ValueError(f"seed {self.seed} hors de [{self.lower}, {self.upper}]")
        return self


class DotProductConfig(BaseModel):
    """Produit scalaire par tuiles : B mots de SRAM, P multiplieurs."""

    chunks: List[int] = Field(default_factory=lambda: [1024, 2048, 512, 4096])
    t1: float = Field(default=100.0, ge=0)
    t2: float = Field(default=10.0, ge=0)
    t4: float = Field(default=4.0, ge=0)
    t5: float = Field(default=2.0, ge=0)
    sram_area: float = Field(default=0.002, gt=0)
    mult_area: float = Field(default=0.05, gt=0)
    adder_area: float = Field(default=0.01, ge=0)
    block: BoundedParam = Field(default_factory=lambda: BoundedParam(seed=16, lower=1, upper=4096))
    lanes: BoundedParam = Field(default_factory=lambda: BoundedParam(seed=2, lower=1, upper=256))

    model_config = {"extra": "forbid"}

    @field_validator("chunks")
    @classmethod
    def _positive_chunks(cls, v: List[int]) -> List[int]:
        if not v or any(n <= 0 for n in v):
            raise ValueError("chunks doit contenir des tailles strictement positives")
        return v


def _load(model: type[BaseModel], path: Optional[Union[str, Path]], section: str, overrides: Dict[str, Any]) -> Any:
    values: Dict[str, Any] = load_yaml_section(path, section) if path else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return model(**values)
    except PydanticValidationError as exc:
        raise from_pydantic(exc, f"{section}.") from None


def load_optimizer_config(path: Optional[Union[str, Path]] = None, **overrides: Any) -> OptimizerConfig:
    return _load(OptimizerConfig, path, "optimizer", overrides)


def load_objective(path: Optional[Union[str, Path]] = None, **overrides: Any) -> Objective:
    return _load(Objective, path, "objective", overrides)


def load_dotproduct_config(path: Optional[Union[str, Path]] = None, **overrides: Any) -> DotProductConfig:
    return _load(DotProductConfig, path, "dotproduct", overrides)
