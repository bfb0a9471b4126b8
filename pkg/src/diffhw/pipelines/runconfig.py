"""Configuration d'une exécution : chemins, surcharges, grilles."""
from __future__ import annotations

import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator
from pydantic import ValidationError as PydanticValidationError

from diffhw.errors import GridTooLarge, ValidationError, from_pydantic
from diffhw.settings import settings


class RunConfig(BaseModel):
    """Entrées vérifiées avant tout calcul ; sorties écrites atomiquement."""

    subcommand: str
    inputs: Dict[str, Path] = Field(default_factory=dict)
    outputs: Dict[str, Optional[Path]] = Field(default_factory=dict)
    overrides: Dict[str, float] = Field(default_factory=dict)
    seed: Optional[int] = None

    model_config = {"frozen": True, "extra": "forbid"}

    @model_validator(mode="after")
    def _inputs_exist(self) -> "RunConfig":
        missing = [f"{k}={p}" for k, p in self.inputs.items() if not p.is_file()]
        if missing:
            raise ValueError(f"fichiers introuvables: {', '.join(missing)}")
        return self


def run_config(subcommand: str, **fields) -> RunConfig:
    inputs = {k: v for k, v in (fields.pop("inputs", None) or {}).items() if v is not None}
    try:
        return RunConfig(subcommand=subcommand, inputs=inputs, **fields)
    except PydanticValidationError as exc:
        raise from_pydantic(exc, f"{subcommand}.") from None


def _number(text: str, where: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValidationError(f"{where}: nombre attendu, reçu {text!r}") from None


def parse_assignments(items: Sequence[str]) -> Dict[str, float]:
    """`name=value` → {name: value} ; l'ordre de la ligne de commande est conservé."""
    out: Dict[str, float] = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise ValidationError(f"surcharge invalide {item!r} (attendu name=value)")
        out[name.strip()] = _number(value.strip(), name.strip())
    return out


def parse_axis(text: str, where: str) -> List[float]:
    """`v1,v2,...`, `lo:hi:n` (linspace) ou `pow2:lo:hi`."""
    if text.startswith("pow2:"):
        parts = text.split(":")[1:]
        if len(parts) != 2:
            raise ValidationError(f"{where}: attendu pow2:lo:hi")
        lo, hi = (_number(p, where) for p in parts)
        if lo <= 0 or hi < lo:
            raise ValidationError(f"{where}: bornes pow2 invalides")
        k_lo, k_hi = math.ceil(math.log2(lo)), math.floor(math.log2(hi))
        return [float(v) for v in np.exp2(np.arange(k_lo, k_hi + 1, dtype=float))]
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"{where}: attendu lo:hi:n")
        lo, hi = _number(parts[0], where), _number(parts[1], where)
        n = int(_number(parts[2], where))
        if n < 1:
            raise ValidationError(f"{where}: n doit être ≥ 1")
        return [float(v) for v in np.linspace(lo, hi, n)]
    values = [_number(v.strip(), where) for v in text.split(",") if v.strip()]
    if not values:
        raise ValidationError(f"{where}: axe vide")
    return values


def parse_grid(items: Sequence[str]) -> Dict[str, List[float]]:
    """`name=axe` répétés ; la taille est vérifiée au moment du balayage."""
    grid: Dict[str, List[float]] = {}
    for item in items:
        name, sep, axis = item.partition("=")
        if not sep or not name.strip():
            raise ValidationError(f"grille invalide {item!r} (attendu name=axe)")
        grid[name.strip()] = parse_axis(axis.strip(), name.strip())
    return grid


def check_grid_size(grid: Dict[str, List[float]], max_points: Optional[int] = None) -> int:
    limit = max_points if max_points is not None else settings.SWEEP_MAX_POINTS
    size = math.prod(len(v) for v in grid.values()) if grid else 1
    if size > limit:
        raise GridTooLarge(f"grille de {size} points (> {limit})")
    return size
