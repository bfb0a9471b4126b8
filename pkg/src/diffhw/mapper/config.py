"""Configuration du mapper (YAML + Settings)."""
from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import BaseModel, Field
from pydantic import ValidationError as PydanticValidationError

from diffhw.errors import from_pydantic
from diffhw.settings import settings
from diffhw.utils.io import read_text


class MapperConfig(BaseModel):
    overlap: bool = Field(default_factory=lambda: settings.OVERLAP)
    prefetch: bool = Field(default_factory=lambda: settings.PREFETCH)
    prefetch_bw_threshold: float = Field(default_factory=lambda: settings.PREFETCH_BW_THRESHOLD, gt=0, le=1)
    prefetch_capacity_threshold: float = Field(default_factory=lambda: settings.PREFETCH_CAPACITY_THRESHOLD, gt=0, le=1)
    hvth: Optional[float] = Field(default_factory=lambda: settings.HVTH, ge=0)
    max_split_depth: int = Field(default_factory=lambda: settings.MAX_SPLIT_DEPTH, ge=0)

    model_config = {"frozen": True, "extra": "forbid"}


def load_yaml_section(path: Union[str, Path], section: str) -> Dict[str, Any]:
    """Lit une section d'un fichier YAML de configuration (vide si absente)."""
    data = yaml.safe_load(read_text(path)) or {}
    return data.get(section) or {}


def load_mapper_config(path: Optional[Union[str, Path]] = None, **overrides: Any) -> MapperConfig:
    values: Dict[str, Any] = load_yaml_section(path, "mapper") if path else {}
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return MapperConfig(**values)
    except PydanticValidationError as exc:
        raise from_pydantic(exc, "mapper.") from None
