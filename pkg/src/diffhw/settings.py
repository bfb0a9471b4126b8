from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Logs
    LOG_LEVEL: str = Field(default="INFO")

    # Mapper (passe avant)
    OVERLAP: bool = Field(default=True)  # False = mode additif t_c + t_mem + t_stream
    PREFETCH: bool = Field(default=True)
    PREFETCH_BW_THRESHOLD: float = Field(default=0.9)
    PREFETCH_CAPACITY_THRESHOLD: float = Field(default=0.9)
    HVTH: Optional[float] = Field(default=None)  # None = 10 x débit crête
    MAX_SPLIT_DEPTH: int = Field(default=40)

    # Paramètres / bornes
    BOUND_SPAN: float = Field(default=10.0)  # bornes = [seed / span, seed * span]

    # Optimiseur / sweep
    SWEEP_MAX_POINTS: int = Field(default=1_000_000)
    BOUNDARY_POINTS: int = Field(default=17)

    # Rapports
    FLOAT_FORMAT: str = Field(default="%.9g")

    model_config = SettingsConfigDict(env_prefix="DIFFHW_", env_file=".env", env_file_encoding="utf-8", extra="ignore")


settings = Settings()
