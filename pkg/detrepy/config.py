"""
Run settings for the detrepy command line.

Library functions take explicit keyword arguments whose defaults match
:class:`Settings`; only the CLI reads configuration files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import BaseModel, Field, field_validator

from .exactfield import resolve_field

MIN_CERTIFICATE_POINTS = 13


class Settings(BaseModel):
    """Effective configuration of a run."""

    field: str = Field(default="Q", description="Default field name (Q, Qi, F2, F4, Fp:<p>, Fp2:<p>)")
    seed: int = Field(default=0, description="Seed for every sampled group element")
    samples: int = Field(default=25, description="Group elements sampled by the necessary-condition check")
    retry_budget: int = Field(default=20, description="Group elements tried before transport gives up")
    search_bound: int = Field(default=6, description="Largest n accepted by the general image search")
    family_bound: int = Field(default=4, description="Largest n accepted by the family verification")
    sl2_bound: int = Field(default=5, description="Entry bound for random SL2 elements")
    exhaustive_support_limit: int = Field(
        default=3, description="Most variables searched exhaustively in characteristic 2"
    )
    certificate_points: int = Field(default=13, description="Size of the specialization grid per variable")

    @field_validator("field", mode="before")
    @classmethod
    def validate_field(cls, v):
        """Field names must resolve."""
        resolve_field(str(v))
        return str(v)

    @field_validator(
        "samples", "retry_budget", "search_bound", "family_bound", "sl2_bound", "exhaustive_support_limit"
    )
    @classmethod
    def positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be a positive integer")
        return v

    @field_validator("certificate_points")
    @classmethod
    def enough_points(cls, v: int) -> int:
        if v < MIN_CERTIFICATE_POINTS:
            raise ValueError(f"need at least {MIN_CERTIFICATE_POINTS} points")
        return v

    def to_yaml(self, path: Union[str, Path]) -> None:
        """Write the effective configuration."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            yaml.safe_dump(self.model_dump(), f, sort_keys=False, allow_unicode=True)

    def merged(self, **overrides: Any) -> "Settings":
        """Copy with every non-None override applied."""
        data = self.model_dump()
        data.update({k: v for k, v in overrides.items() if v is not None})
        return Settings(**data)


def load_settings(path: Optional[Union[str, Path]] = None) -> Settings:
    """
    Load settings from YAML or JSON, merged over the defaults.

    Parameters
    ----------
    path : str or Path, optional
        Configuration file. ``None`` returns the defaults.

    Returns
    -------
    Settings
    """
    if path is None:
        return Settings()
    text = Path(path).read_text(encoding="utf-8")
    data: Dict[str, Any]
    if str(path).endswith(".json"):
        data = json.loads(text)
    else:
        data = yaml.safe_load(text) or {}
    if not isinstance(data, dict):
        raise ValueError(f"configuration in {path} must be a mapping")
    unknown = set(data) - set(Settings.model_fields)
    if unknown:
        raise ValueError(f"unknown configuration keys: {sorted(unknown)}")
    return Settings(**data)
