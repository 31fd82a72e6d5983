"""Runtime settings, read from the environment (and a local .env file)."""

from __future__ import annotations

import os

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

load_dotenv()

DEFAULT_DEPTH = 8
DEFAULT_LATTICE_CAP = 20
FORMAT_VERSION = 1


class ConfigError(Exception):
    """Raised when an environment override cannot be used."""

    def __init__(self, variable: str, detail: str):
        self.variable = variable
        self.detail = detail
        super().__init__(f"Bad value for {variable}: {detail}")


class Settings(BaseModel):
    """Tunable limits shared by the library and the CLI."""

    condition_b_depth: int = Field(default=DEFAULT_DEPTH, ge=1)
    lattice_cap: int = Field(default=DEFAULT_LATTICE_CAP, ge=0)
    format_version: int = FORMAT_VERSION
    # None means 2·|Λ^0| per color
    ideal_degree_cap: int | None = Field(default=None, ge=0)
    corpus_seed: int = 0
    # Suite processes; None means one per CPU
    workers: int | None = Field(default=None, ge=1)


# Environment variable → Settings field
ENV_OVERRIDES = {
    "KPLAT_DEPTH": "condition_b_depth",
    "KPLAT_LATTICE_CAP": "lattice_cap",
    "KPLAT_IDEAL_CAP": "ideal_degree_cap",
    "KPLAT_SEED": "corpus_seed",
    "KPLAT_WORKERS": "workers",
}


def load_settings(**overrides: int | None) -> Settings:
    """Build Settings from defaults, then the environment, then ``overrides``.

    Keyword overrides whose value is None are ignored, so CLI flags that were
    not given fall through to the environment.
    """
    values: dict[str, int] = {}
    for variable, field_name in ENV_OVERRIDES.items():
        raw = os.getenv(variable)
        if raw is None or raw.strip() == "":
            continue
        try:
            values[field_name] = int(raw)
        except ValueError:
            raise ConfigError(variable, f"expected an integer, got {raw!r}") from None

    values.update({k: v for k, v in overrides.items() if v is not None})

    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigError(",".join(sorted(values)), str(e)) from None
