"""Flat ``key=value`` configuration files with ``#`` comments."""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .dimgroup import DimGroupParams, validate_params
from .exceptions import InvalidParams
from .quad import RingParams

ENV_VAR = "DIMFORGE_CONFIG"

_KEYS = {
    "d": "d", "p": "p", "s": "s", "m1": "m1", "m2": "m2",
    "searchbound": "search_bound", "search_bound": "search_bound",
    "sievecap": "sieve_cap", "sieve_cap": "sieve_cap",
    "outputmode": "output_mode", "output_mode": "output_mode",
}


@dataclass(frozen=True)
class Config:
    d: int = 3
    p: int = 5
    s: int = 6
    m1: int = 9
    m2: int = 3
    search_bound: int = 50
    sieve_cap: int = 360
    output_mode: str = "text"

    @property
    def ring(self) -> RingParams:
        return RingParams(self.d, self.p)

    @property
    def params(self) -> DimGroupParams:
        return DimGroupParams(self.ring, self.s, self.m1, self.m2)

    def validate(self) -> None:
        if self.search_bound < 1 or self.sieve_cap < 2:
            raise InvalidParams("searchBound must be >= 1 and sieveCap >= 2")
        if self.output_mode not in ("text", "structured"):
            raise InvalidParams(f"outputMode must be text or structured, not {self.output_mode!r}")
        validate_params(self.params)


def parse_config(text: str) -> Config:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        field = _KEYS.get(key.strip().lower())
        if field is None:
            raise ValueError(f"line {lineno}: unknown key {key.strip()!r}")
        value = value.strip()
        values[field] = value if field == "output_mode" else int(value)
    cfg = Config(**values)
    cfg.validate()
    return cfg


def default_config_text() -> str:
    return resources.files("dimforge").joinpath("paper.cfg").read_text()


def load_config(path: str | os.PathLike | None = None) -> Config:
    """Explicit path, else $DIMFORGE_CONFIG, else the shipped reference instance."""
    path = path or os.environ.get(ENV_VAR)
    text = Path(path).read_text() if path else default_config_text()
    return parse_config(text)
