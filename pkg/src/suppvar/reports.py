"""Run parameters and report emission."""
from __future__ import annotations

import enum
import json
import logging
import os
from typing import Optional

from pydantic import BaseModel, Field, ValidationError, model_validator

from .config import read_config
from .errors import InvalidParams
from .utils.jsonio import write_json_atomic
from .utils.tables import render_text

logger = logging.getLogger(__name__)

run_config = read_config()['Run']
resolve_config = read_config()['Resolve']

GROWTH_COMMANDS = {"complexity", "fpdim", "split", "connectedness", "corpus", "lzeta"}


class OutputFormat(str, enum.Enum):
    JSON = "json"
    TEXT = "text"


class RunConfig(BaseModel):
    """Parameters shared by every run command."""

    command: str
    algebra: Optional[str] = None
    module: Optional[str] = None
    zeta: list[str] = Field(default_factory=list)
    fixture: Optional[str] = None
    depth: int = Field(default=int(resolve_config.get('depth', 12)), ge=0)
    seed: int = Field(default=int(run_config.get('seed', 0)))
    cache_dir: Optional[str] = resolve_config.get('cache_dir', None)
    out: Optional[str] = run_config.get('out_dir', None)
    format: OutputFormat = OutputFormat(run_config.get('format', 'json'))

    @model_validator(mode="after")
    def _growth_depth(self):
        if self.command in GROWTH_COMMANDS and self.depth < 8:
            raise ValueError(f"{self.command} needs depth >= 8 to estimate growth")
        return self


def run_config_from(**kwargs) -> RunConfig:
    try:
        return RunConfig(**kwargs)
    except ValidationError as e:
        raise InvalidParams("invalid run parameters",
                            errors=[{"field": ".".join(str(p) for p in err["loc"]), "message": err["msg"]}
                                    for err in e.errors()]) from e


def stamp(payload: dict, cfg: RunConfig, algebra_hash: Optional[str] = None) -> dict:
    out = {"command": cfg.command, "depth": cfg.depth, "seed": cfg.seed}
    if algebra_hash is not None:
        out["algebra_hash"] = algebra_hash
    out.update(payload)
    return out


def _jsonable(value):
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "tolist"):
        return value.tolist()
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def emit(payload: dict, cfg: RunConfig, name: str) -> str:
    """Write the report to cfg.out (when set) and return the text printed on stdout."""
    report = _jsonable(payload)
    if cfg.out:
        path = os.path.join(cfg.out, f"{name}.json")
        write_json_atomic(path, report)
        logger.info("report written to %s", path)
    if cfg.format == OutputFormat.TEXT:
        return render_text(report)
    return json.dumps(report, indent=1, sort_keys=True)
