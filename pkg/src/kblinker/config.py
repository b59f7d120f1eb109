"""Linker and service configuration.

Precedence: built-in defaults < properties file < environment variables
< per-request query parameters.  Properties files are ``key=value`` lines;
environment variables use the same keys uppercased with an ``AGD_`` prefix.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from .errors import InvalidValue

ENV_PREFIX = "AGD_"

ALGORITHMS = ("hits", "pagerank")


@dataclass(frozen=True)
class LinkerConfig:
    """The tuning parameters of the online phase."""

    popularity: bool = False
    algorithm: str = "hits"
    context: bool = False
    acronym: bool = False
    common_entities: bool = False
    ngram_distance: int = 3
    depth: int = 2
    heuristic_expansion: bool = True
    sim_threshold: float = 0.82
    max_candidates: int = 100
    # Scoring internals, settable programmatically but not wire-exposed.
    hits_iterations: int = 20
    pagerank_iterations: int = 50
    damping: float = 0.85

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InvalidValue("algorithm", self.algorithm)
        if self.ngram_distance < 2:
            raise InvalidValue("ngramDistance", self.ngram_distance)
        if self.depth < 0:
            raise InvalidValue("depth", self.depth)
        if not 0.0 <= self.sim_threshold <= 1.0:
            raise InvalidValue("simThreshold", self.sim_threshold)
        if self.max_candidates < 1:
            raise InvalidValue("maxCandidates", self.max_candidates)
        if not 0.0 <= self.damping < 1.0:
            raise InvalidValue("damping", self.damping)
        if self.hits_iterations < 1 or self.pagerank_iterations < 1:
            raise InvalidValue("iterations", (self.hits_iterations, self.pagerank_iterations))


@dataclass(frozen=True)
class ServiceConfig:
    linker: LinkerConfig = field(default_factory=LinkerConfig)
    host: str = "127.0.0.1"
    port: int = 8080
    bundle_dir: str | None = None
    max_request_bytes: int = 1_048_576

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise InvalidValue("port", self.port)


# Wire/property key -> LinkerConfig attribute.
LINKER_KEYS = {
    "popularity": "popularity",
    "algorithm": "algorithm",
    "context": "context",
    "acronym": "acronym",
    "commonEntities": "common_entities",
    "ngramDistance": "ngram_distance",
    "depth": "depth",
    "heuristicExpansion": "heuristic_expansion",
    "simThreshold": "sim_threshold",
    "maxCandidates": "max_candidates",
}

# The subset that may be overridden per request.
REQUEST_KEYS = (
    "popularity",
    "algorithm",
    "context",
    "acronym",
    "commonEntities",
    "ngramDistance",
    "depth",
    "heuristicExpansion",
)

SERVICE_KEYS = ("port", "bundleDir")


def _parse_bool(key: str, value: str) -> bool:
    lowered = value.strip().lower()
    if lowered == "true":
        return True
    if lowered == "false":
        return False
    raise InvalidValue(key, value)


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value.strip())
    except ValueError:
        raise InvalidValue(key, value)


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value.strip())
    except ValueError:
        raise InvalidValue(key, value)


def _coerce(key: str, value: str):
    attr = LINKER_KEYS[key]
    kind = LinkerConfig.__dataclass_fields__[attr].type
    if kind == "bool":
        return _parse_bool(key, value)
    if kind == "int":
        return _parse_int(key, value)
    if kind == "float":
        return _parse_float(key, value)
    lowered = value.strip().lower()
    if key == "algorithm" and lowered not in ALGORITHMS:
        raise InvalidValue(key, value)
    return lowered


def read_properties(path: str | Path) -> dict[str, str]:
    """Parse key=value lines; blank lines and # comments are skipped."""
    values: dict[str, str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidValue("properties line", raw)
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def apply_overrides(cfg: LinkerConfig, params: Mapping[str, str],
                    allowed: tuple[str, ...] = tuple(LINKER_KEYS)) -> LinkerConfig:
    """Return cfg with the recognized keys replaced; validates each value."""
    changes = {}
    for key, value in params.items():
        if key in allowed and key in LINKER_KEYS:
            changes[LINKER_KEYS[key]] = _coerce(key, value)
    return replace(cfg, **changes) if changes else cfg


def load_config(
    properties_path: str | Path | None = None,
    environ: Mapping[str, str] | None = None,
) -> ServiceConfig:
    """Resolve the deploy-time configuration."""
    environ = os.environ if environ is None else environ

    merged: dict[str, str] = {}
    if properties_path is not None:
        merged.update(read_properties(properties_path))
    for key in list(LINKER_KEYS) + list(SERVICE_KEYS):
        env_key = ENV_PREFIX + key.upper()
        if env_key in environ:
            merged[key] = environ[env_key]

    linker = apply_overrides(LinkerConfig(), merged)
    port = _parse_int("port", merged["port"]) if "port" in merged else 8080
    bundle_dir = merged.get("bundleDir")
    return ServiceConfig(linker=linker, port=port, bundle_dir=bundle_dir)
