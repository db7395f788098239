"""YAML configuration for the pipeline, connectors, and service."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError
from .model import DEFAULT_BASE

DEFAULT_CONFIG_NAME = "litkg.yaml"


@dataclass
class Config:
    base_iri: str = DEFAULT_BASE
    threshold: float = 0.7
    qa_seed: int = 42
    qa_per_bucket: int = 100

    wikidata_dump: Path | None = None
    openlibrary_dump: Path | None = None
    goodreads_dump: Path | None = None
    viaf_isbns: Path | None = None
    cache_dir: Path | None = None
    out_dir: Path = Path("out")

    sparql_endpoint: str = "https://query.wikidata.org/sparql"
    openlibrary_base: str = "https://openlibrary.org"
    goodreads_base: str = "https://www.goodreads.com"
    goodreads_sitemap: str = "https://www.goodreads.com/siteindex.author.xml"

    cors_origins: list[str] = field(default_factory=list)
    ui_dir: Path | None = None

    def require(self, name: str) -> Path:
        value = getattr(self, name)
        if value is None:
            raise ConfigError(f"config is missing the {name!r} path")
        return value


_PATH_KEYS = (
    "wikidata_dump",
    "openlibrary_dump",
    "goodreads_dump",
    "viaf_isbns",
    "cache_dir",
    "out_dir",
    "ui_dir",
)
_SCALAR_KEYS = {
    "base_iri": str,
    "threshold": (int, float),
    "qa_seed": int,
    "qa_per_bucket": int,
    "sparql_endpoint": str,
    "openlibrary_base": str,
    "goodreads_base": str,
    "goodreads_sitemap": str,
}


def config_from_dict(data: dict, base_dir: Path) -> Config:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    cfg = Config()
    known = set(_PATH_KEYS) | set(_SCALAR_KEYS) | {"cors_origins"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key, expected in _SCALAR_KEYS.items():
        if key in data and data[key] is not None:
            value = data[key]
            if not isinstance(value, expected) or isinstance(value, bool):
                raise ConfigError(f"config key {key!r} has the wrong type")
            setattr(cfg, key, float(value) if key == "threshold" else value)
    if not (0.0 <= cfg.threshold <= 1.0):
        raise ConfigError(f"threshold must be within [0, 1], got {cfg.threshold}")
    for key in _PATH_KEYS:
        if key in data and data[key] is not None:
            if not isinstance(data[key], str):
                raise ConfigError(f"config key {key!r} must be a path string")
            setattr(cfg, key, (base_dir / data[key]).resolve())
    cfg.out_dir = (base_dir / data.get("out_dir", "out")).resolve()
    origins = data.get("cors_origins", [])
    if origins is None:
        origins = []
    if not isinstance(origins, list) or not all(isinstance(o, str) for o in origins):
        raise ConfigError("cors_origins must be a list of strings")
    cfg.cors_origins = origins
    return cfg


def load_config(path: str | Path) -> Config:
    path = Path(path)
    try:
        text = path.read_text("utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    if data is None:
        data = {}
    return config_from_dict(data, path.resolve().parent)
