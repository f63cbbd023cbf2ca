"""Bundled model corpus and golden-file locations."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .algebra import LieModel, parse_model

__all__ = [
    "available_models",
    "data_path",
    "golden_path",
    "load_model",
    "load_document",
]

_MODELS = ("torus1", "torus2", "torus3", "iwasawa", "kodaira_thurston", "nonunimodular")


def data_path(filename: str) -> Path:
    return Path(str(resources.files("pluriclosed") / "data" / filename))


def golden_path(model_name: str, command: str) -> Path:
    return Path(str(resources.files("pluriclosed") / "data" / "golden" / f"{model_name}_{command}.json"))


def available_models() -> tuple[str, ...]:
    return _MODELS


def load_document(name_or_path: str) -> dict:
    """JSON document from a bundled fixture name or a filesystem path."""
    path = Path(name_or_path)
    if not path.exists():
        candidate = data_path(f"{name_or_path}.json")
        if candidate.exists():
            path = candidate
    return json.loads(path.read_text(encoding="utf-8"))


def load_model(name_or_path: str) -> LieModel:
    return parse_model(load_document(name_or_path))
