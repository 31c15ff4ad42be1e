"""JSON reading with schema validation and deterministic writing."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import TrialgError
from .nestlab.space import BlockOperator
from .tsys.system import ExtTriSystem

__all__ = ["InputError", "dumps", "load_document", "load_system", "load_operator", "schema"]


class InputError(TrialgError, ValueError):
    """A document could not be read; ``position`` locates the problem when known."""

    def __init__(self, message: str, position: str | None = None):
        super().__init__(message if position is None else f"{message} (at {position})")
        self.position = position


@lru_cache(maxsize=None)
def schema(name: str) -> dict:
    text = resources.files("trialg").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def load_document(path: str | Path, kind: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from None
    err = jsonschema.exceptions.best_match(jsonschema.Draft202012Validator(schema(kind)).iter_errors(data))
    if err is not None:
        pointer = "/" + "/".join(str(p) for p in err.absolute_path)
        raise InputError(f"{path}: {err.message}", f"JSON path {pointer}")
    return data


def load_system(path: str | Path) -> ExtTriSystem:
    data = load_document(path, "system")
    try:
        return ExtTriSystem.from_json(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from None


def load_operator(path: str | Path) -> BlockOperator:
    data = load_document(path, "operator")
    try:
        return BlockOperator.from_json(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from None
