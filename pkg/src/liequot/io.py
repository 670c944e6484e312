"""JSON readers and writers for configurations and reports."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from ._exact import fmt, to_fraction
from .errors import ConfigurationError
from .vgit import WeightConfig


class ParseError(ConfigurationError):
    """Malformed JSON input; carries the line and column of the failure."""

    def __init__(self, message: str, source: str = "<input>", line: int | None = None, col: int | None = None):
        where = source if line is None else f"{source}:{line}:{col}"
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line
        self.col = col


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, source, exc.lineno, exc.colno) from None


def load(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, str(path))


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _rational(x, what: str):
    try:
        return to_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ConfigurationError(f"{what}: cannot read {x!r} as a rational number") from None


def weight_config_from_json(obj: Any) -> WeightConfig:
    """Build a :class:`WeightConfig` from ``{"rank": r, "weights": [{"w": [...], "mult": m}, ...]}``.

    Bare coordinate lists are accepted in place of ``{"w": ...}`` records.
    """
    if not isinstance(obj, dict):
        raise ConfigurationError("weight config must be a JSON object")
    if "rank" not in obj or "weights" not in obj:
        raise ConfigurationError("weight config needs 'rank' and 'weights'")
    rank = obj["rank"]
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise ConfigurationError("'rank' must be an integer")
    entries = obj["weights"]
    if not isinstance(entries, list):
        raise ConfigurationError("'weights' must be a list")
    if not entries:
        raise ConfigurationError("weight list is empty")
    weights, mults = [], []
    for k, e in enumerate(entries):
        if isinstance(e, dict):
            coords, mult = e.get("w"), e.get("mult", 1)
        else:
            coords, mult = e, 1
        if not isinstance(coords, list):
            raise ConfigurationError(f"weight {k}: coordinates must be a list")
        if not isinstance(mult, int) or isinstance(mult, bool):
            raise ConfigurationError(f"weight {k}: multiplicity must be an integer")
        weights.append(tuple(_rational(x, f"weight {k}") for x in coords))
        mults.append(mult)
    gram = obj.get("gram")
    if gram is not None:
        if not isinstance(gram, list) or not all(isinstance(row, list) for row in gram):
            raise ConfigurationError("'gram' must be a list of rows")
        gram = tuple(tuple(_rational(x, "gram") for x in row) for row in gram)
    return WeightConfig(rank, tuple(weights), tuple(mults), gram or ())


def weight_config_to_json(cfg: WeightConfig) -> dict:
    return cfg.to_json()


def parse_region(spec: str, rank: int | None = None) -> list[tuple]:
    """Parse ``lo:hi,lo:hi,...`` into per-axis bounds."""
    bounds = []
    for part in spec.split(","):
        if part.count(":") != 1:
            raise ConfigurationError(f"region axis {part!r} is not of the form lo:hi")
        lo, hi = (_rational(x.strip(), "region") for x in part.split(":"))
        if lo >= hi:
            raise ConfigurationError(f"region axis {part!r} is empty")
        bounds.append((lo, hi))
    if rank is not None and len(bounds) != rank:
        raise ConfigurationError(f"region has {len(bounds)} axes, configuration has rank {rank}")
    return bounds


def vector_to_json(v) -> list[str]:
    return [fmt(x) for x in v]


def matrix_to_json(m) -> list[list[str]]:
    return [[fmt(x) for x in row] for row in m]
