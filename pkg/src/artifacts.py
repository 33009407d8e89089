"""
CSV data files and JSON sidecars written by the experiment runner.

Floats are printed with ``CSV_SIGNIFICANT_DIGITS`` significant digits so that
a CSV parses back to the doubles that produced it.
"""

import csv
import json
import logging
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from src.config import settings
from src.exceptions import DomainError

logger = logging.getLogger(__name__)


def format_value(value: Any, digits: int | None = None) -> str:
    digits = digits or settings.CSV_SIGNIFICANT_DIGITS
    if isinstance(value, bool | np.bool_):
        return str(int(value))
    if isinstance(value, int | np.integer):
        return str(int(value))
    if isinstance(value, float | np.floating):
        return f"{float(value):.{digits}g}"
    return str(value)


def to_jsonable(value: Any) -> Any:
    """numpy scalars and arrays, paths and nested containers as plain JSON types."""
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [to_jsonable(v) for v in value]
    return value


def write_csv(
    path: Path, columns: Mapping[str, Sequence], digits: int | None = None
) -> int:
    """Write equal-length ``columns`` as a CSV with a header row; returns the row count."""
    lengths = {name: len(values) for name, values in columns.items()}
    if len(set(lengths.values())) > 1:
        raise DomainError(f"CSV columns differ in length: {lengths}")
    rows = list(zip(*columns.values(), strict=True))
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns.keys())
        for row in rows:
            writer.writerow(format_value(v, digits) for v in row)
    logger.info(f"Wrote {len(rows)} rows to {path}")
    return len(rows)


def write_sidecar(path: Path, payload: Mapping[str, Any]) -> None:
    """JSON sidecar; ``schema_version`` is always the first key."""
    body = {"schema_version": settings.SCHEMA_VERSION, **to_jsonable(payload)}
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(body, indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote sidecar {path}")


def read_sidecar(path: Path) -> dict[str, Any]:
    return json.loads(Path(path).read_text(encoding="utf-8"))
