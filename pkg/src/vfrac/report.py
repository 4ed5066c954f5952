from __future__ import annotations

import math
import time
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Literal, Optional

import numpy as np
import typer
from pydantic import BaseModel, Field

from vfrac.io import dumps_records, dumps_value, render_csv, write_csv, write_records

OutputFormat = Literal["json", "csv"]


def plain(value: Any) -> Any:
    """
    Convert numpy scalars/arrays and complex numbers into JSON-ready values.
    Non-finite floats become the strings "inf", "-inf" and "nan".
    """
    if isinstance(value, np.ndarray):
        return [plain(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        if value.imag == 0:
            return float(value.real)
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


class ReportRecord(BaseModel):
    """One operator run; field order is the output column order."""

    operator: str
    inputs: Dict[str, Any] = Field(default_factory=dict)
    value: Any = None
    error_estimate: Optional[float] = None
    residual: Optional[float] = None
    tolerance: Optional[float] = None
    passed: Optional[bool] = None
    error: Optional[str] = None
    message: Optional[str] = None
    wall_ms: float = 0.0

    @property
    def failed(self) -> bool:
        return self.error is not None or self.passed is False

    def as_row(self) -> Dict[str, Any]:
        return {name: plain(getattr(self, name)) for name in type(self).model_fields}


COLUMNS: List[str] = list(ReportRecord.model_fields)


@contextmanager
def stopwatch() -> Iterator[Dict[str, float]]:
    """Yields a dict whose 'ms' entry is filled when the block exits."""
    box = {"ms": 0.0}
    start = time.perf_counter()
    try:
        yield box
    finally:
        box["ms"] = round((time.perf_counter() - start) * 1000.0, 3)


def _csv_row(row: Dict[str, Any]) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for key, value in row.items():
        if isinstance(value, (dict, list)):
            out[key] = dumps_value(value, separators=(",", ":"))
        else:
            out[key] = value
    return out


def render(records: List[ReportRecord], fmt: OutputFormat = "json") -> str:
    rows = [r.as_row() for r in records]
    if fmt == "json":
        return dumps_records(rows)
    if fmt == "csv":
        return render_csv([_csv_row(r) for r in rows], COLUMNS)
    raise ValueError(f"Unknown output format: {fmt}")


def emit(
    records: List[ReportRecord], fmt: OutputFormat = "json", out: Optional[str] = None
) -> None:
    """Write the report to `out`, or to stdout when no path is given."""
    if out is None:
        typer.echo(render(records, fmt), nl=False)
        return
    rows = [r.as_row() for r in records]
    if fmt == "json":
        write_records(out, rows)
    else:
        write_csv(out, [_csv_row(r) for r in rows], COLUMNS)
