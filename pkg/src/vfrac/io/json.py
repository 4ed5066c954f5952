from __future__ import annotations

import json
import math
import re
from typing import Any, Dict, List, Optional, Tuple

# Finite floats are swapped for indexed string slots before encoding, then written back
# with 17 significant digits; the json module always prints the shortest repr.
_SLOT = re.compile(r'"\\u0000(\d+)"')


def _float17(value: float) -> str:
    text = format(value, ".17g")
    return text if "." in text or "e" in text else text + ".0"


def _slot_floats(value: Any, digits: List[str]) -> Any:
    if isinstance(value, float) and math.isfinite(value):
        digits.append(_float17(value))
        return f"\u0000{len(digits) - 1}"
    if isinstance(value, dict):
        return {k: _slot_floats(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_slot_floats(v, digits) for v in value]
    return value


def dumps_value(
    value: Any, indent: Optional[int] = None, separators: Optional[Tuple[str, str]] = None
) -> str:
    """json.dumps with every finite float printed to 17 significant digits."""
    digits: List[str] = []
    text = json.dumps(
        _slot_floats(value, digits), indent=indent, separators=separators, allow_nan=False
    )
    return _SLOT.sub(lambda m: digits[int(m.group(1))], text)


def dumps_records(records: List[Dict[str, Any]]) -> str:
    """JSON array of records; key order is kept."""
    return dumps_value(records, indent=2) + "\n"


def write_records(path: str, records: List[Dict[str, Any]]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps_records(records))
