from __future__ import annotations

from typing import Any, Dict

import yaml


def read_config(path: str) -> Dict[str, Any]:
    """Load a YAML mapping of parameter names to values; an empty file is {}."""
    with open(path, "r", encoding="utf-8") as f:
        payload = yaml.safe_load(f)
    if payload is None:
        return {}
    if not isinstance(payload, dict):
        kind = type(payload).__name__
        raise ValueError(f"{path}: expected a mapping at the top level, got {kind}")
    return {str(k): v for k, v in payload.items()}
