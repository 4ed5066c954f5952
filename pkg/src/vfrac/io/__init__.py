"""Lightweight IO helpers."""

from .csv import render_csv, write_csv
from .json import dumps_records, dumps_value, write_records
from .yaml import read_config

__all__ = [
    "render_csv",
    "write_csv",
    "dumps_records",
    "dumps_value",
    "write_records",
    "read_config",
]
