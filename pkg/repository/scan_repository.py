"""
File persistence for scan rows: CSV (the interchange format) and JSON.
"""
from __future__ import annotations

import csv
import json
import os
from typing import Iterable, List, Union

from pydantic import BaseModel, ValidationError, field_validator

from models.scan_row import CSV_COLUMNS, STATUS_CERTIFIED, ScanRow
from utils.exceptions import ScanFileError
from utils.logger import get_logger

logger = get_logger(__name__)


class ScanRecord(BaseModel):
    """A scan row as read back from disk."""

    n: int
    speeds: str
    gap_num: int
    gap_den: int
    t_num: int
    t_den: int
    q: int
    lambda_plus: float
    lambda_plus_cert: float
    lambda_minus: float
    lambda_minus_cert: float
    lambda_minus_q: float
    lambda_minus_q_cert: float
    degree: int
    samples: int
    status_plus: str
    status_minus: str
    status_minus_q: str

    @field_validator("speeds", mode="before")
    @classmethod
    def _join_speeds(cls, value):
        if isinstance(value, (list, tuple)):
            return ";".join(str(s) for s in value)
        return value

    @field_validator(
        "lambda_plus", "lambda_plus_cert", "lambda_minus", "lambda_minus_cert",
        "lambda_minus_q", "lambda_minus_q_cert", mode="before",
    )
    @classmethod
    def _none_is_nan(cls, value):
        return float("nan") if value is None or value == "" else value

    @property
    def gap(self) -> float:
        return self.gap_num / self.gap_den

    def certified(self, series: str) -> bool:
        return getattr(self, f"status_{series}") == STATUS_CERTIFIED


def is_json_path(path: str) -> bool:
    return os.path.splitext(path)[1].lower() == ".json"


def write_rows(path: str, rows: Iterable[ScanRow]) -> int:
    """Write rows to path (JSON when the extension is .json, CSV otherwise)."""
    rows = list(rows)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    if is_json_path(path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump([row.to_dict() for row in rows], fh, indent=2)
            fh.write("\n")
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(CSV_COLUMNS), lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow(row.to_record())
    logger.info("wrote %d scan rows to %s", len(rows), path)
    return len(rows)


def _validate(raw: dict, where: str) -> ScanRecord:
    try:
        return ScanRecord.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        column = ".".join(str(p) for p in first.get("loc", ())) or "?"
        raise ScanFileError(f"{where}: bad value for '{column}': {first.get('msg')}") from e


def _read_csv(path: str) -> List[ScanRecord]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in CSV_COLUMNS if c not in header]
        if missing:
            raise ScanFileError(f"{path}: missing columns {', '.join(missing)}")
        return [_validate(raw, f"{path}:{i}") for i, raw in enumerate(reader, start=2)]


def _read_json(path: str) -> List[ScanRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ScanFileError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(data, list):
        raise ScanFileError(f"{path}: expected a list of rows")
    records = []
    for i, raw in enumerate(data):
        if not isinstance(raw, dict):
            raise ScanFileError(f"{path}[{i}]: expected an object")
        missing = [c for c in CSV_COLUMNS if c not in raw]
        if missing:
            raise ScanFileError(f"{path}[{i}]: missing columns {', '.join(missing)}")
        records.append(_validate(raw, f"{path}[{i}]"))
    return records


def read_rows(path: Union[str, os.PathLike]) -> List[ScanRecord]:
    path = os.fspath(path)
    if not os.path.exists(path):
        raise ScanFileError(f"{path}: no such file")
    records = _read_json(path) if is_json_path(path) else _read_csv(path)
    logger.debug("read %d scan rows from %s", len(records), path)
    return records
