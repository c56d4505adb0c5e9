"""
File formats: Distribution JSON, metric JSON, CSV datasets, report JSON.

Implements:
    - load_distribution / document_to_distribution (jsonschema-validated)
    - distribution_to_document / dump_distribution / write_distribution
    - load_metric (explicit distance matrix for a construct support)
    - load_samples_csv / write_samples_csv (pandas, unquoted labels)
    - load_declared_supports (supports of a CSV dataset, zero-mass labels included)
    - dump_report / write_text (versioned report documents)

Probabilities are written as 'n/d' strings for rational tables and as JSON
numbers for float tables, so a rational file reloads bit-for-bit.
"""
from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import pandas as pd
from jsonschema import ValidationError, validate

from src.audit.arithmetic import Label, format_label, format_number, normalize_label
from src.audit.probability import make_joint
from src.config.constants import (
    CONSTRUCT_PLACEHOLDER,
    MODE_RATIONAL,
    PREDICTION_PLACEHOLDER,
    SCHEMA_VERSION,
    VAR_YC,
    VAR_YO,
    VAR_YP,
    VAR_Z,
)
from src.config.schemas import DISTRIBUTION_SCHEMA, METRIC_SCHEMA, REPORT_SCHEMA, SUPPORTS_SCHEMA
from src.models.errors import MetricMismatch, SchemaViolation
from src.models.metric import MetricSupport
from src.models.probability import JointDistribution, SampleRecord, Support
from src.models.reports import to_jsonable

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CSV_COLUMNS = ["z", "y_obs", "y_pred"]
CSV_CONSTRUCT_COLUMN = "y_construct"
_FORBIDDEN_LABEL_CHARS = (",", '"', "\n", "\r")


# ======================================================================
# Internal helpers
# ======================================================================

def _read_json(path: PathLike) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from exc


def _validated(document: Any, schema: dict, what: str) -> Any:
    try:
        validate(instance=document, schema=schema)
    except ValidationError as exc:
        location = "/".join(str(part) for part in exc.absolute_path) or "<root>"
        raise SchemaViolation(f"{what}: {exc.message} (at {location})") from exc
    return document


def _json_text(document: Any) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


# ======================================================================
# Distribution JSON
# ======================================================================

def document_to_distribution(document: Mapping[str, Any], mode: Optional[str] = None) -> JointDistribution:
    """
    Build a JointDistribution from a parsed Distribution JSON document.

    Decimal strings and JSON numbers are read exactly, so the default mode
    is rational.

    Raises:
        SchemaViolation: the document does not match DISTRIBUTION_SCHEMA.
        UnknownLabel, NegativeProbability, MassNotOne, EmptyGroup.
    """
    _validated(document, DISTRIBUTION_SCHEMA, "distribution")
    supports = dict(document["supports"])
    table: Dict[tuple, Any] = {}
    for entry in document["cells"]:
        cell = (
            entry["z"],
            entry.get("yc", CONSTRUCT_PLACEHOLDER),
            entry["yo"],
            entry.get("yp", PREDICTION_PLACEHOLDER),
        )
        key = tuple(normalize_label(x) for x in cell)
        if key in table:
            raise SchemaViolation(f"distribution: cell {list(cell)} listed twice")
        table[key] = entry["p"]
    return make_joint(supports, table, mode or MODE_RATIONAL)


def load_distribution(path: PathLike, mode: Optional[str] = None) -> JointDistribution:
    dist = document_to_distribution(_read_json(path), mode)
    logger.debug("Loaded distribution from %s (%d cells, %s mode)", path, len(dist.table), dist.mode)
    return dist


def _support_list(support: Support) -> List[Any]:
    return [format_label(label) for label in support]


def distribution_to_document(
    dist: JointDistribution,
    details: Optional[Mapping[str, Any]] = None,
) -> Dict[str, Any]:
    """
    Distribution JSON for `dist`. Yc / Yp are left out when they hold only
    their placeholder label.
    """
    supports: Dict[str, Any] = {VAR_Z: _support_list(dist.support(VAR_Z))}
    if dist.construct_available:
        supports[VAR_YC] = _support_list(dist.support(VAR_YC))
    supports[VAR_YO] = _support_list(dist.support(VAR_YO))
    if dist.has_model:
        supports[VAR_YP] = _support_list(dist.support(VAR_YP))

    cells: List[Dict[str, Any]] = []
    for (z, yc, yo, yp), p in dist.cells():
        entry: Dict[str, Any] = {"z": format_label(z)}
        if dist.construct_available:
            entry["yc"] = format_label(yc)
        entry["yo"] = format_label(yo)
        if dist.has_model:
            entry["yp"] = format_label(yp)
        value = format_number(p)
        entry["p"] = str(value) if dist.mode == MODE_RATIONAL else value
        cells.append(entry)

    document: Dict[str, Any] = {"schema": SCHEMA_VERSION, "supports": supports, "cells": cells}
    if details:
        document["details"] = to_jsonable(dict(details))
    return document


def dump_distribution(dist: JointDistribution, details: Optional[Mapping[str, Any]] = None) -> str:
    return _json_text(distribution_to_document(dist, details))


def write_distribution(
    dist: JointDistribution,
    path: PathLike,
    details: Optional[Mapping[str, Any]] = None,
) -> None:
    write_text(path, dump_distribution(dist, details))
    logger.info("Wrote distribution to %s", path)


# ======================================================================
# Metric JSON
# ======================================================================

def load_metric(path: PathLike, support: Optional[Sequence[Label]] = None) -> MetricSupport:
    """
    Explicit metric {"labels": [...], "d": [[...], ...]}.

    Raises:
        SchemaViolation: malformed document.
        InvalidMetric: the matrix is not a metric.
        MetricMismatch: a label of `support` is missing from the matrix.
    """
    document = _validated(_read_json(path), METRIC_SCHEMA, "metric")
    ms = MetricSupport.explicit(document["labels"], document["d"])
    for label in support or ():
        if label not in ms.support:
            raise MetricMismatch(label)
    return ms


# ======================================================================
# CSV datasets
# ======================================================================

def _cell_text(value: object, path: PathLike, row: int, column: str) -> str:
    if not isinstance(value, str) or value.strip() == "":
        raise SchemaViolation(f"{path}: row {row}, column '{column}' is empty")
    if any(ch in value for ch in _FORBIDDEN_LABEL_CHARS):
        raise SchemaViolation(f"{path}: row {row}, column '{column}': labels may not contain commas or quotes")
    return value


def load_samples_csv(path: PathLike) -> List[SampleRecord]:
    """
    Read a dataset with header `z,y_obs,y_pred[,y_construct]`.

    Labels are unquoted text; a label carrying a comma shows up as an extra
    field and is rejected, as is any quote character. An empty y_construct
    field means the row has no construct label.
    """
    try:
        frame = pd.read_csv(
            path,
            header=None,
            dtype=str,
            keep_default_na=False,
            quoting=csv.QUOTE_NONE,
            encoding="utf-8",
        )
    except pd.errors.ParserError as exc:
        raise SchemaViolation(f"{path}: {exc}") from exc
    except pd.errors.EmptyDataError as exc:
        raise SchemaViolation(f"{path}: empty file") from exc

    columns = [str(c).strip() for c in frame.iloc[0].tolist()]
    if columns not in (CSV_COLUMNS, CSV_COLUMNS + [CSV_CONSTRUCT_COLUMN]):
        raise SchemaViolation(
            f"{path}: header must be {','.join(CSV_COLUMNS)}[,{CSV_CONSTRUCT_COLUMN}], got {','.join(columns)}"
        )
    has_construct_column = len(columns) == len(CSV_COLUMNS) + 1

    records: List[SampleRecord] = []
    for i, raw in enumerate(frame.iloc[1:].itertuples(index=False), start=2):
        values = dict(zip(columns, raw))
        z, y_obs, y_pred = (_cell_text(values[c], path, i, c) for c in CSV_COLUMNS)
        construct: Optional[Label] = None
        if has_construct_column and values[CSV_CONSTRUCT_COLUMN] != "":
            construct = normalize_label(_cell_text(values[CSV_CONSTRUCT_COLUMN], path, i, CSV_CONSTRUCT_COLUMN))
        records.append(
            SampleRecord(
                z=normalize_label(z),  # type: ignore[arg-type]
                y_obs=normalize_label(y_obs),
                y_pred=normalize_label(y_pred),
                y_construct=construct,
            )
        )
    logger.debug("Read %d records from %s", len(records), path)
    return records


def load_declared_supports(path: PathLike) -> Dict[str, List[Label]]:
    """
    Declared supports for a CSV dataset, from the "supports" object of a
    JSON document (a Distribution JSON qualifies).

    Raises:
        SchemaViolation: no valid "supports" object.
    """
    document = _validated(_read_json(path), SUPPORTS_SCHEMA, "supports")
    declared = {var: [normalize_label(label) for label in labels] for var, labels in document["supports"].items()}
    logger.debug("Declared supports from %s: %s", path, sorted(declared))
    return declared


def write_samples_csv(records: Sequence[SampleRecord], path: PathLike) -> None:
    """Write records in the CSV dataset layout; the construct column is kept when every row has one."""
    with_construct = bool(records) and all(r.y_construct is not None for r in records)
    columns = CSV_COLUMNS + ([CSV_CONSTRUCT_COLUMN] if with_construct else [])

    rows = []
    for i, record in enumerate(records, start=2):
        values = [record.z, record.y_obs, record.y_pred]
        if with_construct:
            values.append(record.y_construct)  # type: ignore[arg-type]
        rows.append([_cell_text(str(format_label(v)), path, i, c) for v, c in zip(values, columns)])

    frame = pd.DataFrame(rows, columns=columns)
    frame.to_csv(path, index=False, quoting=csv.QUOTE_NONE, lineterminator="\n", encoding="utf-8")
    logger.info("Wrote %d records to %s", len(records), path)


# ======================================================================
# Reports
# ======================================================================

def dump_report(document: Mapping[str, Any]) -> str:
    """
    Serialize a report document (already JSON-ready) after checking it
    against REPORT_SCHEMA. Key order is the insertion order of the document.
    """
    _validated(dict(document), REPORT_SCHEMA, "report")
    return _json_text(document)


def write_text(path: PathLike, text: str) -> None:
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
