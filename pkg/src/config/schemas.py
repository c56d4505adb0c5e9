"""
JSON Schemas for audit inputs and emitted reports.

Four schemas:
1. DISTRIBUTION_SCHEMA - explicit joint table over (Z, Yc, Yo, Yp)
2. METRIC_SCHEMA       - explicit distance matrix on a construct support
3. REPORT_SCHEMA       - documents written by the audit / verify commands
4. SUPPORTS_SCHEMA     - declared supports for a CSV dataset (any Distribution JSON matches)
"""
from src.config.constants import SCHEMA_VERSION

_LABEL: dict = {"type": ["string", "integer"]}

_PROBABILITY: dict = {
    "oneOf": [
        {"type": "number", "minimum": 0},
        {"type": "string", "pattern": r"^\s*[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?(/\d+)?\s*$"},
    ]
}

_LABEL_LIST: dict = {"type": "array", "minItems": 1, "items": _LABEL}

_SUPPORTS: dict = {
    "type": "object",
    "additionalProperties": False,
    "required": ["Yo"],
    "properties": {
        "Z": {"type": "array", "items": {"type": "integer", "enum": [0, 1]}},
        "Yc": _LABEL_LIST,
        "Yo": _LABEL_LIST,
        "Yp": _LABEL_LIST,
    },
}

# =============================================================================
# 1. Distribution
# =============================================================================
DISTRIBUTION_SCHEMA: dict = {
    "type": "object",
    "required": ["supports", "cells"],
    "properties": {
        "schema": {"type": "string"},
        "supports": _SUPPORTS,
        "cells": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["z", "yo", "p"],
                "properties": {
                    "z": {"type": "integer", "enum": [0, 1]},
                    "yc": _LABEL,
                    "yo": _LABEL,
                    "yp": _LABEL,
                    "p": _PROBABILITY,
                },
            },
        },
        "details": {"type": "object"},
    },
}

# =============================================================================
# 2. Explicit metric
# =============================================================================
METRIC_SCHEMA: dict = {
    "type": "object",
    "additionalProperties": False,
    "required": ["labels", "d"],
    "properties": {
        "labels": _LABEL_LIST,
        "d": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "minItems": 1, "items": _PROBABILITY},
        },
    },
}

# =============================================================================
# 3. Reports
# =============================================================================
_NUMBER_OR_RATIONAL: dict = {"type": ["number", "string"]}

TEST_REPORT_SCHEMA: dict = {
    "type": "object",
    "required": ["name", "statistic", "threshold", "passed", "margin", "slices", "notes"],
    "properties": {
        "name": {"type": "string"},
        "statistic": _NUMBER_OR_RATIONAL,
        "threshold": _NUMBER_OR_RATIONAL,
        "passed": {"type": "boolean"},
        "margin": _NUMBER_OR_RATIONAL,
        "slices": {"type": "object"},
        "components": {"type": "object"},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}

CRITERION_REPORT_SCHEMA: dict = {
    "type": "object",
    "required": ["name", "left", "right", "amplification"],
    "properties": {
        "name": {"type": "string"},
        "left": _NUMBER_OR_RATIONAL,
        "right": _NUMBER_OR_RATIONAL,
        "amplification": {"type": "boolean"},
        "components": {"type": "object"},
        "notes": {"type": "array", "items": {"type": "string"}},
        "transformed": {"type": "object"},
    },
}

SUITE_REPORT_SCHEMA: dict = {
    "type": "object",
    "required": ["theorem", "trials", "failures", "passed"],
    "properties": {
        "theorem": {"type": "string"},
        "trials": {"type": "integer", "minimum": 1},
        "failures": {"type": "integer", "minimum": 0},
        "passed": {"type": "boolean"},
        "failing_seed": {"type": ["integer", "null"]},
        "first_counterexample": {"type": ["object", "null"]},
    },
}

REPORT_SCHEMA: dict = {
    "type": "object",
    "required": ["schema", "command", "passed"],
    "properties": {
        "schema": {"type": "string", "const": SCHEMA_VERSION},
        "command": {"type": "string", "enum": ["audit", "verify"]},
        "passed": {"type": "boolean"},
        "mode": {"type": "string", "enum": ["rational", "float"]},
        "tests": {"type": "array", "items": TEST_REPORT_SCHEMA},
        "criteria": {"type": "array", "items": CRITERION_REPORT_SCHEMA},
        "suites": {"type": "array", "items": SUITE_REPORT_SCHEMA},
    },
}

# =============================================================================
# 4. Declared supports
# =============================================================================
SUPPORTS_SCHEMA: dict = {
    "type": "object",
    "required": ["supports"],
    "properties": {"supports": _SUPPORTS},
}
