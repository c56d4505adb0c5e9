"""
Shared test fixtures for the construct-audit test suite.
"""
import json
from fractions import Fraction

import pytest

from src.audit.probability import make_distribution, make_joint
from src.config.constants import MODE_FLOAT


# ==========================================================================
# Single-variable laws
# ==========================================================================

@pytest.fixture
def balanced_law():
    return make_distribution([0, 1], {0: "1/2", 1: "1/2"})


@pytest.fixture
def skewed_law():
    return make_distribution([0, 1], {0: "4/5", 1: "1/5"})


# ==========================================================================
# Joint tables
# ==========================================================================

@pytest.fixture
def hiring_dist():
    """Construct rates 9/10 vs 1/2, Yo = Yc, Yp = Yo."""
    table = {
        (0, 0, 0, 0): "1/20",
        (0, 1, 1, 1): "9/20",
        (1, 0, 0, 0): "1/4",
        (1, 1, 1, 1): "1/4",
    }
    return make_joint({"Yc": [0, 1], "Yo": [0, 1], "Yp": [0, 1]}, table)


@pytest.fixture
def alpha_gap_dist():
    """tv(Yo..) = 2/5, output disparity 1/4, Yp independent of Yo within each group."""
    table = {
        (0, 0, 0): "1/80",
        (0, 0, 1): "3/80",
        (0, 1, 0): "9/80",
        (0, 1, 1): "27/80",
        (1, 0, 0): "1/8",
        (1, 0, 1): "1/8",
        (1, 1, 0): "1/8",
        (1, 1, 1): "1/8",
    }
    return make_joint(
        {"Yo": [0, 1], "Yp": [0, 1]},
        {(z, "<unobserved>", yo, yp): p for (z, yo, yp), p in table.items()},
    )


@pytest.fixture
def float_dist():
    table = {
        (0, 0, 0, 0): 0.25,
        (0, 1, 1, 1): 0.25,
        (1, 0, 0, 1): 0.25,
        (1, 1, 1, 1): 0.25,
    }
    return make_joint({"Yc": [0, 1], "Yo": [0, 1], "Yp": [0, 1]}, table, MODE_FLOAT)


# ==========================================================================
# Files
# ==========================================================================

@pytest.fixture
def hiring_document():
    return {
        "schema": "construct-audit/1",
        "supports": {"Z": [0, 1], "Yc": [0, 1], "Yo": [0, 1], "Yp": [0, 1]},
        "cells": [
            {"z": 0, "yc": 0, "yo": 0, "yp": 0, "p": "1/20"},
            {"z": 0, "yc": 1, "yo": 1, "yp": 1, "p": "9/20"},
            {"z": 1, "yc": 0, "yo": 0, "yp": 0, "p": "1/4"},
            {"z": 1, "yc": 1, "yo": 1, "yp": 1, "p": "1/4"},
        ],
    }


@pytest.fixture
def hiring_file(tmp_path, hiring_document):
    path = tmp_path / "hiring.json"
    path.write_text(json.dumps(hiring_document), encoding="utf-8")
    return path


@pytest.fixture
def alpha_gap_file(tmp_path):
    document = {
        "supports": {"Z": [0, 1], "Yo": [0, 1], "Yp": [0, 1]},
        "cells": [
            {"z": 0, "yo": 0, "yp": 0, "p": "1/80"},
            {"z": 0, "yo": 0, "yp": 1, "p": "3/80"},
            {"z": 0, "yo": 1, "yp": 0, "p": "9/80"},
            {"z": 0, "yo": 1, "yp": 1, "p": "27/80"},
            {"z": 1, "yo": 0, "yp": 0, "p": "1/8"},
            {"z": 1, "yo": 0, "yp": 1, "p": "1/8"},
            {"z": 1, "yo": 1, "yp": 0, "p": "1/8"},
            {"z": 1, "yo": 1, "yp": 1, "p": "1/8"},
        ],
    }
    path = tmp_path / "alpha_gap.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


@pytest.fixture
def samples_csv(tmp_path):
    path = tmp_path / "samples.csv"
    path.write_text(
        "z,y_obs,y_pred,y_construct\n"
        "0,1,1,1\n"
        "0,0,0,0\n"
        "1,1,0,1\n"
        "1,0,0,0\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture
def half():
    return Fraction(1, 2)
