# SPDX-FileCopyrightText: 2026 polyrelax contributors
#
# SPDX-License-Identifier: MIT

"""
Shared fixtures.
"""

import importlib
from pathlib import Path

import numpy as np
import pytest

from polyrelax import config
from polyrelax.core.poly import BoxDomain

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

SETTINGS = (
    "POLYRELAX_EPSILON", "POLYRELAX_COVERING", "POLYRELAX_MAX_ITERATIONS", "POLYRELAX_TIME_BUDGET",
    "POLYRELAX_SEED", "POLYRELAX_WORKERS", "POLYRELAX_OUTPUT_DIR", "POLYRELAX_LOG_LEVEL", "POLYRELAX_LP_DUMP_DIR",
)


@pytest.fixture
def data_dir():
    """The shipped example files."""
    return DATA_DIR


@pytest.fixture
def unit_square():
    """[0,1]²."""
    return BoxDomain.unit(2)


@pytest.fixture
def rng():
    """A seeded generator so randomized checks are reproducible."""
    return np.random.default_rng(12345)


@pytest.fixture
def reload_config(monkeypatch):
    """Clears the settings environment and yields a function that re-reads it."""
    for name in SETTINGS:
        monkeypatch.delenv(name, raising=False)
    yield lambda: importlib.reload(config)
    monkeypatch.undo()
    importlib.reload(config)
