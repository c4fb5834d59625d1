#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" conftest.py
Used for pytest directory-specific hook implementations, shared fixtures and directory inclusion for imports.
"""
__author__ = "Anthony Fong"
__copyright__ = "Copyright 2021, Anthony Fong"
__credits__ = ["Anthony Fong"]
__license__ = ""
__version__ = "0.1.0"
__maintainer__ = "Anthony Fong"
__email__ = ""
__status__ = "Beta"

# Default Libraries #
import pathlib
from typing import Dict, Tuple

# Downloaded Libraries #
import numpy as np
import pytest

# Local Libraries #
import src.hhverify as hhverify


# Definitions #
_first_failures: Dict[Tuple[str, Tuple[int, ...]], str] = {}


# Functions #
def _incremental_key(item):
    """The class of a test and its parametrize indices, which together scope an incremental failure."""
    indices = tuple(item.callspec.indices.values()) if hasattr(item, "callspec") else ()
    return str(item.cls), indices


def pytest_runtest_makereport(item, call):
    """Records the first failing test of each incremental class and parametrization."""
    if "incremental" in item.keywords and call.excinfo is not None:
        _first_failures.setdefault(_incremental_key(item), item.originalname or item.name)


def pytest_runtest_setup(item):
    """Expects the rest of an incremental class to fail once one of its tests has, per parametrization."""
    if "incremental" in item.keywords:
        failed = _first_failures.get(_incremental_key(item))
        if failed is not None:
            pytest.xfail(f"previous test failed ({failed})")


@pytest.fixture
def tmp_dir(tmpdir):
    """A pytest fixture that turn the tmpdir into a Path object."""
    return pathlib.Path(tmpdir)


@pytest.fixture
def wavy_family():
    """Registers f(x) = x^2 + 2 + sin(8x), which is positive but not convex, for the duration of a test."""
    family = hhverify.FunctionFamily(
        "wavy",
        function=lambda x, p: x * x + 2.0 + np.sin(8.0 * x),
        derivative=lambda x, p: 2.0 * x + 8.0 * np.cos(8.0 * x),
        description="f(x) = x^2 + 2 + sin(8x)",
    )
    hhverify.register_family(family)
    yield family
    hhverify.unregister_family("wavy")
