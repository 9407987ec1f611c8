"""Bundled example datasets.

``marks``: examination marks of 88 students in five subjects.
``frets``: head length and breadth of the first and second adult sons in
25 families.

The directory holding the CSV files can be overridden with the
``SYMLAT_FIXTURES`` environment variable.
"""
from __future__ import annotations

import os
from pathlib import Path

from .gaussian import GaussianData

__all__ = ["fixtures_dir", "fixture_path", "load_marks", "load_frets"]

_PACKAGE_FIXTURES = Path(__file__).resolve().parent / "fixtures"


def fixtures_dir() -> Path:
    env = os.environ.get("SYMLAT_FIXTURES")
    return Path(env) if env else _PACKAGE_FIXTURES


def fixture_path(name: str) -> Path:
    path = fixtures_dir() / name
    if not path.is_file():
        raise FileNotFoundError(f"fixture {name!r} not found in {fixtures_dir()}")
    return path


def load_marks(divisor: str = "n-1") -> GaussianData:
    return GaussianData.from_csv(fixture_path("marks.csv"), divisor)


def load_frets(divisor: str = "n-1") -> GaussianData:
    return GaussianData.from_csv(fixture_path("frets.csv"), divisor)
