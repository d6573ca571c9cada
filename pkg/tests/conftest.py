import os
from pathlib import Path

import numpy as np
import pytest

from kminit.dataset import Dataset, load_bundled, min_max_normalize, read_manifest


def make_ds(points, labels=None, name="t"):
    return Dataset(points=np.asarray(points, dtype=np.float64), labels=labels, name=name)


def data_manifest():
    """Manifest of the optional benchmark collection, or None when absent."""
    env = os.environ.get("KMINIT_DATA_DIR")
    candidates = [Path(env)] if env else []
    candidates.append(Path(__file__).resolve().parent.parent / "data")
    for d in candidates:
        m = d / "manifest.json"
        if m.is_file():
            return m
    return None


def manifest_entry(name):
    m = data_manifest()
    if m is None:
        return None
    for e in read_manifest(m):
        if e.name == name:
            return e
    return None


@pytest.fixture(scope="session")
def ruspini():
    return load_bundled("ruspini")


@pytest.fixture(scope="session")
def iris():
    return min_max_normalize(load_bundled("iris"))


@pytest.fixture(scope="session")
def wine():
    return min_max_normalize(load_bundled("wine"))


ACCEPTANCE_LINES = []


def report_criterion(number, status, detail):
    line = f"criterion {number}: {status} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
