from pathlib import Path

import numpy as np
import pytest

from stegkit import kernels
from stegkit.image_stego import bmp_read

DATA = Path(__file__).parent / "data"
COVER_DIR = DATA / "covers"
PHOTO_COVERS = ["astronaut", "camera", "chelsea", "coffee"]


def load_cover(name):
    return bmp_read((COVER_DIR / f"{name}.bmp").read_bytes())


@pytest.fixture(scope="session")
def covers():
    return {name: load_cover(name) for name in PHOTO_COVERS + ["moon"]}


@pytest.fixture(scope="session")
def prose():
    return (DATA / "prose.txt").read_text()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=kernels.available_backends())
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    monkeypatch.setattr(kernels, "_active", kernels.get_backend(request.param))
    return request.param


# -- acceptance reporting ------------------------------------------------------

_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    detail = "; ".join(v for k, v in item.user_properties if k == "measured")
    _ACCEPTANCE.append((mark.args[0], mark.args[1], rep.passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid, title, ok, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        line = f"{'PASS' if ok else 'FAIL'}  {cid:<4} {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
