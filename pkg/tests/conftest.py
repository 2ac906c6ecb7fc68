from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from artifact.image import GrayImage, read_pgm

FIXTURES = Path(__file__).parent / "fixtures"
COVER_DIR = FIXTURES / "covers"
SECRET_DIR = FIXTURES / "secrets"

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def even_dims(max_half=8):
    return st.tuples(st.integers(1, max_half), st.integers(1, max_half)).map(
        lambda t: (2 * t[0], 2 * t[1]))


@st.composite
def images(draw, max_half=8, values=None):
    shape = draw(even_dims(max_half))
    elements = values if values is not None else st.integers(0, 255)
    arr = draw(hnp.arrays(np.uint8, shape, elements=elements))
    return GrayImage(arr)


def random_image(rng, h, w, low=0, high=256) -> GrayImage:
    return GrayImage(rng.integers(low, high, size=(h, w), dtype=np.uint8))


def cover_paths():
    return sorted(COVER_DIR.glob("*.pgm"))


def secret_paths():
    return sorted(SECRET_DIR.glob("*.pgm"))


@pytest.fixture(scope="session")
def covers():
    return {p.stem: read_pgm(p) for p in cover_paths()}


@pytest.fixture(scope="session")
def secrets():
    return {p.stem: read_pgm(p) for p in secret_paths()}


@pytest.fixture(scope="session")
def camera(covers):
    return covers["camera"]


@pytest.fixture(scope="session")
def astronaut(secrets):
    return secrets["astronaut"]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
