import numpy as np
import pytest
from hypothesis import settings

from fpix.crypto import TOY_CURVE, keygen, seeded_rng
from fpix.image import GrayImage

# numba compiles the Jacobi kernel on first use; keep that out of example deadlines
settings.register_profile("fpix", deadline=None, max_examples=60)
settings.load_profile("fpix")


@pytest.fixture
def toy_keys():
    return keygen(TOY_CURVE, seeded_rng(11))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_image(rng, width, height):
    return GrayImage(width, height, rng.integers(0, 256, size=(height, width), dtype=np.uint8))


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[number])
