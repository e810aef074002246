import numpy as np
import pytest
from hypothesis import settings

from scv.domains import Ball, Disc, Ellipsoid, MODEL_Z1Z2, Polydisc, Product

settings.register_profile("scv", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("scv")

# filled by test_acceptance, printed once at the end of the run
ACCEPTANCE_LINES = []

BALANCED = {
    "disc": Disc(0, 1),
    "disc-r2": Disc(0, 2.0),
    "ball2": Ball(2),
    "ball3": Ball(3),
    "bidisc": Polydisc((1.0, 1.0)),
    "polydisc-1-2": Polydisc((1.0, 2.0)),
    "ellipsoid23": Ellipsoid((2.0, 3.0)),
    "ellipsoid-half": Ellipsoid((0.5, 1.5)),
    "disc-x-ball2": Product((Disc(0, 1), Ball(2))),
    "model-z1z2": MODEL_Z1Z2,
}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
