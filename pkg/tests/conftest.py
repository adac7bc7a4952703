import math

import numpy as np
import pytest

from jacobiweyl import CoefficientModel, LatticeWindow

SQRT2 = math.sqrt(2.0)


@pytest.fixture
def free():
    return CoefficientModel.free()


@pytest.fixture
def p3_window():
    return LatticeWindow(0, 4)


@pytest.fixture
def p3(free, p3_window):
    return free, p3_window


def random_model(rng, n_interior, origin=0):
    a = rng.uniform(0.5, 2.0, size=n_interior + 1)
    b = np.concatenate([[0.0], rng.uniform(-1.0, 1.0, size=n_interior), [0.0]])
    return (CoefficientModel.table(a, b, origin=origin),
            LatticeWindow(origin, origin + n_interior + 1))
