import os
import random

import pytest

from hmftheta.builtin import builtin_model, default_bound
from hmftheta.shape import FieldShape, PrimeShape


@pytest.fixture
def rng():
    return random.Random(20240611)


def small_shapes():
    """Single- and two-prime shapes with d <= 6."""
    out = []
    for p in (2, 3, 5):
        for e in range(1, 4):
            for f in range(1, 4):
                if e * f <= 6:
                    out.append(FieldShape.single(p, e, f))
    out.append(FieldShape(3, (PrimeShape("P", 2, 1), PrimeShape("Q", 1, 2))))
    out.append(FieldShape(5, (PrimeShape("P", 1, 1), PrimeShape("Q", 2, 2))))
    out.append(FieldShape(2, (PrimeShape("A", 3, 1), PrimeShape("B", 1, 3))))
    return out


@pytest.fixture(params=["d2-inert3", "d2-ramified2", "d5-ramified5", "d2-split7",
                        "synthetic-split", "synthetic-e2f2"])
def model_and_bound(request):
    return builtin_model(request.param), default_bound(request.param)


def pytest_configure(config):
    os.environ.setdefault("HMF_THETA_THREADS", "4")
