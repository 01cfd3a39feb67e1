from __future__ import annotations

import numpy as np
import pytest

from mpscap import AKLT_GROUND_THETA, aklt_model, mg_model


@pytest.fixture(scope="session")
def aklt_ground():
    return aklt_model(AKLT_GROUND_THETA)


@pytest.fixture(scope="session")
def mg_ground():
    return mg_model(0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
