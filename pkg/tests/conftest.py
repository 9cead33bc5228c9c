"""
Shared fixtures for the QSTS simulator tests
"""
import math

import numpy as np
import pytest

from modules.qstate import from_amplitudes, labels_for
from modules.settings import Settings


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def settings():
    return Settings(_env_file=None)


@pytest.fixture
def chi():
    """A generic one-qubit secret with a relative phase"""
    alpha = 0.6
    beta = 0.8 * complex(math.cos(0.7), math.sin(0.7))
    return from_amplitudes(labels_for("x", 1), [alpha, beta])
