import math

import numpy as np
import pytest

from utils.architecture import parse_architecture
from utils.analysis import enumerate_architectures, select_family

LAMBDA_S = 1e-5
LAMBDA_M = 1e-4


@pytest.fixture
def rates():
    return LAMBDA_S, LAMBDA_M


@pytest.fixture
def arch():
    """Build a validated spec at the study rates from its label"""
    def _arch(label, lambda_s=LAMBDA_S, lambda_m=LAMBDA_M):
        return parse_architecture(label, lambda_s, lambda_m)
    return _arch


@pytest.fixture
def all_architectures():
    return enumerate_architectures(3, 4, LAMBDA_S, LAMBDA_M)


@pytest.fixture
def s3m3_family():
    return select_family(enumerate_architectures(3, 3, LAMBDA_S, LAMBDA_M), 3, 3)


@pytest.fixture
def s3m4_family():
    return select_family(enumerate_architectures(3, 4, LAMBDA_S, LAMBDA_M), 3, 4)


@pytest.fixture
def study_grid():
    return [float(t) for t in np.linspace(0.0, 30000.0, 50)]


@pytest.fixture
def reference_value():
    """Closed-form 1oo1/1oo1 survival"""
    return lambda t: math.exp(-(LAMBDA_S + LAMBDA_M) * t)
