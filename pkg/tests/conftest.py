"""
Shared fixtures for the qbundle test suite.
"""

import sys
from pathlib import Path

import pytest

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from app.services.quantum.localization import localize_named
from app.services.quantum.qgroups import AlgebraFamily, AlgebraSpec, build
from config import settings


@pytest.fixture
def mq2():
    return build(AlgebraSpec(AlgebraFamily.MN, 2))


@pytest.fixture
def mq3():
    return build(AlgebraSpec(AlgebraFamily.MN, 3))


@pytest.fixture
def sl2():
    return build(AlgebraSpec(AlgebraFamily.SLN, 2))


@pytest.fixture
def pq2():
    return build(AlgebraSpec(AlgebraFamily.P, 2))


@pytest.fixture
def chart1():
    """O_q(SL_2)[d_1^-1]."""
    return localize_named(2, (1,))


@pytest.fixture
def seed_zero():
    previous = settings.verify.seed
    settings.verify.seed = 0
    yield 0
    settings.verify.seed = previous


@pytest.fixture
def small_budget():
    previous = settings.engine.reduction_budget
    settings.engine.reduction_budget = 3
    yield 3
    settings.engine.reduction_budget = previous
