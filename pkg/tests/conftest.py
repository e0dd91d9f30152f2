"""Shared fixtures; puts the repository root on sys.path."""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from schlicht_classes import PhiFamily, SchwarzSpec  # noqa: E402
from verify import load_presets  # noqa: E402

FULL_SUITE = os.getenv('SCHLICHT_FULL_SUITE') == '1'


def pytest_collection_modifyitems(config, items):
    if FULL_SUITE:
        return
    skip_slow = pytest.mark.skip(reason="set SCHLICHT_FULL_SUITE=1 to run acceptance-scale checks")
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope='session')
def presets():
    return load_presets()


@pytest.fixture
def half_plane():
    return PhiFamily.half_plane()


@pytest.fixture
def identity_witnesses():
    return SchwarzSpec.monomial(1), SchwarzSpec.monomial(1)


BUILTIN_FAMILIES = [
    PhiFamily.half_plane(),
    PhiFamily.janowski('1/2', '-1/2'),
    PhiFamily.janowski(1, 0),
    PhiFamily.janowski(1, '1/2'),
    PhiFamily.janowski(0, -1),
    PhiFamily.order_alpha('1/3'),
]

WITNESS_CATALOGUE = [
    SchwarzSpec.zero(),
    SchwarzSpec.monomial(1),
    SchwarzSpec.monomial(3),
    SchwarzSpec.parse('rotation:pi/2'),
    SchwarzSpec.rotation(1.0),
    SchwarzSpec.blaschke('1/2'),
    SchwarzSpec.parse('blaschke:-1/3,1/4'),
]
