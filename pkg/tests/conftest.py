import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from coevo.games import fixture

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def fig1():
    return fixture("fig1")


@pytest.fixture(scope="session")
def fig2():
    return fixture("fig2")


@pytest.fixture(scope="session")
def fig3_top():
    return fixture("fig3_top")


@pytest.fixture(scope="session")
def fig3_bottom():
    return fixture("fig3_bottom")


@pytest.fixture(scope="session")
def fig4():
    return fixture("fig4")
