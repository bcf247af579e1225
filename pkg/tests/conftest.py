import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from npverify import profiles  # noqa: E402


@pytest.fixture(scope="session")
def np33():
    return profiles.enumerate_np(3, 3)


@pytest.fixture(scope="session")
def np43():
    return profiles.enumerate_np(4, 3)


@pytest.fixture(scope="session")
def np34():
    return profiles.enumerate_np(3, 4)


@pytest.fixture(scope="session")
def star33(np33):
    return profiles.np_star(np33)


@pytest.fixture(scope="session")
def star43(np43):
    return profiles.np_star(np43)
