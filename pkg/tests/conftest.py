import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lpdesign.model import (
    default_default_settings,
    default_general_settings,
    new_project,
)


@pytest.fixture
def general():
    return default_general_settings()


@pytest.fixture
def defaults():
    return default_default_settings()


@pytest.fixture
def empty_project(general, defaults):
    return new_project(general, defaults)
