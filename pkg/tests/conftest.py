import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from boopai.engine import initial_state  # noqa: E402


@pytest.fixture
def start():
    return initial_state()
