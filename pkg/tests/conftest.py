import sys
from pathlib import Path

import pytest

from shadowprint.suite import default_suite

HELPERS = Path(__file__).parent / "helpers"


@pytest.fixture(scope="session")
def suite():
    return default_suite()


@pytest.fixture(scope="session")
def adapter_cmd():
    """Command-line prefix for the reference mock adapter."""

    def build(*extra):
        return (sys.executable, str(HELPERS / "mock_adapter.py"), *extra)

    return build
