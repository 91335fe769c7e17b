import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))


def pytest_addoption(parser):
    parser.addoption(
        "--full-scale",
        action="store_true",
        default=False,
        help="run the table reproductions at full replication counts "
             "(also enabled by GOFEVID_FULL_SCALE=1)",
    )


@pytest.fixture(scope="session")
def full_scale(request) -> bool:
    return bool(
        request.config.getoption("--full-scale")
        or os.environ.get("GOFEVID_FULL_SCALE") == "1"
    )
