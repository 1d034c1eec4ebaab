import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from exact_linalg import Field  # noqa: E402


@pytest.fixture
def Q() -> Field:
    return Field.rationals()


@pytest.fixture
def F5() -> Field:
    return Field.prime(5)


@pytest.fixture(params=["Q", "FP:5"], ids=["Q", "F5"])
def field(request) -> Field:
    return Field.from_label(request.param)
