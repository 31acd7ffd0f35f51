from pathlib import Path

import pytest

from constrank.pencil import load_space

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

PENCIL_FIXTURES = {
    "westwick5": 4,
    "skew3": 2,
    "banded_3_2_1": 2,
    "banded_4_2_2": 2,
    "banded_7_3_4": 3,
    "embedded_2_4": 2,
    "sl2skew_5": 4,
}


@pytest.fixture
def fixture_path():
    return lambda name: FIXTURES / f"{name}.json"


@pytest.fixture(params=sorted(PENCIL_FIXTURES))
def pencil_fixture(request):
    name = request.param
    return load_space(FIXTURES / f"{name}.json"), PENCIL_FIXTURES[name]
