import json
from pathlib import Path

import pytest

from homdim.verification import ci_pair, example_complex, hypersurface, plane, square_zero

ORACLE = json.loads((Path(__file__).parent / "oracle_values.json").read_text())
DATA = Path(__file__).parent.parent / "data"


@pytest.fixture
def oracle():
    return ORACLE


@pytest.fixture
def B():
    return square_zero()


@pytest.fixture
def H():
    return hypersurface()


@pytest.fixture
def S():
    return plane()


@pytest.fixture
def C():
    return ci_pair()


@pytest.fixture
def X46(B):
    return example_complex(B)


@pytest.fixture
def data_dir():
    return DATA
