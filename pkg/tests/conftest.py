from pathlib import Path

import pytest

from dagwidth.io import read_graph

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def d32():
    return read_graph(DATA / "d32.txt")


@pytest.fixture(scope="session")
def ids(d32):
    """Map printed vertex names of the d32 graph to internal ids."""

    def conv(*names):
        return {d32.labels.index(str(x)) for x in names}

    return conv
