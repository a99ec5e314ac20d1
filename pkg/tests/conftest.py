from __future__ import annotations

import pytest

from chaindec import PrimeField, build_rips
from gen import GRID_DISTANCES, LINE_DISTANCES


@pytest.fixture(scope="session")
def field2() -> PrimeField:
    return PrimeField(2)


@pytest.fixture(scope="session")
def line_complex():
    return build_rips(LINE_DISTANCES, 3)


@pytest.fixture(scope="session")
def grid_complex():
    return build_rips(GRID_DISTANCES, 3)


@pytest.fixture()
def line_input(line_complex):
    return line_complex.chain_complex()


@pytest.fixture()
def grid_input(grid_complex):
    return grid_complex.chain_complex()
