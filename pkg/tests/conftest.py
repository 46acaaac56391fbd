from __future__ import annotations

import pytest

from camonoids.ca import enumerate_end
from camonoids.groups import named_group


@pytest.fixture(scope="session")
def end_z2():
    return enumerate_end(named_group("Z2"), 2)


@pytest.fixture(scope="session")
def end_z3():
    return enumerate_end(named_group("Z3"), 2)


@pytest.fixture(scope="session")
def end_z4():
    return enumerate_end(named_group("Z4"), 2, with_table=False)
