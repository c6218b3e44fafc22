import pytest

from ceei import Instance, separation_example, binary_gap_example


@pytest.fixture
def separation():
    """2x4 instance whose EF+PO split has no supporting prices."""
    return separation_example()


@pytest.fixture
def binary_gap():
    """Binary 2x3 instance whose discrete optimum trails the fractional one."""
    return binary_gap_example()


@pytest.fixture
def single_agent():
    return Instance([[3, 1]])


@pytest.fixture
def contested_object():
    """Two agents, one object both value equally."""
    return Instance([[1], [1]])
