import pytest

from boolnorm import BaseCostTable, TriangularBasis, table_norm


@pytest.fixture
def norm_a():
    """Rank-2 closed table: N({1})=1, N({2})=3, N({1,2})=2."""
    return table_norm(BaseCostTable(2, (0.0, 1.0, 3.0, 2.0)))


@pytest.fixture
def norm_a_basis():
    """The reduced basis under norm_a: rows {1}, {1,2}."""
    return TriangularBasis((0b01, 0b11))


@pytest.fixture
def bad_oracle():
    """A valid norm table (4, 5, 2) whose identity basis is unreduced."""
    return table_norm(BaseCostTable(2, (0.0, 4.0, 5.0, 2.0)))


@pytest.fixture
def bad_basis():
    """Identity basis {1}, {2}: unreduced under bad_oracle."""
    return TriangularBasis((0b01, 0b10))
