# tests/conftest.py
import pytest

from app.calculators.exact_qseries import build_over_table, build_trace_table


@pytest.fixture(scope="session")
def trace_table_400():
    """The N = 400 trace table is slow to build; share one copy."""
    return build_trace_table(400)


@pytest.fixture(scope="session")
def over_table_400(trace_table_400):
    return build_over_table(400, trace_table_400)


@pytest.fixture(scope="session")
def trace_table_small():
    return build_trace_table(12)


@pytest.fixture(scope="session")
def trace_table_200():
    return build_trace_table(200)
