import pytest

from tau_lucas_lab.tau import build_tau_table


@pytest.fixture(scope="session")
def table_3000():
    return build_tau_table(3000)


@pytest.fixture(scope="session")
def table_10k():
    return build_tau_table(10_000)
