"""
Pytest configuration and fixtures for iquantum tests.
"""

import tempfile
from pathlib import Path
import pytest

from helpers.db_helper import init_database, get_connection
from domains.quantum.cartan import default_params, named_datum
from domains.quantum.qfield import qpow
from domains.quantum.uq import QuantumGroup


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running verification (deselect with -m 'not slow')")


@pytest.fixture
def temp_db():
    """Create a temporary cache database for testing.

    Yields:
        Path: Path to temporary database file
    """
    with tempfile.NamedTemporaryFile(suffix=".db", delete=False) as f:
        db_path = Path(f.name)

    workspace_root = Path(__file__).parent.parent
    schema_sql = workspace_root / "schema.sql"

    init_database(
        db_path=db_path,
        schema_path=schema_sql if schema_sql.exists() else None
    )

    yield db_path

    for suffix in ("", "-wal", "-shm"):
        path = Path(str(db_path) + suffix)
        if path.exists():
            path.unlink()


@pytest.fixture
def db_connection(temp_db):
    """Get a database connection to temporary database.

    Yields:
        sqlite3.Connection: Database connection
    """
    with get_connection(temp_db) as conn:
        yield conn


# Algebras are session-scoped so their memo tables are shared between tests.
@pytest.fixture(scope="session")
def a1():
    return QuantumGroup(named_datum("A1"))


@pytest.fixture(scope="session")
def a1xa1():
    return QuantumGroup(named_datum("A1xA1"))


@pytest.fixture(scope="session")
def a2():
    return QuantumGroup(named_datum("A2"))


@pytest.fixture(scope="session")
def a2_no_serre():
    datum = named_datum("A2")
    return QuantumGroup(datum, default_params(datum, serre_mode=False))


@pytest.fixture(scope="session")
def a2_cubed():
    """A2 with varsigma_i = q_i^3, so q_i varsigma_i = q_i^4 has the square root q_i^2."""
    datum = named_datum("A2")
    return QuantumGroup(datum, default_params(datum, {1: qpow(3), 2: qpow(3)}))


@pytest.fixture(scope="session")
def b2():
    return QuantumGroup(named_datum("B2"))


@pytest.fixture(scope="session")
def b2_cubed():
    """B2 with varsigma_i = q_i^3: q^6 on the long root 1, q^3 on the short root 2."""
    datum = named_datum("B2")
    return QuantumGroup(datum, default_params(datum, {1: qpow(6), 2: qpow(3)}))


@pytest.fixture(scope="session")
def b2_no_serre():
    datum = named_datum("B2")
    return QuantumGroup(datum, default_params(datum, serre_mode=False))


@pytest.fixture(scope="session")
def g2():
    return QuantumGroup(named_datum("G2"))


@pytest.fixture(scope="session")
def a3():
    return QuantumGroup(named_datum("A3"))


@pytest.fixture(scope="session")
def c3():
    """Rank three with a_21 = -1 and a_23 = -2 at the middle node."""
    return QuantumGroup(named_datum("C3"))


@pytest.fixture(scope="session")
def c3_no_serre():
    datum = named_datum("C3")
    return QuantumGroup(datum, default_params(datum, serre_mode=False))
