"""
iquantum Cache Helper
SQLite storage for persisted Serre-ideal bases and the run log.
"""

import json
import os
import sqlite3
import logging
import time
from pathlib import Path
from typing import Optional, Any, Dict, List, Sequence
from contextlib import contextmanager

from .reliability import CacheError, retry_with_backoff

logger = logging.getLogger(__name__)

CACHE_FILENAME = "iquantum-cache.db"
SCHEMA_PATH = Path(__file__).parent.parent / "schema.sql"


def cache_db_path() -> Optional[Path]:
    """Cache file location from IQUANTUM_CACHE_DIR, or None for in-memory only."""
    cache_dir = os.getenv("IQUANTUM_CACHE_DIR")
    if not cache_dir:
        return None
    return Path(cache_dir) / CACHE_FILENAME


@contextmanager
def get_connection(db_path: Path, retry_count: int = 3):
    """Get database connection with automatic cleanup and retry logic.

    Args:
        db_path: Path to SQLite database file
        retry_count: Number of retry attempts on connection failure

    Yields:
        sqlite3.Connection: Database connection with Row factory

    Raises:
        sqlite3.Error: If connection fails after retries
    """
    conn = None

    for attempt in range(retry_count):
        try:
            conn = sqlite3.connect(str(db_path), timeout=10.0)
            conn.row_factory = sqlite3.Row
            conn.execute("PRAGMA journal_mode = WAL")  # readers don't block the single writer
            conn.execute("PRAGMA synchronous = NORMAL")
            conn.execute("PRAGMA busy_timeout = 30000")
            break
        except sqlite3.Error as e:
            logger.warning(f"Connection attempt {attempt + 1}/{retry_count} failed: {e}")
            if attempt < retry_count - 1:
                time.sleep(0.1 * (attempt + 1))
            else:
                logger.error(f"All {retry_count} connection attempts failed")
                raise

    try:
        yield conn
        conn.commit()
    except sqlite3.Error as e:
        if conn:
            conn.rollback()
        logger.error(f"Database error: {e}")
        raise
    finally:
        if conn:
            conn.close()


def init_database(db_path: Path, schema_path: Optional[Path] = None,
                  reset: bool = False) -> None:
    """Create the cache schema.

    Args:
        db_path: Path to SQLite database file
        schema_path: Path to schema.sql file (defaults to workspace root)
        reset: Remove an existing database first

    Raises:
        FileNotFoundError: If schema file doesn't exist
        sqlite3.Error: If schema execution fails
    """
    schema_path = schema_path or SCHEMA_PATH
    db_path.parent.mkdir(parents=True, exist_ok=True)

    if reset and db_path.exists():
        logger.warning(f"Removing existing database at {db_path}")
        db_path.unlink()

    if not schema_path.exists():
        raise FileNotFoundError(f"Schema file not found: {schema_path}")

    schema_sql = schema_path.read_text(encoding="utf-8")
    with get_connection(db_path) as conn:
        conn.executescript(schema_sql)

    logger.info(f"Cache database ready at {db_path}")


def _weight_key(weight: Sequence[int]) -> str:
    return ",".join(str(m) for m in weight)


@retry_with_backoff(max_retries=3, initial_delay=0.1, exceptions=(sqlite3.OperationalError,))
def store_ideal_basis(db_path: Path, datum_key: str, serre_mode: bool,
                      weight: Sequence[int], records: List[list]) -> bool:
    """Persist an ideal basis; the first writer for a key wins.

    Returns:
        bool: True if this call inserted the row
    """
    with get_connection(db_path) as conn:
        cursor = conn.execute(
            """
            INSERT OR IGNORE INTO ideal_bases (datum_key, serre_mode, weight, row_count, rows_json)
            VALUES (?, ?, ?, ?, ?)
            """,
            (datum_key, int(serre_mode), _weight_key(weight), len(records), json.dumps(records)),
        )
        return cursor.rowcount == 1


@retry_with_backoff(max_retries=3, initial_delay=0.1, exceptions=(sqlite3.OperationalError,))
def load_ideal_basis(db_path: Path, datum_key: str, serre_mode: bool,
                     weight: Sequence[int]) -> Optional[List[list]]:
    """Load a persisted ideal basis, or None if it was never stored."""
    with get_connection(db_path) as conn:
        cursor = conn.execute(
            "SELECT rows_json FROM ideal_bases WHERE datum_key = ? AND serre_mode = ? AND weight = ?",
            (datum_key, int(serre_mode), _weight_key(weight)),
        )
        row = cursor.fetchone()
        return json.loads(row["rows_json"]) if row else None


def log_run(db_path: Path, record: Dict[str, Any], label: Optional[str] = None) -> int:
    """Append a finished case record to run_log.

    Args:
        db_path: Path to SQLite database file
        record: A report record (case, claim, params, outcome, witness, elapsed_ms)
        label: Optional run label from the config

    Returns:
        int: ID of the logged run
    """
    with get_connection(db_path) as conn:
        cursor = conn.execute(
            """
            INSERT INTO run_log (label, case_id, claim, params, outcome, witness, elapsed_ms)
            VALUES (?, ?, ?, ?, ?, ?, ?)
            """,
            (
                label,
                record["case"],
                record["claim"],
                record.get("params"),
                record["outcome"],
                record.get("witness"),
                record.get("elapsed_ms"),
            ),
        )
        return cursor.lastrowid


def get_cache_stats(db_path: Path) -> Dict[str, Any]:
    """Counts of persisted bases and logged runs."""
    with get_connection(db_path) as conn:
        stats: Dict[str, Any] = {"path": str(db_path)}
        cursor = conn.execute(
            "SELECT COUNT(*) AS bases, COALESCE(SUM(row_count), 0) AS total_rows FROM ideal_bases"
        )
        stats["ideal_bases"] = dict(cursor.fetchone())
        cursor = conn.execute(
            "SELECT outcome, COUNT(*) AS count FROM run_log GROUP BY outcome ORDER BY outcome"
        )
        stats["runs"] = {row["outcome"]: row["count"] for row in cursor.fetchall()}
        stats["size_bytes"] = db_path.stat().st_size if db_path.exists() else 0
        return stats


def clear_cache(db_path: Path) -> Dict[str, int]:
    """Delete every persisted basis and run record."""
    with get_connection(db_path) as conn:
        bases = conn.execute("DELETE FROM ideal_bases").rowcount
        runs = conn.execute("DELETE FROM run_log").rowcount
    logger.info(f"Cleared {bases} ideal bases and {runs} run records from {db_path}")
    return {"ideal_bases": bases, "runs": runs}


class IdealBasisCache:
    """Persistent store for ideal bases, as used by SerreQuotient.

    sqlite errors surface as CacheError so the engine can fall back to memory.
    """

    def __init__(self, db_path: Path):
        self.db_path = Path(db_path)
        try:
            init_database(self.db_path)
        except (sqlite3.Error, OSError) as e:
            raise CacheError(f"cannot open cache at {self.db_path}: {e}") from e

    @classmethod
    def from_env(cls) -> Optional["IdealBasisCache"]:
        path = cache_db_path()
        if path is None:
            return None
        try:
            return cls(path)
        except CacheError as e:
            logger.warning(f"{e}; continuing with in-memory caches")
            return None

    def load_ideal_basis(self, datum_key: str, serre_mode: bool, weight: Sequence[int]) -> Optional[list]:
        try:
            return load_ideal_basis(self.db_path, datum_key, serre_mode, weight)
        except sqlite3.Error as e:
            raise CacheError(f"cache read failed: {e}") from e

    def store_ideal_basis(self, datum_key: str, serre_mode: bool, weight: Sequence[int],
                          records: list) -> None:
        try:
            inserted = store_ideal_basis(self.db_path, datum_key, serre_mode, weight, records)
        except sqlite3.Error as e:
            raise CacheError(f"cache write failed: {e}") from e
        if inserted:
            logger.info(f"Persisted ideal basis for weight {tuple(weight)} ({len(records)} rows)")
