"""iquantum helpers package: errors, the persistent cache, run configuration, the case runner and the CLI.

Only the leaf modules are imported here; config_loader, cases and cli depend on
domains/, which itself imports helpers.reliability.
"""

from . import reliability
from .db_helper import (
    init_database,
    get_connection,
    store_ideal_basis,
    load_ideal_basis,
    log_run,
    get_cache_stats,
    clear_cache,
    IdealBasisCache,
)

__all__ = [
    # Reliability (errors, decorators, validators)
    "reliability",
    # Persistent cache
    "init_database",
    "get_connection",
    "store_ideal_basis",
    "load_ideal_basis",
    "log_run",
    "get_cache_stats",
    "clear_cache",
    "IdealBasisCache",
]
