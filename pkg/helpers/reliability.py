"""
Error types, input validation and execution decorators for the iquantum workspace.
Every deliberate failure in the engine is an IQuantumError subclass.
"""

import time
import functools
import logging
from typing import Callable, Any, Optional, Sequence

logger = logging.getLogger(__name__)


class IQuantumError(Exception):
    """Base class for errors raised by the engine."""
    pass


class ValidationError(IQuantumError, ValueError):
    """Raised when validation fails."""
    pass


class ConfigError(ValidationError):
    """Raised when a run configuration cannot be parsed or validated."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParseError(ValidationError):
    """Raised when a rational-function literal is malformed."""
    pass


class FieldDivisionError(IQuantumError, ZeroDivisionError):
    """Raised on division by zero in Q(q)."""
    pass


class DegreeCapExceeded(IQuantumError):
    """Raised when a word would grow past the configured degree cap."""

    def __init__(self, length: int, cap: int):
        self.length = length
        self.cap = cap
        super().__init__(f"word length {length} exceeds degree cap {cap}")


class CacheError(IQuantumError):
    """Raised when the persistent cache cannot be used."""
    pass


def retry_with_backoff(max_retries: int = 3, initial_delay: float = 0.1,
                      backoff_factor: float = 2.0,
                      exceptions: tuple = (Exception,)):
    """Decorator for retrying functions with exponential backoff.

    Args:
        max_retries: Maximum number of retry attempts
        initial_delay: Initial delay in seconds
        backoff_factor: Factor to multiply delay by on each retry
        exceptions: Exceptions that trigger a retry (e.g. sqlite3.OperationalError)
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            delay = initial_delay
            last_exception = None

            for attempt in range(max_retries + 1):
                try:
                    return func(*args, **kwargs)
                except exceptions as e:
                    last_exception = e
                    if attempt < max_retries:
                        logger.warning(
                            f"Attempt {attempt + 1}/{max_retries + 1} failed for {func.__name__}: {e}. "
                            f"Retrying in {delay}s..."
                        )
                        time.sleep(delay)
                        delay *= backoff_factor
                    else:
                        logger.error(
                            f"All {max_retries + 1} attempts failed for {func.__name__}: {e}"
                        )

            raise last_exception

        return wrapper
    return decorator


def log_execution_time(func: Callable) -> Callable:
    """Decorator to log function execution time.

    Args:
        func: Function to wrap
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        try:
            result = func(*args, **kwargs)
            execution_time = time.perf_counter() - start_time
            logger.debug(f"{func.__qualname__} executed in {execution_time:.3f}s")
            return result
        except Exception as e:
            execution_time = time.perf_counter() - start_time
            logger.error(
                f"{func.__qualname__} failed after {execution_time:.3f}s: {e}"
            )
            raise

    return wrapper


def validate_before_execute(validation_func: Callable) -> Callable:
    """Decorator to validate inputs before execution.

    The validator receives the same arguments as the wrapped function and
    raises ValidationError on bad input; the error propagates unchanged.

    Args:
        validation_func: Function to validate inputs
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                validation_func(*args, **kwargs)
            except ValidationError as e:
                logger.debug(f"Validation failed for {func.__name__}: {e}")
                raise

            return func(*args, **kwargs)

        return wrapper
    return decorator


# Input validation functions
def validate_nonnegative(value: Any, name: str = "value") -> int:
    """Validate a nonnegative integer."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{name} must be an integer, got {type(value).__name__}")
    if value < 0:
        raise ValidationError(f"{name} must be nonnegative, got {value}")
    return value


def validate_index(index: Any, index_set: Sequence[int]) -> int:
    """Validate a generator index against the index set of a datum."""
    if isinstance(index, bool) or not isinstance(index, int):
        raise ValidationError(f"Invalid index: must be an integer, got {type(index).__name__}")
    if index not in index_set:
        raise ValidationError(f"Unknown index {index}: index set is {list(index_set)}")
    return index


def validate_distinct(i: int, j: int) -> None:
    """Validate that a relation is requested for two different indices."""
    if i == j:
        raise ValidationError(f"indices must differ, got i = j = {i}")


def validate_parity(parity: Any) -> int:
    """Validate a parity, given as 0 or 1."""
    if parity not in (0, 1) or isinstance(parity, bool):
        raise ValidationError(f"Invalid parity: must be 0 or 1, got {parity!r}")
    return parity


def validate_pairing(rows: Sequence[Sequence[Any]]) -> list:
    """Validate the shape and entries of a symmetric pairing matrix."""
    rows = [list(row) for row in rows]
    size = len(rows)
    if not 1 <= size <= 4:
        raise ValidationError(f"rank must be between 1 and 4, got {size}")
    for r, row in enumerate(rows):
        if len(row) != size:
            raise ValidationError(f"row {r + 1} has {len(row)} entries, expected {size}")
        for entry in row:
            if isinstance(entry, bool) or not isinstance(entry, int):
                raise ValidationError(f"pairing entries must be integers, got {entry!r}")
    for r in range(size):
        for c in range(r + 1, size):
            if rows[r][c] != rows[c][r]:
                raise ValidationError(
                    f"pairing must be symmetric: entry ({r + 1},{c + 1}) = {rows[r][c]} "
                    f"but ({c + 1},{r + 1}) = {rows[c][r]}"
                )
    return rows
