"""
Run configuration loader.

A config is line-oriented ``key = value`` text; ``#`` starts a comment:

    label = A2 default suite
    row = 2 -1
    row = -1 2
    varsigma.1 = q^-1
    serre_mode = on
    degree_cap = 12
    cases = all
    output = reports/a2.jsonl

``cartan = B2`` may replace the ``row`` lines with a catalogued datum.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple

from domains.quantum.cartan import CARTAN_TYPES, CartanDatum, IParams, build_datum, default_params
from domains.quantum.pbw import DEFAULT_DEGREE_CAP
from domains.quantum.qfield import RatFunc, parse_ratfunc
from .reliability import ConfigError, IQuantumError, ValidationError

logger = logging.getLogger(__name__)

CASE_NAMES: Dict[str, str] = {
    "lemma31": "antipode-formulas",
    "thm32": "comult-formula",
    "prop33": "adjoint-formula",
    "eq11": "classical-serre-adjoint",
    "prop34": "iserre-bridge",
    "thm35": "iserre-equivalence",
    "prop36": "serre-lusztig-bridge",
    "thm37": "serre-lusztig-equivalence",
    "thm42": "iserre",
    "lemma41": "annihilation",
    "lemma43": "tensor-annihilation",
    "thm44": "serre-lusztig",
    "thm45": "mixed-serre",
}
CASE_IDS: Tuple[str, ...] = tuple(CASE_NAMES)
# Descriptive names are accepted wherever a case id is.
CASE_ALIASES: Dict[str, str] = {name: case for case, name in CASE_NAMES.items()}

_SINGLE_KEYS = ("cartan", "serre_mode", "degree_cap", "cases", "output", "label")


@dataclass(frozen=True)
class RunConfig:
    """A parsed run configuration."""

    rows: Tuple[Tuple[int, ...], ...]
    varsigma: Dict[int, RatFunc] = field(default_factory=dict)
    serre_mode: bool = True
    degree_cap: int = DEFAULT_DEGREE_CAP
    cases: Tuple[str, ...] = CASE_IDS
    output: Optional[str] = None
    label: str = ""
    name: str = ""

    def datum(self) -> CartanDatum:
        return build_datum(self.rows, name=self.name)

    def params(self) -> IParams:
        return default_params(self.datum(), self.varsigma, self.serre_mode)


def _parse_bool(value: str, line: int) -> bool:
    lowered = value.lower()
    if lowered in ("on", "true", "yes", "1"):
        return True
    if lowered in ("off", "false", "no", "0"):
        return False
    raise ConfigError(f"expected on/off, got {value!r}", line)


def _parse_cases(value: str, line: int) -> Tuple[str, ...]:
    if value.strip().lower() == "all":
        return CASE_IDS
    cases = tuple(c.strip() for c in value.split(",") if c.strip())
    if not cases:
        raise ConfigError("cases must name at least one case", line)
    unknown = [c for c in cases if resolve_case(c) is None]
    if unknown:
        raise ConfigError(f"unknown cases {unknown}; known: {list(CASE_IDS)}", line)
    return tuple(resolve_case(c) for c in cases)


def resolve_case(name: str) -> Optional[str]:
    """The canonical case id for an id or a descriptive alias, or None."""
    if name in CASE_NAMES:
        return name
    return CASE_ALIASES.get(name)


def parse_cases(value: str) -> Tuple[str, ...]:
    """Parse a comma-separated case list (or ``all``) outside a config file."""
    return _parse_cases(value, None)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a run configuration.

    Args:
        text: Config file contents

    Returns:
        RunConfig: The validated configuration

    Raises:
        ConfigError: On syntax errors, invalid data or zero parameters, with the line number
    """
    rows = []
    first_row_line = None
    varsigma: Dict[int, RatFunc] = {}
    varsigma_lines: Dict[int, int] = {}
    single: Dict[str, Tuple[str, int]] = {}

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", number)
        key, value = (part.strip() for part in line.split("=", 1))
        if not value:
            raise ConfigError(f"missing value for {key!r}", number)

        if key == "row":
            try:
                rows.append(tuple(int(tok) for tok in value.split()))
            except ValueError:
                raise ConfigError(f"row entries must be integers, got {value!r}", number)
            first_row_line = first_row_line or number
        elif key.startswith("varsigma."):
            suffix = key[len("varsigma."):]
            if not suffix.isdigit():
                raise ConfigError(f"bad parameter key {key!r}", number)
            try:
                parsed = parse_ratfunc(value)
            except IQuantumError as e:
                raise ConfigError(f"{key}: {e}", number)
            if parsed.is_zero():
                raise ConfigError(f"{key} must be nonzero", number)
            varsigma[int(suffix)] = parsed
            varsigma_lines[int(suffix)] = number
        elif key in _SINGLE_KEYS:
            if key in single:
                raise ConfigError(f"duplicate key {key!r} (first on line {single[key][1]})", number)
            single[key] = (value, number)
        else:
            raise ConfigError(f"unknown key {key!r}", number)

    name = ""
    if "cartan" in single:
        value, number = single["cartan"]
        if rows:
            raise ConfigError("give either 'cartan' or 'row' lines, not both", number)
        if value not in CARTAN_TYPES:
            raise ConfigError(f"unknown Cartan type {value!r}; known: {sorted(CARTAN_TYPES)}", number)
        rows = list(CARTAN_TYPES[value])
        name = value
        first_row_line = number
    if not rows:
        raise ConfigError("no Cartan datum: add 'row = ...' lines or 'cartan = <type>'")

    try:
        datum = build_datum(rows, name=name)
    except ValidationError as e:
        raise ConfigError(str(e), first_row_line)
    for i, number in varsigma_lines.items():
        if i not in datum.index_set:
            raise ConfigError(f"varsigma.{i} is outside the index set {list(datum.index_set)}", number)

    serre_mode = True
    if "serre_mode" in single:
        serre_mode = _parse_bool(*single["serre_mode"])
    degree_cap = DEFAULT_DEGREE_CAP
    if "degree_cap" in single:
        value, number = single["degree_cap"]
        if not value.isdigit() or int(value) < 1:
            raise ConfigError(f"degree_cap must be a positive integer, got {value!r}", number)
        degree_cap = int(value)
    cases = _parse_cases(*single["cases"]) if "cases" in single else CASE_IDS

    config = RunConfig(
        rows=datum.pairing,
        varsigma=varsigma,
        serre_mode=serre_mode,
        degree_cap=degree_cap,
        cases=cases,
        output=single["output"][0] if "output" in single else None,
        label=single["label"][0] if "label" in single else "",
        name=name,
    )
    logger.debug(f"Parsed config for {datum.summary()} with cases {list(cases)}")
    return config


def load_config(path: Path) -> RunConfig:
    """Read and parse a config file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"))
