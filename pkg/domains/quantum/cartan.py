"""
Cartan data and split ı-parameters.

The root datum is the simply-presented one (X = Y = Z^I, <h_i, alpha_j> = a_ij)
and the torus is generated by the K~_i. Every index is treated as a split
site: no Satake diagram, tau = id.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Tuple

from helpers.reliability import ValidationError, validate_index, validate_pairing
from .qfield import RatFunc, format_ratfunc, qpow

logger = logging.getLogger(__name__)

# Named pairings; index order is the row order.
CARTAN_TYPES: Dict[str, Tuple[Tuple[int, ...], ...]] = {
    "A1": ((2,),),
    "A1xA1": ((2, 0), (0, 2)),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((4, -2), (-2, 2)),
    "C2": ((2, -2), (-2, 4)),
    "G2": ((6, -3), (-3, 2)),
    "A1^(1)": ((2, -2), (-2, 2)),
    "A3": ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
    "C3": ((2, -1, 0), (-1, 2, -2), (0, -2, 4)),
}


@dataclass(frozen=True)
class CartanDatum:
    """A validated Cartan datum on the index set 1..rank."""

    pairing: Tuple[Tuple[int, ...], ...]
    cartan_matrix: Tuple[Tuple[int, ...], ...]
    eps: Tuple[int, ...]
    name: str = ""

    @property
    def rank(self) -> int:
        return len(self.pairing)

    @property
    def index_set(self) -> Tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    def dot(self, i: int, j: int) -> int:
        """The symmetric pairing i.j."""
        return self.pairing[i - 1][j - 1]

    def a(self, i: int, j: int) -> int:
        return self.cartan_matrix[i - 1][j - 1]

    def eps_of(self, i: int) -> int:
        return self.eps[i - 1]

    def q_i(self, i: int) -> RatFunc:
        return qpow(self.eps[i - 1])

    def check_index(self, i: int) -> int:
        return validate_index(i, self.index_set)

    @property
    def key(self) -> str:
        """Stable text key used by the persistent cache."""
        return ";".join(" ".join(str(x) for x in row) for row in self.pairing)

    def summary(self) -> str:
        label = f"{self.name} " if self.name else ""
        return f"{label}[{self.key}]"


def build_datum(rows: Sequence[Sequence[int]], name: str = "") -> CartanDatum:
    """Validate a symmetric pairing matrix and derive a_ij and eps_i.

    Args:
        rows: The matrix (i.j) as a sequence of integer rows
        name: Optional display name

    Returns:
        CartanDatum: The validated datum

    Raises:
        ValidationError: If the matrix is not a Cartan datum
    """
    rows = validate_pairing(rows)
    size = len(rows)
    for i in range(size):
        ii = rows[i][i]
        if ii <= 0 or ii % 2:
            raise ValidationError(f"diagonal entry {i + 1}.{i + 1} = {ii} must be a positive even integer")
    cartan = []
    for i in range(size):
        row = []
        for j in range(size):
            num, den = 2 * rows[i][j], rows[i][i]
            if num % den:
                raise ValidationError(
                    f"a_{i + 1}{j + 1} = 2({rows[i][j]})/{den} is not an integer"
                )
            aij = num // den
            if i != j and aij > 0:
                raise ValidationError(f"a_{i + 1}{j + 1} = {aij} must be nonpositive")
            row.append(aij)
        cartan.append(tuple(row))
    for i in range(size):
        for j in range(size):
            if (cartan[i][j] == 0) != (cartan[j][i] == 0):
                raise ValidationError(f"a_{i + 1}{j + 1} and a_{j + 1}{i + 1} must vanish together")
    datum = CartanDatum(
        pairing=tuple(tuple(row) for row in rows),
        cartan_matrix=tuple(cartan),
        eps=tuple(rows[i][i] // 2 for i in range(size)),
        name=name,
    )
    logger.debug(f"Built Cartan datum {datum.summary()} with a = {datum.cartan_matrix}")
    return datum


def named_datum(name: str) -> CartanDatum:
    """Build one of the catalogued data (A2, B2, G2, ...)."""
    if name not in CARTAN_TYPES:
        raise ValidationError(f"unknown Cartan type {name!r}; known: {sorted(CARTAN_TYPES)}")
    return build_datum(CARTAN_TYPES[name], name=name)


@dataclass(frozen=True)
class IParams:
    """Split ı-parameters: one nonzero varsigma_i per index, plus the Serre switch."""

    varsigma: Tuple[RatFunc, ...]
    serre_mode: bool = True

    def __post_init__(self):
        for pos, value in enumerate(self.varsigma):
            if value.is_zero():
                raise ValidationError(f"varsigma.{pos + 1} must be nonzero")

    def of(self, i: int) -> RatFunc:
        return self.varsigma[i - 1]

    def summary(self) -> str:
        values = ", ".join(f"varsigma.{k + 1}={format_ratfunc(v)}" for k, v in enumerate(self.varsigma))
        return f"{values}, serre_mode={'on' if self.serre_mode else 'off'}"


def default_params(datum: CartanDatum,
                   overrides: Optional[Mapping[int, RatFunc]] = None,
                   serre_mode: bool = True) -> IParams:
    """Default parameters varsigma_i = q_i^-1, with optional per-index overrides."""
    values = [qpow(-e) for e in datum.eps]
    for i, value in (overrides or {}).items():
        datum.check_index(i)
        values[i - 1] = RatFunc.coerce(value)
    return IParams(varsigma=tuple(values), serre_mode=serre_mode)
