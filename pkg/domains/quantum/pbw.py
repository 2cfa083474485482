"""
Weight-graded normal forms for U+ (and, by mirror image, U-).

Words are tuples of generator indices. At each weight the q-Serre ideal is
spanned by all placements w1 * S_ij * w2; the span is echelonized
fraction-free over Q[q, q^-1] and every row is then normalized so that its
pivot (the greatest word in degree-lexicographic order) has coefficient 1.
A word is in normal form when it is not a pivot.
"""

import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Protocol, Sequence, Tuple

from helpers.reliability import (
    DegreeCapExceeded,
    IQuantumError,
    ValidationError,
    log_execution_time,
    validate_distinct,
)
from .cartan import CartanDatum
from .qfield import (
    ONE,
    ONE_POLY,
    LaurentPoly,
    RatFunc,
    format_ratfunc,
    parse_ratfunc,
    poly_gcd,
    qfact,
)

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
Weight = Tuple[int, ...]

DEFAULT_DEGREE_CAP = 12


def word_weight(word: Sequence[int], rank: int) -> Weight:
    """Multiplicity of each generator in a word."""
    counts = [0] * rank
    for letter in word:
        counts[letter - 1] += 1
    return tuple(counts)


def word_key(word: Word) -> Tuple[int, Word]:
    """Sort key for the degree-lexicographic order."""
    return (len(word), word)


def format_word(word: Word, letter: str = "E") -> str:
    return "".join(f"{letter}{i}" for i in word) if word else "1"


@dataclass(frozen=True)
class GradedVector:
    """Element of U+ at a single weight, in the word basis."""

    weight: Weight
    coords: Mapping[Word, RatFunc]

    @classmethod
    def build(cls, weight: Weight, coords: Mapping[Word, RatFunc]) -> "GradedVector":
        clean = {}
        for word, c in coords.items():
            c = RatFunc.coerce(c)
            if c.is_zero():
                continue
            if word_weight(word, len(weight)) != tuple(weight):
                raise ValidationError(f"word {format_word(word)} does not have weight {weight}")
            clean[tuple(word)] = c
        return cls(tuple(weight), clean)

    @classmethod
    def word(cls, word: Word, rank: int) -> "GradedVector":
        return cls(word_weight(word, rank), {tuple(word): ONE})

    def is_zero(self) -> bool:
        return not self.coords

    def scale(self, c) -> "GradedVector":
        c = RatFunc.coerce(c)
        if c.is_zero():
            return GradedVector(self.weight, {})
        return GradedVector(self.weight, {w: v * c for w, v in self.coords.items()})

    def __add__(self, other: "GradedVector") -> "GradedVector":
        if other.weight != self.weight:
            raise ValidationError(f"cannot add vectors of weights {self.weight} and {other.weight}")
        out = dict(self.coords)
        for w, v in other.coords.items():
            s = out.get(w)
            s = v if s is None else s + v
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return GradedVector(self.weight, out)

    def __neg__(self) -> "GradedVector":
        return self.scale(-1)

    def __sub__(self, other: "GradedVector") -> "GradedVector":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedVector):
            return NotImplemented
        return self.weight == other.weight and dict(self.coords) == dict(other.coords)

    def __hash__(self) -> int:
        return hash((self.weight, frozenset(self.coords.items())))

    def format(self, letter: str = "E") -> str:
        if not self.coords:
            return "0"
        parts = []
        for w in sorted(self.coords, key=word_key):
            parts.append(f"({format_ratfunc(self.coords[w])})*{format_word(w, letter)}")
        return " + ".join(parts)


@dataclass(frozen=True)
class IdealBasis:
    """Echelon basis of one graded piece of the q-Serre ideal.

    ``rows`` maps each pivot word to its row; the pivot coefficient is 1 and
    no row mentions another row's pivot.
    """

    weight: Weight
    rows: Mapping[Word, Mapping[Word, RatFunc]]

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> Tuple[Word, ...]:
        return tuple(sorted(self.rows, key=word_key))

    def to_records(self) -> List[list]:
        """JSON-ready form used by the persistent cache."""
        return [
            [list(pivot), [[list(w), format_ratfunc(c)] for w, c in sorted(row.items(), key=lambda x: word_key(x[0]))]]
            for pivot, row in sorted(self.rows.items(), key=lambda x: word_key(x[0]))
        ]

    @classmethod
    def from_records(cls, weight: Weight, records: Sequence[Sequence]) -> "IdealBasis":
        rows = {}
        for pivot, entries in records:
            rows[tuple(pivot)] = {tuple(w): parse_ratfunc(c) for w, c in entries}
        return cls(tuple(weight), rows)


class IdealStore(Protocol):
    """Persistent storage for ideal bases (see helpers.db_helper.IdealBasisCache)."""

    def load_ideal_basis(self, datum_key: str, serre_mode: bool, weight: Weight) -> Optional[list]:
        ...

    def store_ideal_basis(self, datum_key: str, serre_mode: bool, weight: Weight, records: list) -> None:
        ...


# Fraction-free row arithmetic over Q[q, q^-1]; rows map word -> LaurentPoly.
PolyRow = Dict[Word, LaurentPoly]


def _poly_lcm(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if a.is_one():
        return b
    if b.is_one():
        return a
    return (a * b).exact_div(poly_gcd(a, b))


def _clear_denominators(row: Mapping[Word, RatFunc]) -> PolyRow:
    common = ONE_POLY
    for c in row.values():
        common = _poly_lcm(common, c.den)
    return {w: c.num * common.exact_div(c.den) for w, c in row.items()}


def _remove_content(row: PolyRow) -> PolyRow:
    """Divide out the gcd of the entries; the greatest word gets a monic entry."""
    if not row:
        return row
    g = None
    for value in row.values():
        g = value if g is None else poly_gcd(g, value)
        if g.is_one():
            break
    if g is not None and not g.is_one() and not g.is_monomial():
        row = {w: v.exact_div(g) for w, v in row.items()}
    low = min(v.low for v in row.values())
    lead = row[max(row, key=word_key)].lead
    if low or lead != 1:
        inv = Fraction(1) / lead
        row = {w: v.shift(-low).scale(inv) for w, v in row.items()}
    return row


def _combine(a: LaurentPoly, row: PolyRow, b: LaurentPoly, other: PolyRow) -> PolyRow:
    """Return a*row - b*other with zero entries dropped."""
    out = {w: a * v for w, v in row.items()}
    for w, v in other.items():
        s = out.get(w)
        s = -(b * v) if s is None else s - b * v
        if s.is_zero():
            out.pop(w, None)
        else:
            out[w] = s
    return out


def echelonize(rows: Sequence[Mapping[Word, RatFunc]]) -> Dict[Word, Dict[Word, RatFunc]]:
    """Fraction-free Gauss-Jordan elimination with pivot = greatest word.

    Args:
        rows: Spanning vectors as maps word -> RatFunc

    Returns:
        Dict mapping each pivot word to its fully reduced row, pivot entry 1
    """
    basis: Dict[Word, PolyRow] = {}
    for raw in rows:
        row = _remove_content(_clear_denominators(raw))
        for pivot in sorted(basis, key=word_key, reverse=True):
            if pivot in row:
                prow = basis[pivot]
                row = _remove_content(_combine(prow[pivot], row, row[pivot], prow))
        if not row:
            continue
        pivot = max(row, key=word_key)
        for other_pivot, prow in list(basis.items()):
            if pivot in prow:
                basis[other_pivot] = _remove_content(_combine(row[pivot], prow, prow[pivot], row))
        basis[pivot] = row

    result = {}
    for pivot, row in basis.items():
        lead = RatFunc.coerce(row[pivot])
        result[pivot] = {w: RatFunc.coerce(v) / lead for w, v in row.items()}
    return result


class SerreQuotient:
    """Normal forms of words modulo the q-Serre ideal of a Cartan datum.

    Ideal bases are computed at most once per weight; the lock is held for
    the whole computation so concurrent callers see a single basis.
    """

    def __init__(self, datum: CartanDatum, serre_mode: bool = True,
                 degree_cap: int = DEFAULT_DEGREE_CAP,
                 store: Optional[IdealStore] = None):
        self.datum = datum
        self.serre_mode = serre_mode
        self.degree_cap = degree_cap
        self.store = store
        self._bases: Dict[Weight, IdealBasis] = {}
        self._reduced: Dict[Word, Tuple[Tuple[Word, RatFunc], ...]] = {}
        self._serre: Dict[Tuple[int, int], GradedVector] = {}
        self._lock = threading.Lock()

    @property
    def rank(self) -> int:
        return self.datum.rank

    def check_cap(self, length: int) -> None:
        if length > self.degree_cap:
            raise DegreeCapExceeded(length, self.degree_cap)

    def _check_weight(self, weight: Sequence[int]) -> Weight:
        weight = tuple(weight)
        if len(weight) != self.rank or any(m < 0 for m in weight):
            raise ValidationError(f"weight {weight} is not a nonnegative vector of length {self.rank}")
        return weight

    def enumerate_words(self, weight: Sequence[int]) -> List[Word]:
        """All words of a weight in degree-lexicographic order.

        Raises:
            DegreeCapExceeded: If the total degree is above the cap
        """
        weight = self._check_weight(weight)
        self.check_cap(sum(weight))
        counts = list(weight)
        out: List[Word] = []

        def extend(prefix: List[int], remaining: int) -> None:
            if remaining == 0:
                out.append(tuple(prefix))
                return
            for pos, c in enumerate(counts):
                if c:
                    counts[pos] -= 1
                    prefix.append(pos + 1)
                    extend(prefix, remaining - 1)
                    prefix.pop()
                    counts[pos] += 1

        extend([], sum(weight))
        return out

    def serre_element(self, i: int, j: int) -> GradedVector:
        """Sum over r+s = 1-a_ij of (-1)^r E_i^(r) E_j E_i^(s) in the word basis."""
        self.datum.check_index(i)
        self.datum.check_index(j)
        validate_distinct(i, j)
        cached = self._serre.get((i, j))
        if cached is not None:
            return cached
        top = 1 - self.datum.a(i, j)
        eps = self.datum.eps_of(i)
        coords = {}
        for r in range(top + 1):
            s = top - r
            word = (i,) * r + (j,) + (i,) * s
            sign = 1 if r % 2 == 0 else -1
            coords[word] = (qfact(r, eps) * qfact(s, eps)).inverse() * sign
        weight = word_weight((i,) * top + (j,), self.rank)
        return self._serre.setdefault((i, j), GradedVector.build(weight, coords))

    def _placements(self, weight: Weight) -> Iterator[Dict[Word, RatFunc]]:
        for i in self.datum.index_set:
            for j in self.datum.index_set:
                if i == j:
                    continue
                element = self.serre_element(i, j)
                rest = tuple(w - s for w, s in zip(weight, element.weight))
                if any(m < 0 for m in rest):
                    continue
                for word in self.enumerate_words(rest):
                    for cut in range(len(word) + 1):
                        left, right = word[:cut], word[cut:]
                        yield {left + w + right: c for w, c in element.coords.items()}

    @log_execution_time
    def _compute_basis(self, weight: Weight) -> IdealBasis:
        if self.store is not None:
            try:
                records = self.store.load_ideal_basis(self.datum.key, self.serre_mode, weight)
            except IQuantumError as e:
                logger.warning(f"Ideal cache unavailable, continuing in memory: {e}")
                self.store = None
                records = None
            if records is not None:
                logger.debug(f"Ideal basis for weight {weight} loaded from cache")
                return IdealBasis.from_records(weight, records)

        rows = echelonize(list(self._placements(weight)))
        basis = IdealBasis(weight, rows)
        logger.debug(f"Ideal basis at weight {weight}: {len(basis)} rows")

        if self.store is not None:
            try:
                self.store.store_ideal_basis(self.datum.key, self.serre_mode, weight, basis.to_records())
            except IQuantumError as e:
                logger.warning(f"Could not persist ideal basis for weight {weight}: {e}")
        return basis

    def ideal_basis(self, weight: Sequence[int]) -> IdealBasis:
        """Echelon basis of the Serre ideal at a weight (empty when serre_mode is off)."""
        weight = self._check_weight(weight)
        self.check_cap(sum(weight))
        if not self.serre_mode:
            return IdealBasis(weight, {})
        basis = self._bases.get(weight)
        if basis is not None:
            return basis
        with self._lock:
            basis = self._bases.get(weight)
            if basis is None:
                basis = self._compute_basis(weight)
                self._bases[weight] = basis
        return basis

    def reduce(self, v: GradedVector) -> GradedVector:
        """Residue of v modulo the ideal piece at its weight."""
        if not self.serre_mode or v.is_zero():
            return v
        basis = self.ideal_basis(v.weight)
        result = v
        for pivot, row in basis.rows.items():
            c = result.coords.get(pivot)
            if c is not None:
                result = result - GradedVector(v.weight, row).scale(c)
        return result

    def reduce_word(self, word: Word) -> Tuple[Tuple[Word, RatFunc], ...]:
        """Normal form of a single word as (word, coefficient) pairs."""
        cached = self._reduced.get(word)
        if cached is not None:
            return cached
        self.check_cap(len(word))
        if not self.serre_mode or len(set(word)) < 2:
            result = ((word, ONE),)
        else:
            basis = self.ideal_basis(word_weight(word, self.rank))
            row = basis.rows.get(word)
            if row is None:
                result = ((word, ONE),)
            else:
                result = tuple((w, -c) for w, c in sorted(row.items(), key=lambda x: word_key(x[0])) if w != word)
        return self._reduced.setdefault(word, result)

    def quotient_dimension(self, weight: Sequence[int]) -> int:
        return len(self.enumerate_words(weight)) - len(self.ideal_basis(weight))
