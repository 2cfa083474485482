"""
Exact arithmetic in the field Q(q).

Coefficients are ``fractions.Fraction`` values (stored as ``int`` when
integral). A ``LaurentPoly`` is a finite map exponent -> nonzero coefficient;
a ``RatFunc`` is a reduced fraction of Laurent polynomials whose denominator
has lowest exponent 0 and leading coefficient 1, so structural equality is
equality in Q(q).
"""

import logging
import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple, Union

from helpers.reliability import FieldDivisionError, ParseError, ValidationError

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]


def _norm(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


# Dense polynomial helpers: coefficient lists indexed by degree, no trailing zeros.
def _strip(coeffs: List[Number]) -> List[Number]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _dup_divmod(a: List[Number], b: List[Number]) -> Tuple[List[Number], List[Number]]:
    """Long division a = quot * b + rem over Q."""
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(rem) - 1 < db:
        return [], rem
    quot = [0] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        c = rem[k + db]
        if c == 0:
            continue
        c = _norm(Fraction(c) / lead) if not isinstance(lead, int) or lead != 1 else c
        quot[k] = c
        for t, bc in enumerate(b):
            rem[k + t] = _norm(rem[k + t] - c * bc)
    return _strip(quot), _strip(rem[:db])


def _dup_monic(a: List[Number]) -> List[Number]:
    lead = a[-1]
    if lead == 1:
        return a
    return [_norm(Fraction(c) / lead) for c in a]


def _dup_gcd(a: List[Number], b: List[Number]) -> List[Number]:
    """Monic Euclidean GCD over Q."""
    if not a:
        return _dup_monic(b) if b else []
    if not b:
        return _dup_monic(a)
    a, b = _dup_monic(a), _dup_monic(b)
    while b:
        _, r = _dup_divmod(a, b)
        a, b = b, (_dup_monic(r) if r else r)
    return a


class LaurentPoly:
    """Immutable Laurent polynomial in q with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Dict[int, Number]] = None):
        clean = {}
        for exp, coeff in (terms or {}).items():
            if not isinstance(exp, int):
                raise ValidationError(f"exponent must be an integer, got {exp!r}")
            coeff = _norm(Fraction(coeff)) if not isinstance(coeff, int) else coeff
            if coeff != 0:
                clean[exp] = coeff
        self._terms = clean
        self._hash = None

    @classmethod
    def _make(cls, terms: Dict[int, Number]) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exp: int, coeff: Number = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def from_dense(cls, low: int, coeffs: List[Number]) -> "LaurentPoly":
        return cls._make({low + k: c for k, c in enumerate(coeffs) if c != 0})

    # Structure
    def items(self) -> Iterator[Tuple[int, Number]]:
        return iter(self._terms.items())

    def coeff(self, exp: int) -> Number:
        return self._terms.get(exp, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_one(self) -> bool:
        return len(self._terms) == 1 and self._terms.get(0) == 1

    @property
    def low(self) -> int:
        return min(self._terms)

    @property
    def high(self) -> int:
        return max(self._terms)

    @property
    def lead(self) -> Number:
        return self._terms[self.high]

    def to_dense(self) -> Tuple[int, List[Number]]:
        """Return (lowest exponent, coefficients from low to high)."""
        low = self.low
        coeffs = [0] * (self.high - low + 1)
        for exp, c in self._terms.items():
            coeffs[exp - low] = c
        return low, coeffs

    # Arithmetic
    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self._terms:
            return other
        if not other._terms:
            return self
        terms = dict(self._terms)
        for exp, c in other._terms.items():
            s = terms.get(exp, 0) + c
            if s == 0:
                terms.pop(exp, None)
            else:
                terms[exp] = _norm(s)
        return LaurentPoly._make(terms)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._make({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self._terms or not other._terms:
            return ZERO_POLY
        if len(other._terms) == 1:
            (e2, c2), = other._terms.items()
            return LaurentPoly._make({e + e2: _norm(c * c2) for e, c in self._terms.items()})
        if len(self._terms) == 1:
            return other * self
        terms: Dict[int, Number] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                terms[e1 + e2] = terms.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly._make({e: _norm(c) for e, c in terms.items() if c != 0})

    def scale(self, c: Number) -> "LaurentPoly":
        if c == 0:
            return ZERO_POLY
        if c == 1:
            return self
        return LaurentPoly._make({e: _norm(v * c) for e, v in self._terms.items()})

    def shift(self, k: int) -> "LaurentPoly":
        if k == 0:
            return self
        return LaurentPoly._make({e + k: c for e, c in self._terms.items()})

    def bar(self) -> "LaurentPoly":
        """Substitute q -> q^-1."""
        return LaurentPoly._make({-e: c for e, c in self._terms.items()})

    def exact_div(self, divisor: "LaurentPoly") -> "LaurentPoly":
        """Divide by a Laurent polynomial that divides self in Q[q, q^-1]."""
        if divisor.is_zero():
            raise FieldDivisionError("division of Laurent polynomial by zero")
        if self.is_zero():
            return self
        if divisor.is_monomial():
            (e, c), = divisor._terms.items()
            return self.shift(-e).scale(_norm(Fraction(1) / c))
        low_a, a = self.to_dense()
        low_b, b = divisor.to_dense()
        quot, rem = _dup_divmod(a, b)
        if rem:
            raise ValidationError("exact_div: divisor does not divide")
        return LaurentPoly.from_dense(low_a - low_b, quot)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __reduce__(self):
        return (LaurentPoly, (dict(self._terms),))

    def __repr__(self) -> str:
        return f"LaurentPoly({format_laurent(self)})"

    def __str__(self) -> str:
        return format_laurent(self)


ZERO_POLY = LaurentPoly._make({})
ONE_POLY = LaurentPoly._make({0: 1})


def poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """GCD in Q[q, q^-1], normalized monic with lowest exponent 0."""
    if a.is_zero() and b.is_zero():
        return ZERO_POLY
    if a.is_zero() or b.is_zero():
        nz = b if a.is_zero() else a
        _, coeffs = nz.to_dense()
        return LaurentPoly.from_dense(0, _dup_monic(coeffs))
    if a.is_monomial() or b.is_monomial():
        return ONE_POLY
    _, da = a.to_dense()
    _, db = b.to_dense()
    return LaurentPoly.from_dense(0, _dup_gcd(da, db))


def _canonical(num: LaurentPoly, den: LaurentPoly) -> Tuple[LaurentPoly, LaurentPoly]:
    if den.is_zero():
        raise FieldDivisionError("division by zero in Q(q)")
    if num.is_zero():
        return ZERO_POLY, ONE_POLY
    k = den.low
    if k:
        num, den = num.shift(-k), den.shift(-k)
    if den.is_monomial():
        c = den.lead
        return (num if c == 1 else num.scale(Fraction(1) / c)), ONE_POLY
    g = poly_gcd(num, den)
    if not g.is_one():
        num, den = num.exact_div(g), den.exact_div(g)
    return _normalize_lead(num, den)


def _normalize_lead(num: LaurentPoly, den: LaurentPoly) -> Tuple[LaurentPoly, LaurentPoly]:
    k = den.low
    if k:
        num, den = num.shift(-k), den.shift(-k)
    c = den.lead
    if c != 1:
        inv = Fraction(1) / c
        num, den = num.scale(inv), den.scale(inv)
    return num, den


class RatFunc:
    """Element of Q(q) in canonical reduced form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Union[LaurentPoly, Number] = 0, den: Union[LaurentPoly, Number] = 1):
        if not isinstance(num, LaurentPoly):
            num = LaurentPoly({0: num})
        if not isinstance(den, LaurentPoly):
            den = LaurentPoly({0: den})
        self.num, self.den = _canonical(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly) -> "RatFunc":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value: Union["RatFunc", LaurentPoly, Number]) -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, LaurentPoly):
            return cls._raw(value, ONE_POLY)
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls._raw(LaurentPoly({0: value}), ONE_POLY)
        raise TypeError(f"cannot coerce {type(value).__name__} to RatFunc")

    # Predicates
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def is_monomial(self) -> bool:
        """True for c*q^k."""
        return self.den.is_one() and self.num.is_monomial()

    def monomial_exponent(self) -> Optional[int]:
        """Return k if self is exactly q^k, else None."""
        if self.den.is_one() and self.num.is_monomial() and self.num.lead == 1:
            return self.num.low
        return None

    # Field operations
    def __add__(self, other) -> "RatFunc":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if other.den.is_one():
            return RatFunc._raw(self.num + other.num * self.den, self.den)
        if self.den.is_one():
            return RatFunc._raw(other.num + self.num * other.den, other.den)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "RatFunc":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        if other.is_monomial():
            return RatFunc._raw(self.num * other.num, self.den)
        if self.is_monomial():
            return RatFunc._raw(other.num * self.num, other.den)
        if self.den.is_one() and other.den.is_one():
            return RatFunc._raw(self.num * other.num, ONE_POLY)
        # cross-cancel before multiplying
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1, d2 = (self.num.exact_div(g1), other.den.exact_div(g1)) if not g1.is_one() else (self.num, other.den)
        n2, d1 = (other.num.exact_div(g2), self.den.exact_div(g2)) if not g2.is_one() else (other.num, self.den)
        num, den = _normalize_lead(n1 * n2, d1 * d2)
        return RatFunc._raw(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise FieldDivisionError("inverse of zero in Q(q)")
        num, den = _normalize_lead(self.den, self.num)
        return RatFunc._raw(num, den)

    def __truediv__(self, other) -> "RatFunc":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int) -> "RatFunc":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def bar(self) -> "RatFunc":
        """Substitute q -> q^-1."""
        return RatFunc(self.num.bar(), self.den.bar())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, LaurentPoly)):
            other = RatFunc.coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __repr__(self) -> str:
        return f"RatFunc({format_ratfunc(self)})"

    def __str__(self) -> str:
        return format_ratfunc(self)

    def __reduce__(self):
        return (parse_ratfunc, (format_ratfunc(self),))


def _coerce_or_none(value) -> Optional[RatFunc]:
    try:
        return RatFunc.coerce(value)
    except TypeError:
        return None


ZERO = RatFunc._raw(ZERO_POLY, ONE_POLY)
ONE = RatFunc._raw(ONE_POLY, ONE_POLY)


def field_arith(op: str, a: RatFunc, b: Optional[RatFunc] = None) -> RatFunc:
    """Apply a named field operation: add, sub, mul, div, neg, inverse."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inverse":
        return a.inverse()
    raise ValidationError(f"unknown field operation {op!r}")


@lru_cache(maxsize=None)
def qpow(t: int) -> RatFunc:
    """Return q^t."""
    return RatFunc._raw(LaurentPoly._make({t: 1}), ONE_POLY)


@lru_cache(maxsize=None)
def qint(n: int, eps: int = 1) -> RatFunc:
    """Quantum integer [n]_i with q_i = q^eps."""
    if n < 0:
        return -qint(-n, eps)
    terms = {eps * (n - 1 - 2 * k): 1 for k in range(n)}
    return RatFunc._raw(LaurentPoly._make(terms), ONE_POLY)


@lru_cache(maxsize=None)
def qfact(n: int, eps: int = 1) -> RatFunc:
    """Quantum factorial [n]_i!."""
    if n < 0:
        raise ValidationError(f"quantum factorial needs n >= 0, got {n}")
    if n == 0:
        return ONE
    return qint(n, eps) * qfact(n - 1, eps)


def qbinom(n: int, k: int, eps: int = 1) -> RatFunc:
    """Quantum binomial coefficient for 0 <= k <= n."""
    if k < 0 or k > n:
        return ZERO
    return qfact(n, eps) / (qfact(k, eps) * qfact(n - k, eps))


# Printing
def _format_coeff(c: Number) -> str:
    return str(c) if isinstance(c, int) else f"{c.numerator}/{c.denominator}"


def format_laurent(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for exp in sorted((e for e, _ in p.items()), reverse=True):
        c = p.coeff(exp)
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if exp == 0:
            body = _format_coeff(mag)
        else:
            power = "q" if exp == 1 else f"q^{exp}"
            body = power if mag == 1 else f"{_format_coeff(mag)}*{power}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += sign + body
    return out


def format_ratfunc(r: RatFunc) -> str:
    """Render as `num` or `(num)/(den)`."""
    if r.den.is_one():
        return format_laurent(r.num)
    return f"({format_laurent(r.num)})/({format_laurent(r.den)})"


# Parsing
_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> List[str]:
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} at position {pos} in {text!r}")
        tok = m.group(1) or m.group(2) or m.group(3)
        tokens.append("^" if tok == "**" else tok)
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: Optional[str] = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'a token'} in {self.text!r}")
        self.pos += 1
        return tok

    def expr(self) -> RatFunc:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RatFunc:
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.factor()
            value = value * rhs if op == "*" else value / rhs
        return value

    def factor(self) -> RatFunc:
        if self.peek() == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() in ("-", "+"):
                sign = -1 if self.take() == "-" else 1
            tok = self.take()
            if not tok.isdigit():
                raise ParseError(f"exponent must be an integer in {self.text!r}")
            base = base ** (sign * int(tok))
        return base

    def atom(self) -> RatFunc:
        tok = self.take()
        if tok.isdigit():
            return RatFunc.coerce(int(tok))
        if tok == "q":
            return qpow(1)
        if tok == "(":
            value = self.expr()
            self.take(")")
            return value
        raise ParseError(f"unexpected token {tok!r} in {self.text!r}")


def parse_ratfunc(text: str) -> RatFunc:
    """Parse a rational function written in the report grammar, e.g. `(q^2+1)/(q)`."""
    parser = _Parser(text)
    if not parser.tokens:
        raise ParseError("empty rational-function literal")
    value = parser.expr()
    if parser.peek() is not None:
        raise ParseError(f"trailing input {parser.peek()!r} in {text!r}")
    return value
