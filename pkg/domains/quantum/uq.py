"""
The quantum group U in triangular normal form.

An element is a finite sum of terms coeff * F_word * K~^mu * E_word with
both words Serre-reduced. Products are normal-formed by straightening
E-words past F-words with the commutator relation and moving torus
monomials outward. Comultiplication, antipode, counit and the rescaling
automorphisms act term by term.
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from helpers.reliability import ValidationError, validate_nonnegative
from .cartan import CartanDatum, IParams, default_params
from .pbw import DEFAULT_DEGREE_CAP, GradedVector, IdealStore, SerreQuotient, Word, format_word, word_key
from .qfield import ONE, ZERO, LaurentPoly, RatFunc, format_ratfunc, qfact, qpow

logger = logging.getLogger(__name__)

KExp = Tuple[int, ...]
Term = Tuple[Word, KExp, Word]
Scalar = Union[RatFunc, LaurentPoly, int, Fraction]

GENERATOR_KINDS = ("E", "F", "Ktilde", "KtildeInv", "B", "Echeck")


def _accumulate(acc: Dict, key, value: RatFunc) -> None:
    current = acc.get(key)
    if current is None:
        if not value.is_zero():
            acc[key] = value
        return
    total = current + value
    if total.is_zero():
        del acc[key]
    else:
        acc[key] = total


def _is_scalar(value) -> bool:
    return isinstance(value, (RatFunc, LaurentPoly, int, Fraction)) and not isinstance(value, bool)


class UElement:
    """An element of U in normal form. Treat as immutable."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "QuantumGroup", terms: Dict[Term, RatFunc]):
        self.algebra = algebra
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, term: Term) -> RatFunc:
        return self.terms.get(term, ZERO)

    def scalar_part(self) -> Optional[RatFunc]:
        """The coefficient if self is a multiple of 1, else None."""
        if not self.terms:
            return ZERO
        if len(self.terms) == 1:
            (f, k, e), c = next(iter(self.terms.items()))
            if not f and not e and not any(k):
                return c
        return None

    def indices(self) -> set:
        """Generator indices occurring in words or torus exponents."""
        found = set()
        for f, k, e in self.terms:
            found.update(f)
            found.update(e)
            found.update(pos + 1 for pos, m in enumerate(k) if m)
        return found

    def scale(self, c: Scalar) -> "UElement":
        c = RatFunc.coerce(c)
        if c.is_zero():
            return UElement(self.algebra, {})
        if c.is_one():
            return self
        return UElement(self.algebra, {t: v * c for t, v in self.terms.items()})

    def __add__(self, other) -> "UElement":
        if _is_scalar(other):
            other = self.algebra.scalar(other)
        if not isinstance(other, UElement):
            return NotImplemented
        acc = dict(self.terms)
        for t, v in other.terms.items():
            _accumulate(acc, t, v)
        return UElement(self.algebra, acc)

    __radd__ = __add__

    def __neg__(self) -> "UElement":
        return UElement(self.algebra, {t: -v for t, v in self.terms.items()})

    def __sub__(self, other) -> "UElement":
        if _is_scalar(other):
            other = self.algebra.scalar(other)
        if not isinstance(other, UElement):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "UElement":
        return (-self) + other

    def __mul__(self, other) -> "UElement":
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, UElement):
            return NotImplemented
        return self.algebra.mul(self, other)

    def __rmul__(self, other) -> "UElement":
        if _is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "UElement":
        return self.algebra.power(self, n)

    def __eq__(self, other: object) -> bool:
        if _is_scalar(other):
            other = self.algebra.scalar(other)
        if not isinstance(other, UElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __str__(self) -> str:
        return self.algebra.format(self)

    def __repr__(self) -> str:
        return f"UElement({self})"


class TensorElement:
    """An element of U (x) U as a map (left term, right term) -> coefficient."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "QuantumGroup", terms: Dict[Tuple[Term, Term], RatFunc]):
        self.algebra = algebra
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, c: Scalar) -> "TensorElement":
        c = RatFunc.coerce(c)
        if c.is_zero():
            return TensorElement(self.algebra, {})
        return TensorElement(self.algebra, {t: v * c for t, v in self.terms.items()})

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if not isinstance(other, TensorElement):
            return NotImplemented
        acc = dict(self.terms)
        for t, v in other.terms.items():
            _accumulate(acc, t, v)
        return TensorElement(self.algebra, acc)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.algebra, {t: -v for t, v in self.terms.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def __mul__(self, other) -> "TensorElement":
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.algebra.tensor_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __str__(self) -> str:
        return self.algebra.format_tensor(self)

    def __repr__(self) -> str:
        return f"TensorElement({self})"


class QuantumGroup:
    """U for a Cartan datum, with split parameters and a Serre switch.

    All memo tables are filled with ``dict.setdefault`` so every reader sees
    the first stored value.

    Args:
        datum: The Cartan datum
        params: varsigma values and serre_mode (defaults to varsigma_i = q_i^-1)
        degree_cap: Maximum word length on either side
        store: Optional persistent store for ideal bases
    """

    def __init__(self, datum: CartanDatum, params: Optional[IParams] = None,
                 degree_cap: int = DEFAULT_DEGREE_CAP,
                 store: Optional[IdealStore] = None):
        params = params or default_params(datum)
        if len(params.varsigma) != datum.rank:
            raise ValidationError(
                f"expected {datum.rank} varsigma values, got {len(params.varsigma)}"
            )
        self.datum = datum
        self.params = params
        self.degree_cap = validate_nonnegative(degree_cap, "degree_cap")
        self.quotient = SerreQuotient(datum, params.serre_mode, degree_cap, store)
        self.rank = datum.rank
        self.zero_k: KExp = (0,) * self.rank
        self._commutator = {
            i: (datum.q_i(i) - datum.q_i(i).inverse()).inverse() for i in datum.index_set
        }
        self._straighten_memo: Dict[Tuple[Word, Word], tuple] = {}
        self._mul_memo: Dict[Tuple[Term, Term], tuple] = {}
        self._antipode_memo: Dict[object, UElement] = {}
        self._comult_memo: Dict[object, TensorElement] = {}
        self._memos: Dict[str, dict] = {}
        logger.debug(f"QuantumGroup for {datum.summary()} ({params.summary()}, cap {degree_cap})")

    @property
    def serre_mode(self) -> bool:
        return self.params.serre_mode

    def memo(self, name: str) -> dict:
        """A named memo table owned by this algebra (used by derived constructions)."""
        return self._memos.setdefault(name, {})

    def varsigma(self, i: int) -> RatFunc:
        return self.params.of(i)

    def q_i(self, i: int) -> RatFunc:
        return self.datum.q_i(i)

    # Construction
    def zero(self) -> UElement:
        return UElement(self, {})

    def one(self) -> UElement:
        return self.scalar(ONE)

    def scalar(self, c: Scalar) -> UElement:
        c = RatFunc.coerce(c)
        if c.is_zero():
            return self.zero()
        return UElement(self, {((), self.zero_k, ()): c})

    def unit_vector(self, i: int, m: int = 1) -> KExp:
        k = [0] * self.rank
        k[i - 1] = m
        return tuple(k)

    def torus(self, mu: Iterable[int]) -> UElement:
        """The monomial K~^mu."""
        mu = tuple(mu)
        if len(mu) != self.rank:
            raise ValidationError(f"torus exponent {mu} must have length {self.rank}")
        return UElement(self, {((), mu, ()): ONE})

    def k_power(self, i: int, n: int) -> UElement:
        """K~_i^n for any integer n."""
        self.datum.check_index(i)
        return self.torus(self.unit_vector(i, n))

    def term(self, term: Term, coeff: Scalar = ONE) -> UElement:
        """A single normal-form term as an element."""
        return UElement(self, {term: RatFunc.coerce(coeff)})

    def element(self, raw: Mapping[Term, Scalar]) -> UElement:
        """Build an element from terms whose words may not be reduced."""
        acc: Dict[Term, RatFunc] = {}
        for (f, k, e), c in raw.items():
            c = RatFunc.coerce(c)
            if c.is_zero():
                continue
            self._add_reduced(acc, tuple(f), tuple(k), tuple(e), c)
        return UElement(self, acc)

    def from_graded(self, v: GradedVector, side: str = "E") -> UElement:
        """Embed a graded vector of U+ (side E) or its mirror in U- (side F)."""
        if side == "E":
            return self.element({((), self.zero_k, w): c for w, c in v.coords.items()})
        if side == "F":
            return self.element({(w, self.zero_k, ()): c for w, c in v.coords.items()})
        raise ValidationError(f"side must be 'E' or 'F', got {side!r}")

    def gen(self, kind: str, i: int) -> UElement:
        """The generator E, F, Ktilde, KtildeInv, B or Echeck of index i."""
        self.datum.check_index(i)
        if kind == "E":
            return self.term(((), self.zero_k, (i,)))
        if kind == "F":
            return self.term(((i,), self.zero_k, ()))
        if kind == "Ktilde":
            return self.k_power(i, 1)
        if kind == "KtildeInv":
            return self.k_power(i, -1)
        if kind == "Echeck":
            return self.gen("E", i) * self.k_power(i, -1) * self.varsigma(i)
        if kind == "B":
            return self.gen("F", i) + self.gen("Echeck", i)
        raise ValidationError(f"unknown generator kind {kind!r}; expected one of {GENERATOR_KINDS}")

    def e_div(self, i: int, n: int) -> UElement:
        """Divided power E_i^(n) = E_i^n / [n]_i!."""
        self.datum.check_index(i)
        validate_nonnegative(n, "n")
        return self.element({((), self.zero_k, (i,) * n): qfact(n, self.datum.eps_of(i)).inverse()})

    def f_div(self, i: int, n: int) -> UElement:
        """Divided power F_i^(n) = F_i^n / [n]_i!."""
        self.datum.check_index(i)
        validate_nonnegative(n, "n")
        return self.element({((i,) * n, self.zero_k, ()): qfact(n, self.datum.eps_of(i)).inverse()})

    def echeck_div(self, i: int, n: int) -> UElement:
        """Divided power of E-check_i = varsigma_i E_i K~_i^-1."""
        validate_nonnegative(n, "n")
        table = self.memo("echeck_div")
        cached = table.get((i, n))
        if cached is not None:
            return cached
        value = self.power(self.gen("Echeck", i), n).scale(qfact(n, self.datum.eps_of(i)).inverse())
        return table.setdefault((i, n), value)

    def kbracket(self, i: int, a: int, n: int) -> UElement:
        """Product over t = 1..n of (q_i^(4a+4t-4) K~_i^-2 - 1)/(q_i^(4t) - 1)."""
        self.datum.check_index(i)
        validate_nonnegative(n, "n")
        eps = self.datum.eps_of(i)
        k_minus_two = self.unit_vector(i, -2)
        result = self.one()
        for t in range(1, n + 1):
            denominator = (qpow(4 * t * eps) - ONE).inverse()
            factor = UElement(self, {
                ((), k_minus_two, ()): qpow(eps * (4 * a + 4 * t - 4)) * denominator,
                ((), self.zero_k, ()): -denominator,
            })
            result = result * factor
        return result

    # Multiplication
    def _kpair(self, k: KExp, word: Word) -> int:
        """Exponent t with K~^k X_word = q^(+-t) X_word K~^k, i.e. sum of k_i (i.c) over letters c."""
        if not word or not any(k):
            return 0
        pairing = self.datum.pairing
        total = 0
        for c in word:
            col = c - 1
            for pos, m in enumerate(k):
                if m:
                    total += m * pairing[pos][col]
        return total

    def _add_reduced(self, acc: Dict[Term, RatFunc], f: Word, k: KExp, e: Word, c: RatFunc) -> None:
        f_forms = self.quotient.reduce_word(f)
        e_forms = self.quotient.reduce_word(e)
        for fw, cf in f_forms:
            for ew, ce in e_forms:
                _accumulate(acc, (fw, k, ew), c * cf * ce)

    def _straighten(self, e: Word, f: Word) -> tuple:
        """The product E_e F_f rewritten as pairs ((g, m, d), coeff), words unreduced."""
        key = (e, f)
        cached = self._straighten_memo.get(key)
        if cached is not None:
            return cached
        if not e or not f:
            result = (((f, self.zero_k, e), ONE),)
        else:
            a = e[0]
            acc: Dict[Term, RatFunc] = {}
            for (g, m, d), c in self._straighten(e[1:], f):
                # E_a K~^m = q^-(m, a) K~^m E_a
                shift = self._kpair(m, (a,))
                _accumulate(acc, (g, m, (a,) + d), c * qpow(-shift) if shift else c)
                for p, letter in enumerate(g):
                    if letter != a:
                        continue
                    tail = g[p + 1:]
                    rest = g[:p] + tail
                    t = self._kpair(self.unit_vector(a), tail)
                    for s in (1, -1):
                        m2 = m[:a - 1] + (m[a - 1] + s,) + m[a:]
                        coeff = c * self._commutator[a] * qpow(-s * t)
                        _accumulate(acc, (rest, m2, d), coeff if s == 1 else -coeff)
            result = tuple(acc.items())
        return self._straighten_memo.setdefault(key, result)

    def _mul_terms(self, t1: Term, t2: Term) -> tuple:
        """Normal form of the product of two basis terms."""
        key = (t1, t2)
        cached = self._mul_memo.get(key)
        if cached is not None:
            return cached
        f1, k1, e1 = t1
        f2, k2, e2 = t2
        acc: Dict[Term, RatFunc] = {}
        for (g, m, d), c in self._straighten(e1, f2):
            shift = self._kpair(k1, g) + self._kpair(k2, d)
            k = tuple(x + y + z for x, y, z in zip(k1, m, k2))
            self._add_reduced(acc, f1 + g, k, d + e2, c * qpow(-shift) if shift else c)
        return self._mul_memo.setdefault(key, tuple(acc.items()))

    def mul(self, a: UElement, b: UElement) -> UElement:
        """Product in normal form.

        Raises:
            DegreeCapExceeded: If a word grows past the degree cap
        """
        sa, sb = a.scalar_part(), b.scalar_part()
        if sa is not None:
            return b.scale(sa)
        if sb is not None:
            return a.scale(sb)
        acc: Dict[Term, RatFunc] = {}
        for t1, c1 in a.terms.items():
            for t2, c2 in b.terms.items():
                c12 = c1 * c2
                for t, c in self._mul_terms(t1, t2):
                    _accumulate(acc, t, c12 * c)
        return UElement(self, acc)

    def power(self, u: UElement, n: int) -> UElement:
        validate_nonnegative(n, "n")
        result = self.one()
        for _ in range(n):
            result = self.mul(result, u)
        return result

    def product(self, factors: Iterable[UElement]) -> UElement:
        result = self.one()
        for u in factors:
            result = self.mul(result, u)
        return result

    # Hopf structure
    def _antipode_letter(self, side: str, a: int) -> UElement:
        if side == "E":
            return -(self.k_power(a, -1) * self.gen("E", a))
        return -(self.gen("F", a) * self.k_power(a, 1))

    def _antipode_word(self, side: str, word: Word) -> UElement:
        key = (side, word)
        cached = self._antipode_memo.get(key)
        if cached is not None:
            return cached
        if not word:
            value = self.one()
        else:
            # S(x w) = S(w) S(x)
            value = self.mul(self._antipode_word(side, word[1:]), self._antipode_letter(side, word[0]))
        return self._antipode_memo.setdefault(key, value)

    def antipode_term(self, term: Term) -> UElement:
        cached = self._antipode_memo.get(term)
        if cached is not None:
            return cached
        f, k, e = term
        neg_k = tuple(-m for m in k)
        value = self.mul(self.mul(self._antipode_word("E", e), self.torus(neg_k)), self._antipode_word("F", f))
        return self._antipode_memo.setdefault(term, value)

    def antipode(self, u: UElement) -> UElement:
        """The antiautomorphism S with S(E_i) = -K~_i^-1 E_i, S(F_i) = -F_i K~_i, S(K~^mu) = K~^-mu."""
        result = self.zero()
        for term, c in u.terms.items():
            result = result + self.antipode_term(term).scale(c)
        return result

    def tensor(self, a: UElement, b: UElement) -> TensorElement:
        """The pure tensor a (x) b."""
        acc: Dict[Tuple[Term, Term], RatFunc] = {}
        for ta, ca in a.terms.items():
            for tb, cb in b.terms.items():
                _accumulate(acc, (ta, tb), ca * cb)
        return TensorElement(self, acc)

    def tensor_mul(self, x: TensorElement, y: TensorElement) -> TensorElement:
        """Componentwise product (a (x) b)(c (x) d) = ac (x) bd."""
        acc: Dict[Tuple[Term, Term], RatFunc] = {}
        for (l1, r1), c1 in x.terms.items():
            for (l2, r2), c2 in y.terms.items():
                c12 = c1 * c2
                right = self._mul_terms(r1, r2)
                for tl, cl in self._mul_terms(l1, l2):
                    c = c12 * cl
                    for tr, cr in right:
                        _accumulate(acc, (tl, tr), c * cr)
        return TensorElement(self, acc)

    def _comult_letter(self, side: str, a: int) -> TensorElement:
        one = self.one()
        if side == "E":
            return self.tensor(self.gen("E", a), one) + self.tensor(self.k_power(a, 1), self.gen("E", a))
        return self.tensor(self.gen("F", a), self.k_power(a, -1)) + self.tensor(one, self.gen("F", a))

    def _comult_word(self, side: str, word: Word) -> TensorElement:
        key = (side, word)
        cached = self._comult_memo.get(key)
        if cached is not None:
            return cached
        if not word:
            value = self.tensor(self.one(), self.one())
        else:
            value = self.tensor_mul(self._comult_letter(side, word[0]), self._comult_word(side, word[1:]))
        return self._comult_memo.setdefault(key, value)

    def comult_term(self, term: Term) -> TensorElement:
        cached = self._comult_memo.get(term)
        if cached is not None:
            return cached
        f, k, e = term
        torus = self.tensor(self.torus(k), self.torus(k))
        value = self.tensor_mul(self.tensor_mul(self._comult_word("F", f), torus), self._comult_word("E", e))
        return self._comult_memo.setdefault(term, value)

    def comult(self, u: UElement) -> TensorElement:
        """The algebra homomorphism Delta, extended over each term."""
        result = TensorElement(self, {})
        for term, c in u.terms.items():
            result = result + self.comult_term(term).scale(c)
        return result

    def counit(self, u: UElement) -> RatFunc:
        total = ZERO
        for (f, _, e), c in u.terms.items():
            if not f and not e:
                total = total + c
        return total

    def multiply_out(self, x: TensorElement) -> UElement:
        """The multiplication map a (x) b -> ab."""
        acc: Dict[Term, RatFunc] = {}
        for (tl, tr), c in x.terms.items():
            for t, v in self._mul_terms(tl, tr):
                _accumulate(acc, t, c * v)
        return UElement(self, acc)

    def map_tensor(self, x: TensorElement, left=None, right=None) -> TensorElement:
        """Apply linear maps on UElements to the two tensor factors."""
        result = TensorElement(self, {})
        for (tl, tr), c in x.terms.items():
            a = self.term(tl) if left is None else left(self.term(tl))
            b = self.term(tr) if right is None else right(self.term(tr))
            result = result + self.tensor(a, b).scale(c)
        return result

    def xi(self, lam: Scalar, u: UElement) -> UElement:
        """The rescaling automorphism E -> lam E, F -> lam^-1 F, K fixed."""
        lam = RatFunc.coerce(lam)
        if lam.is_zero():
            raise ValidationError("xi needs a nonzero scalar")
        powers: Dict[int, RatFunc] = {}
        acc = {}
        for (f, k, e), c in u.terms.items():
            d = len(e) - len(f)
            if d not in powers:
                powers[d] = lam ** d
            acc[(f, k, e)] = c * powers[d]
        return UElement(self, acc)

    # Equality and printing
    def is_zero(self, u: UElement) -> bool:
        return u.is_zero()

    def equal(self, a: UElement, b: UElement) -> bool:
        return a.terms == b.terms

    @staticmethod
    def _term_key(term: Term):
        f, k, e = term
        return (word_key(f), k, word_key(e))

    def format_term(self, term: Term) -> str:
        f, k, e = term
        parts = []
        if f:
            parts.append(format_word(f, "F"))
        if any(k):
            parts.append("K(" + ",".join(str(m) for m in k) + ")")
        if e:
            parts.append(format_word(e, "E"))
        return "*".join(parts) if parts else "1"

    def _format_coeffed(self, c: RatFunc, body: str) -> str:
        if c.is_one():
            return body
        if body == "1":
            return f"({format_ratfunc(c)})"
        return f"({format_ratfunc(c)})*{body}"

    def format(self, u: UElement) -> str:
        """Deterministic rendering: F-word deglex, then K exponent, then E-word deglex."""
        if u.is_zero():
            return "0"
        return " + ".join(
            self._format_coeffed(u.terms[t], self.format_term(t))
            for t in sorted(u.terms, key=self._term_key)
        )

    def format_tensor(self, x: TensorElement) -> str:
        if x.is_zero():
            return "0"
        keys = sorted(x.terms, key=lambda p: (self._term_key(p[0]), self._term_key(p[1])))
        return " + ".join(
            self._format_coeffed(x.terms[p], f"[{self.format_term(p[0])} (x) {self.format_term(p[1])}]")
            for p in keys
        )
