"""
Matrix models of a rank-one subalgebra U_i.

L(n) has basis v_k = F_i^(k) v_0, k = 0..n, with K~_i v_k = q_i^(n-2k) v_k.
Tensor products act through the coproduct. Every Rep is checked against the
defining relations when it is built.
"""

import logging
import time
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from helpers.reliability import ValidationError, validate_before_execute, validate_nonnegative
from domains.quantum.qfield import ONE, ZERO, LaurentPoly, RatFunc, format_ratfunc, qfact, qint, qpow
from domains.quantum.uq import QuantumGroup, UElement
from .idivided import idiv_of, parity_of
from .report import Check, VerificationReport, from_checks

logger = logging.getLogger(__name__)


class Matrix:
    """Dense matrix over Q(q); rows are tuples of RatFunc."""

    __slots__ = ("rows", "n_rows", "n_cols")

    def __init__(self, rows: Sequence[Sequence[RatFunc]]):
        self.rows = tuple(tuple(RatFunc.coerce(x) for x in row) for row in rows)
        self.n_rows = len(self.rows)
        self.n_cols = len(self.rows[0]) if self.rows else 0

    @classmethod
    def zeros(cls, n: int, m: Optional[int] = None) -> "Matrix":
        return cls([[ZERO] * (n if m is None else m) for _ in range(n)])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.diag([ONE] * n)

    @classmethod
    def diag(cls, values: Sequence[RatFunc]) -> "Matrix":
        n = len(values)
        return cls([[values[r] if r == c else ZERO for c in range(n)] for r in range(n)])

    def _check_shape(self, other: "Matrix") -> None:
        if (self.n_rows, self.n_cols) != (other.n_rows, other.n_cols):
            raise ValidationError(
                f"shape mismatch: {self.n_rows}x{self.n_cols} vs {other.n_rows}x{other.n_cols}"
            )

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        return Matrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        return Matrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)])

    def scale(self, c) -> "Matrix":
        c = RatFunc.coerce(c)
        return Matrix([[x * c for x in row] for row in self.rows])

    def __mul__(self, other) -> "Matrix":
        if not isinstance(other, Matrix):
            return self.scale(other)
        if self.n_cols != other.n_rows:
            raise ValidationError(f"cannot multiply {self.n_rows}x{self.n_cols} by {other.n_rows}x{other.n_cols}")
        out = []
        for row in self.rows:
            new_row = []
            for c in range(other.n_cols):
                total = ZERO
                for k, x in enumerate(row):
                    if x.is_zero():
                        continue
                    y = other.rows[k][c]
                    if not y.is_zero():
                        total = total + x * y
                new_row.append(total)
            out.append(new_row)
        return Matrix(out)

    def power(self, n: int) -> "Matrix":
        result = Matrix.identity(self.n_rows)
        for _ in range(n):
            result = result * self
        return result

    def kron(self, other: "Matrix") -> "Matrix":
        rows = []
        for r1 in self.rows:
            for r2 in other.rows:
                rows.append([a * b for a in r1 for b in r2])
        return Matrix(rows)

    def column(self, c: int) -> Tuple[RatFunc, ...]:
        return tuple(row[c] for row in self.rows)

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.rows for x in row)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    __hash__ = None

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(format_ratfunc(x) for x in row) for row in self.rows) + "]"


@dataclass(frozen=True)
class Rep:
    """A finite-dimensional U_i-module given by the images of the generators.

    ``weights[k]`` is the exponent w with K~_i v_k = q_i^w v_k; the character
    records the multiplicity of each weight.
    """

    index: int
    eps: int
    E: Matrix
    F: Matrix
    K: Matrix
    Kinv: Matrix
    weights: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def character(self) -> LaurentPoly:
        terms: Dict[int, int] = {}
        for w in self.weights:
            terms[w] = terms.get(w, 0) + 1
        return LaurentPoly(terms)

    def generator(self, kind: str) -> Matrix:
        return {"E": self.E, "F": self.F, "Ktilde": self.K, "KtildeInv": self.Kinv}[kind]


def relation_residuals(rep: Rep) -> Dict[str, Matrix]:
    """Residuals of the rank-one defining relations on a module."""
    q_i = qpow(rep.eps)
    ident = Matrix.identity(rep.dim)
    commutator = (rep.K - rep.Kinv).scale((q_i - q_i.inverse()).inverse())
    return {
        "K_Kinv": rep.K * rep.Kinv - ident,
        "Kinv_K": rep.Kinv * rep.K - ident,
        "K_E": rep.K * rep.E * rep.Kinv - rep.E.scale(q_i ** 2),
        "K_F": rep.K * rep.F * rep.Kinv - rep.F.scale(q_i ** -2),
        "E_F": rep.E * rep.F - rep.F * rep.E - commutator,
    }


def validate_rep(rep: Rep) -> Rep:
    """Raise ValidationError unless the matrices satisfy the defining relations."""
    for name, residual in relation_residuals(rep).items():
        if not residual.is_zero():
            raise ValidationError(f"module for index {rep.index} violates relation {name}: {residual}")
    expected_k = Matrix.diag([qpow(rep.eps * w) for w in rep.weights])
    if rep.K != expected_k:
        raise ValidationError(f"K~ is not diagonal with the recorded weights {rep.weights}")
    return rep


def module_L(i: int, n: int, eps: int = 1) -> Rep:
    """The simple module L(n) of highest weight q_i^n.

    Args:
        i: Generator index of the rank-one subalgebra
        n: Highest weight
        eps: The symmetrizer eps_i, so q_i = q^eps

    Returns:
        Rep: validated module with basis v_0..v_n
    """
    validate_nonnegative(n, "n")
    dim = n + 1
    weights = tuple(n - 2 * k for k in range(dim))
    E = [[ZERO] * dim for _ in range(dim)]
    F = [[ZERO] * dim for _ in range(dim)]
    for k in range(dim - 1):
        F[k + 1][k] = qint(k + 1, eps)
        E[k][k + 1] = qint(n - k, eps)
    rep = Rep(
        index=i,
        eps=eps,
        E=Matrix(E),
        F=Matrix(F),
        K=Matrix.diag([qpow(eps * w) for w in weights]),
        Kinv=Matrix.diag([qpow(-eps * w) for w in weights]),
        weights=weights,
    )
    validate_rep(rep)
    if rep.E.column(0) != (ZERO,) * dim:
        raise ValidationError("E does not kill the highest weight vector")
    for k in range(dim):
        image = rep.F.power(k).scale(qfact(k, eps).inverse()).column(0)
        if image != tuple(ONE if r == k else ZERO for r in range(dim)):
            raise ValidationError(f"v_{k} is not F^({k}) v_0")
    return rep


def _check_same_subalgebra(a: Rep, b: Rep) -> None:
    if a.index != b.index or a.eps != b.eps:
        raise ValidationError(f"cannot tensor modules for indices {a.index} and {b.index}")


@validate_before_execute(_check_same_subalgebra)
def tensor(a: Rep, b: Rep) -> Rep:
    """a (x) b with the action through Delta; characters multiply."""
    ident_a = Matrix.identity(a.dim)
    ident_b = Matrix.identity(b.dim)
    rep = Rep(
        index=a.index,
        eps=a.eps,
        E=a.E.kron(ident_b) + a.K.kron(b.E),
        F=a.F.kron(b.Kinv) + ident_a.kron(b.F),
        K=a.K.kron(b.K),
        Kinv=a.Kinv.kron(b.Kinv),
        weights=tuple(x + y for x in a.weights for y in b.weights),
    )
    return validate_rep(rep)


def tensor_all(reps: Iterable[Rep], i: int, eps: int = 1) -> Rep:
    result = module_L(i, 0, eps)
    first = True
    for rep in reps:
        result = rep if first else tensor(result, rep)
        first = False
    return result


def tensor_power(rep: Rep, k: int) -> Rep:
    validate_nonnegative(k, "k")
    return tensor_all([rep] * k, rep.index, rep.eps)


def act(u: UElement, rep: Rep) -> Matrix:
    """Matrix of u on the module; u may only involve the module's index.

    Raises:
        ValidationError: If u contains a generator of another index
    """
    foreign = u.indices() - {rep.index}
    if foreign:
        raise ValidationError(f"element involves indices {sorted(foreign)} outside U_{rep.index}")
    pos = rep.index - 1
    powers: Dict[Tuple[str, int], Matrix] = {}

    def power(kind: str, m: int) -> Matrix:
        if (kind, m) not in powers:
            powers[(kind, m)] = rep.generator(kind).power(m)
        return powers[(kind, m)]

    result = Matrix.zeros(rep.dim)
    for (f, k, e), c in u.terms.items():
        m = k[pos]
        torus = power("Ktilde", m) if m >= 0 else power("KtildeInv", -m)
        result = result + (power("F", len(f)) * torus * power("E", len(e))).scale(c)
    return result


def clebsch_gordan(rep: Rep) -> List[int]:
    """Highest weights of the simple summands, read off the character."""
    remaining: Dict[int, int] = {}
    for w in rep.weights:
        remaining[w] = remaining.get(w, 0) + 1
    summands = []
    while any(remaining.values()):
        top = max(w for w, m in remaining.items() if m)
        summands.append(top)
        for w in range(top, -top - 1, -2):
            remaining[w] = remaining.get(w, 0) - 1
            if remaining[w] < 0:
                raise ValidationError(f"weights {rep.weights} are not a character of a module")
    return summands


def rescale_matrix(rep: Rep, z) -> Matrix:
    """Diagonal map v -> z^((w - top)/2) v; on L(n) this is v_k -> z^-k v_k."""
    z = RatFunc.coerce(z)
    top = max(rep.weights)
    return Matrix.diag([z ** ((w - top) // 2) for w in rep.weights])


def verify_rescaling_intertwines(U: QuantumGroup, i: int, n: int, z,
                                 u: Optional[UElement] = None) -> bool:
    """The rescaling map satisfies Z act(u) = act(xi_z(u)) Z for u or for every generator."""
    rep = module_L(i, n, U.datum.eps_of(i))
    Z = rescale_matrix(rep, z)
    samples = [u] if u is not None else [U.gen(kind, i) for kind in ("E", "F", "Ktilde", "KtildeInv", "B")]
    return all(Z * act(x, rep) == act(U.xi(z, x), rep) * Z for x in samples)


def _annihilation_report(U: QuantumGroup, i: int, degree: int, parity: int, rep: Rep,
                         case: str, claim: str, started: float) -> VerificationReport:
    matrix = act(idiv_of(U, i, degree, parity), rep)
    elapsed = (time.perf_counter() - started) * 1000
    return from_checks(case, claim, U.datum.summary(), U.params.summary(),
                       {"annihilates": Check(matrix.is_zero(), str(matrix))}, elapsed)


def verify_annihilation(U: QuantumGroup, i: int, n: int, k: int = 1,
                        case: str = "annihilation") -> VerificationReport:
    """B_i^(kn+1) of parity kn kills L(n)^(x)k."""
    U.datum.check_index(i)
    validate_nonnegative(n, "n")
    started = time.perf_counter()
    U.quotient.check_cap(k * n + 1)
    rep = tensor_power(module_L(i, n, U.datum.eps_of(i)), k)
    return _annihilation_report(U, i, k * n + 1, parity_of(k * n), rep, case,
                                f"annihilation(i={i},n={n},k={k})", started)


def verify_mixed_annihilation(U: QuantumGroup, i: int, weights: Sequence[int],
                              case: str = "tensor-annihilation") -> VerificationReport:
    """B_i^(n+1) of parity n kills L(w_1) (x) ... (x) L(w_k), n = sum of the w_t."""
    U.datum.check_index(i)
    if not weights:
        raise ValidationError("need at least one weight")
    n = sum(validate_nonnegative(w, "weight") for w in weights)
    started = time.perf_counter()
    U.quotient.check_cap(n + 1)
    eps = U.datum.eps_of(i)
    rep = tensor_all((module_L(i, w, eps) for w in weights), i, eps)
    label = ",".join(str(w) for w in weights)
    return _annihilation_report(U, i, n + 1, parity_of(n), rep, case,
                                f"mixed-annihilation(i={i},weights=[{label}])", started)


def verify_annihilation_below(U: QuantumGroup, i: int, n: int,
                              case: str = "annihilation") -> VerificationReport:
    """B_i^(n+1) of parity n kills every L(m) with m <= n and m = n mod 2."""
    U.datum.check_index(i)
    validate_nonnegative(n, "n")
    started = time.perf_counter()
    eps = U.datum.eps_of(i)
    element = idiv_of(U, i, n + 1, parity_of(n))
    checks = {}
    for m in range(n, -1, -2):
        matrix = act(element, module_L(i, m, eps))
        checks[f"L({m})"] = Check(matrix.is_zero(), str(matrix))
    elapsed = (time.perf_counter() - started) * 1000
    return from_checks(case, f"annihilation-below(i={i},n={n})", U.datum.summary(),
                       U.params.summary(), checks, elapsed)
