"""
ı-divided powers of B_i = F_i + varsigma_i E_i K~_i^-1 in both parities.

Besides the defining products, this module assembles the closed even-parity
expansion, the right tensor components T_{i,n,r} of the coproduct, and the
checks comparing them with the engine's own Delta and S.
"""

import logging
import time
from dataclasses import dataclass
from typing import Dict

from helpers.reliability import ValidationError, validate_nonnegative, validate_parity
from domains.quantum.cartan import IParams
from domains.quantum.qfield import RatFunc, qint, qfact, qpow
from domains.quantum.uq import QuantumGroup, TensorElement, UElement
from .report import Check, VerificationReport, from_checks

logger = logging.getLogger(__name__)


def parity_of(n: int) -> int:
    return n % 2


@dataclass(frozen=True)
class IDividedSpec:
    """Index, degree and parity of an ı-divided power."""

    i: int
    n: int
    parity: int

    def __post_init__(self):
        validate_nonnegative(self.n, "n")
        validate_parity(self.parity)

    def label(self) -> str:
        return f"B_{self.i}^({self.n})[{self.parity}]"


def _recursion_constant(U: QuantumGroup, i: int, n: int, parity: int, j: int) -> RatFunc:
    """q_i varsigma_i [m]_i^2 for the j-th quadratic factor."""
    if parity == 1:
        m = 2 * j - 1
    elif n % 2:
        m = 2 * j
    else:
        m = 2 * j - 2
    return U.q_i(i) * U.varsigma(i) * qint(m, U.datum.eps_of(i)) ** 2


def idiv(U: QuantumGroup, spec: IDividedSpec) -> UElement:
    """The ı-divided power B_i^(n) of the given parity, memoized per algebra.

    Raises:
        DegreeCapExceeded: If n is above the degree cap
    """
    U.datum.check_index(spec.i)
    table = U.memo("idiv")
    key = (spec.i, spec.n, spec.parity)
    cached = table.get(key)
    if cached is not None:
        return cached

    i, n, parity = key
    B = U.gen("B", i)
    B2 = B * B
    value = B if n % 2 else U.one()
    for j in range(1, n // 2 + 1):
        value = value * (B2 - _recursion_constant(U, i, n, parity, j))
    value = value.scale(qfact(n, U.datum.eps_of(i)).inverse())
    logger.debug(f"{spec.label()} has {len(value.terms)} terms")
    return table.setdefault(key, value)


def idiv_of(U: QuantumGroup, i: int, n: int, parity: int) -> UElement:
    return idiv(U, IDividedSpec(i, n, parity))


def idiv_closed_even(U: QuantumGroup, i: int, n: int) -> UElement:
    """Even-parity ı-divided power from its closed triangular expansion.

    Sum over a + 2c <= n of k * F^(n-2c-a) [h; 1-c+floor((n-1)/2); c] Echeck^(a),
    k = (-1)^c q_i^(3c + a(n-2c-a)) (q_i varsigma_i)^c for even n and with c in
    place of 3c for odd n.
    """
    U.datum.check_index(i)
    validate_nonnegative(n, "n")
    eps = U.datum.eps_of(i)
    qs = U.q_i(i) * U.varsigma(i)
    shift = (n - 1) // 2
    total = U.zero()
    for c in range(n // 2 + 1):
        bracket = U.kbracket(i, 1 - c + shift, c)
        for a in range(n - 2 * c + 1):
            exponent = (3 * c if n % 2 == 0 else c) + a * (n - 2 * c - a)
            k = qpow(eps * exponent) * qs ** c
            if c % 2:
                k = -k
            total = total + (U.f_div(i, n - 2 * c - a) * bracket * U.echeck_div(i, a)).scale(k)
    return total


def t_component(U: QuantumGroup, i: int, n: int, r: int) -> UElement:
    """Right tensor component T_{i,n,r} of Delta(B_i^(n)) of parity 1-n."""
    U.datum.check_index(i)
    validate_nonnegative(n, "n")
    if not 0 <= r <= n:
        raise ValidationError(f"t_component needs 0 <= r <= n, got r={r}, n={n}")
    table = U.memo("t_component")
    cached = table.get((i, n, r))
    if cached is not None:
        return cached
    eps = U.datum.eps_of(i)
    qs = U.q_i(i) * U.varsigma(i)
    torus = U.k_power(i, r - n)
    total = U.zero()
    for c in range(r // 2 + 1):
        bracket = U.kbracket(i, -((r - 1) // 2), c)
        for a in range(r - 2 * c + 1):
            exponent = c * (2 * c + 1) + (r - 2 * c) * (r - n) - a * (r - 2 * c - a)
            t = qpow(eps * exponent) * qs ** c
            piece = U.echeck_div(i, a) * bracket * torus * U.f_div(i, r - 2 * c - a)
            total = total + piece.scale(t)
    return table.setdefault((i, n, r), total)


def comult_components_residual(U: QuantumGroup, i: int, n: int) -> TensorElement:
    """Delta(B^(n)) minus the sum over r+s=n of B^(s) (x) T_{i,n,r}."""
    parity = parity_of(1 - n)
    residual = U.comult(idiv_of(U, i, n, parity))
    for r in range(n + 1):
        residual = residual - U.tensor(idiv_of(U, i, n - r, parity), t_component(U, i, n, r))
    return residual


def verify_comult_components(U: QuantumGroup, i: int, n: int) -> bool:
    return comult_components_residual(U, i, n).is_zero()


def comult_antipode_residual(U: QuantumGroup, i: int, n: int) -> TensorElement:
    """Delta(B^(n)) minus sum (-1)^r B^(s) (x) K~_i^-n xi_{q_i^(n+1)}(S(B^(r) even))."""
    parity = parity_of(1 - n)
    lam = U.q_i(i) ** (n + 1)
    k_inv = U.k_power(i, -n)
    residual = U.comult(idiv_of(U, i, n, parity))
    for r in range(n + 1):
        right = k_inv * U.xi(lam, U.antipode(idiv_of(U, i, r, 0)))
        term = U.tensor(idiv_of(U, i, n - r, parity), right)
        residual = residual - term if r % 2 == 0 else residual + term
    return residual


def verify_comult_antipode_form(U: QuantumGroup, i: int, n: int) -> bool:
    return comult_antipode_residual(U, i, n).is_zero()


def closed_form_residual(U: QuantumGroup, i: int, n: int) -> UElement:
    return idiv_closed_even(U, i, n) - idiv_of(U, i, n, 0)


def antipode_formula_residuals(U: QuantumGroup, i: int, n: int, a: int) -> Dict[str, UElement]:
    """Residuals of the closed antipode formulas for F^(n), Echeck^(n) and the K-bracket."""
    eps = U.datum.eps_of(i)
    sign = -1 if n % 2 else 1
    k_n = U.k_power(i, n)
    f_n = U.f_div(i, n)
    e_n = U.echeck_div(i, n)
    expected_f = (k_n * f_n).scale(qpow(eps * n * (n + 1)) * sign)
    expected_e = (e_n * k_n).scale(qpow(eps * n * (n - 1)) * sign)
    expected_h = (U.k_power(i, 2 * n) * U.kbracket(i, 1 - n - a, n)).scale(
        qpow(eps * 2 * n * (n + 2 * a - 1)) * sign
    )
    return {
        "antipode_F": U.antipode(f_n) - expected_f,
        "antipode_Echeck": U.antipode(e_n) - expected_e,
        "antipode_bracket": U.antipode(U.kbracket(i, a, n)) - expected_h,
    }


def with_varsigma(U: QuantumGroup, i: int, value: RatFunc) -> QuantumGroup:
    """A sibling algebra on the same datum with varsigma_i replaced."""
    values = list(U.params.varsigma)
    values[i - 1] = RatFunc.coerce(value)
    params = IParams(tuple(values), U.params.serre_mode)
    return QuantumGroup(U.datum, params, U.degree_cap, U.quotient.store)


def verify_rescaling(U: QuantumGroup, i: int, n: int, parity: int, z: RatFunc) -> bool:
    """xi_z of the power built with varsigma_i = q_i^-1 equals z^-n times the configured one.

    Raises:
        ValidationError: If z^2 differs from q_i varsigma_i
    """
    z = RatFunc.coerce(z)
    if z * z != U.q_i(i) * U.varsigma(i):
        raise ValidationError("rescaling needs z^2 = q_i varsigma_i")
    reference = with_varsigma(U, i, U.q_i(i).inverse())
    lhs = reference.xi(z, idiv_of(reference, i, n, parity))
    rhs = idiv_of(U, i, n, parity).scale(z ** (-n))
    return lhs.terms == rhs.terms


def comult_report(U: QuantumGroup, i: int, n: int, case: str = "comult-formula") -> VerificationReport:
    """Both coproduct forms of B_i^(n) with parity 1-n."""
    started = time.perf_counter()
    components = comult_components_residual(U, i, n)
    antipode_form = comult_antipode_residual(U, i, n)
    checks = {
        "components": Check(components.is_zero(), str(components)),
        "antipode_form": Check(antipode_form.is_zero(), str(antipode_form)),
    }
    elapsed = (time.perf_counter() - started) * 1000
    return from_checks(case, f"comult(i={i},n={n})", U.datum.summary(), U.params.summary(), checks, elapsed)


def antipode_report(U: QuantumGroup, i: int, n: int, a: int,
                    case: str = "antipode-formulas") -> VerificationReport:
    started = time.perf_counter()
    checks = {
        name: Check(res.is_zero(), str(res))
        for name, res in antipode_formula_residuals(U, i, n, a).items()
    }
    elapsed = (time.perf_counter() - started) * 1000
    return from_checks(case, f"antipode(i={i},n={n},a={a})", U.datum.summary(), U.params.summary(),
                       checks, elapsed)
