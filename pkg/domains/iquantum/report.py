"""
Verification reports shared by the verifiers and the CLI.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Mapping, Optional, Sequence

from helpers.reliability import ValidationError

logger = logging.getLogger(__name__)

OUTCOMES = ("verified", "refuted", "errored")

SPLIT_NOTE = "split: every index treated as a split site"


@dataclass(frozen=True)
class Check:
    """One named sub-check; ``residual`` is the printed witness when it fails."""

    passed: bool
    residual: str = ""


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one verification case.

    ``witness`` is None exactly when the outcome is verified.
    """

    case: str
    claim: str
    datum: str
    params: str
    outcome: str
    witness: Optional[str] = None
    checks: Mapping[str, Check] = field(default_factory=dict)
    elapsed_ms: float = 0.0

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValidationError(f"unknown outcome {self.outcome!r}")
        if (self.outcome == "verified") != (self.witness is None):
            raise ValidationError("a report carries a witness exactly when it is not verified")

    @property
    def verified(self) -> bool:
        return self.outcome == "verified"

    def restrict(self, case: str, claim: str, names: Sequence[str]) -> "VerificationReport":
        """A report whose outcome only depends on the named checks."""
        missing = [n for n in names if n not in self.checks]
        if missing:
            raise ValidationError(f"report for {self.claim} has no checks {missing}")
        if self.outcome == "errored":
            return replace(self, case=case, claim=claim)
        checks = {n: self.checks[n] for n in names}
        return from_checks(case, claim, self.datum, self.params, checks, self.elapsed_ms)

    def to_record(self) -> Dict[str, object]:
        """The line record written by the CLI."""
        return {
            "case": self.case,
            "claim": self.claim,
            "params": f"{self.datum}; {self.params}; {SPLIT_NOTE}",
            "outcome": self.outcome,
            "witness": self.witness,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def from_checks(case: str, claim: str, datum: str, params: str,
                checks: Mapping[str, Check], elapsed_ms: float = 0.0) -> VerificationReport:
    """Verified iff every check passed; otherwise the failing residuals form the witness."""
    failing = [(name, c) for name, c in checks.items() if not c.passed]
    witness = None
    if failing:
        witness = "; ".join(f"{name}: {c.residual}" for name, c in failing)
    report = VerificationReport(
        case=case,
        claim=claim,
        datum=datum,
        params=params,
        outcome="refuted" if failing else "verified",
        witness=witness,
        checks=dict(checks),
        elapsed_ms=elapsed_ms,
    )
    if failing:
        logger.warning(f"{claim} refuted on {[name for name, _ in failing]}")
    return report


def errored(case: str, claim: str, datum: str, params: str,
            error: BaseException, elapsed_ms: float = 0.0) -> VerificationReport:
    logger.error(f"Case {case} ({claim}) errored: {error}")
    return VerificationReport(
        case=case,
        claim=claim,
        datum=datum,
        params=params,
        outcome="errored",
        witness=f"{type(error).__name__}: {error}",
        elapsed_ms=elapsed_ms,
    )


def combine(case: str, claim: str, reports: Sequence[VerificationReport],
            datum: str = "", params: str = "") -> VerificationReport:
    """Fold the reports of several instances into one case record."""
    if reports:
        datum = datum or reports[0].datum
        params = params or reports[0].params
    elapsed = sum(r.elapsed_ms for r in reports)
    checks = {}
    for r in reports:
        for name, c in r.checks.items():
            checks[f"{r.claim}/{name}"] = c
    bad = [r for r in reports if not r.verified]
    if not bad:
        return VerificationReport(case, claim, datum, params, "verified", None, checks, elapsed)
    outcome = "errored" if any(r.outcome == "errored" for r in bad) else "refuted"
    witness = " | ".join(f"{r.claim}: {r.witness}" for r in bad)
    return VerificationReport(case, claim, datum, params, outcome, witness, checks, elapsed)
