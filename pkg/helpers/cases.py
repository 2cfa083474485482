"""
The case catalog: which instances each case id runs, and the batch runner.
"""

import logging
import time
from dataclasses import replace
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from domains.iquantum import adjoint, idivided, repmod
from domains.iquantum.report import VerificationReport, combine, errored
from domains.quantum.qfield import format_ratfunc
from domains.quantum.uq import QuantumGroup
from .config_loader import CASE_NAMES, RunConfig, resolve_case
from .db_helper import IdealBasisCache
from .reliability import IQuantumError, log_execution_time

logger = logging.getLogger(__name__)

MAX_COMULT_DEGREE = 5
MAX_ANTIPODE_DEGREE = 5
MAX_ADJOINT_DEGREE = 3
MAX_ANNIHILATION_WEIGHT = 6
BRACKET_SHIFTS = range(-2, 3)
TENSOR_POWERS = ((1, 2), (1, 3), (2, 2))
MIXED_WEIGHTS = ((1, 1), (1, 2))

# One algebra per configuration per process, so memo tables are shared by cases.
_ALGEBRAS: Dict[tuple, QuantumGroup] = {}


def _config_key(config: RunConfig) -> tuple:
    params = tuple(sorted((i, format_ratfunc(v)) for i, v in config.varsigma.items()))
    return (config.rows, params, config.serre_mode, config.degree_cap)


def algebra_for(config: RunConfig) -> QuantumGroup:
    """The (process-local, shared) algebra of a configuration."""
    key = _config_key(config)
    algebra = _ALGEBRAS.get(key)
    if algebra is None:
        datum = config.datum()
        algebra = QuantumGroup(datum, config.params(), config.degree_cap, IdealBasisCache.from_env())
        algebra = _ALGEBRAS.setdefault(key, algebra)
    return algebra


def ordered_pairs(U: QuantumGroup) -> List[Tuple[int, int]]:
    return [(i, j) for i in U.datum.index_set for j in U.datum.index_set if i != j]


def _family_report(U: QuantumGroup, i: int, js: Sequence[int]) -> VerificationReport:
    """Relation-family report, shared between the relation, bridge and equivalence cases."""
    table = U.memo("family_reports")
    key = (i, tuple(js))
    if key not in table:
        label = ",".join(str(j) for j in js)
        table[key] = adjoint.verify_relation_family(U, i, js, "relation", f"relation(i={i},js=[{label}])")
    return table[key]


def _serre_lusztig_instances(U: QuantumGroup) -> List[Tuple[int, int, int]]:
    """(i, j, n) with n = 2 for a_ij in {0, -1, -2} and n = 3 for a_ij in {0, -1}."""
    out = []
    for i, j in ordered_pairs(U):
        a = U.datum.a(i, j)
        for n in (2, 3):
            if (n == 2 and a >= -2) or (n == 3 and a >= -1):
                if 1 - n * a <= U.degree_cap:
                    out.append((i, j, n))
    return out


def _mixed_instances(U: QuantumGroup) -> List[Tuple[int, Tuple[int, ...]]]:
    """Each node with its neighbours when it has two or more; rank two uses [j, j] for a_ij = -1."""
    out = []
    for i in U.datum.index_set:
        neighbours = tuple(j for j in U.datum.index_set if j != i and U.datum.a(i, j))
        if len(neighbours) >= 2:
            out.append((i, neighbours))
        elif U.rank == 2:
            for j in neighbours:
                if U.datum.a(i, j) == -1:
                    out.append((i, (j, j)))
    return [(i, js) for i, js in out if 1 - sum(U.datum.a(i, j) for j in js) <= U.degree_cap]


def _adjoint_samples(U: QuantumGroup, j: int):
    k_j = U.k_power(j, 1)
    b_j = U.gen("B", j)
    return [
        ("E_j", U.gen("E", j)),
        ("F_jK_j", U.gen("F", j) * k_j),
        ("B_jK_j", b_j * k_j),
        ("B_j^2K_j^2", b_j * b_j * k_j * k_j),
    ]


def _antipode_formulas(U: QuantumGroup) -> List[VerificationReport]:
    return [
        idivided.antipode_report(U, i, n, a)
        for i in U.datum.index_set
        for n in range(min(MAX_ANTIPODE_DEGREE, U.degree_cap) + 1)
        for a in BRACKET_SHIFTS
    ]


def _comult_formula(U: QuantumGroup) -> List[VerificationReport]:
    return [
        idivided.comult_report(U, i, n)
        for i in U.datum.index_set
        for n in range(min(MAX_COMULT_DEGREE, U.degree_cap) + 1)
    ]


def _adjoint_formula(U: QuantumGroup) -> List[VerificationReport]:
    reports = []
    for i in U.datum.index_set:
        targets = [j for j in U.datum.index_set if j != i] or [i]
        for j in targets:
            for label, u in _adjoint_samples(U, j):
                for n in range(MAX_ADJOINT_DEGREE + 1):
                    reports.append(adjoint.adjoint_formula_report(U, i, n, u, label.replace("j", str(j))))
    return reports


def _classical_serre_adjoint(U: QuantumGroup) -> List[VerificationReport]:
    return [adjoint.verify_classical_serre_adjoint(U, i, j) for i, j in ordered_pairs(U)]


def _restricted(names: Sequence[str]) -> Callable[[QuantumGroup, str], List[VerificationReport]]:
    def run(U: QuantumGroup, case: str) -> List[VerificationReport]:
        return [
            _family_report(U, i, [j]).restrict(case, f"{case}(i={i},j={j})", names)
            for i, j in ordered_pairs(U)
        ]
    return run


def _restricted_lusztig(names: Sequence[str]) -> Callable[[QuantumGroup, str], List[VerificationReport]]:
    def run(U: QuantumGroup, case: str) -> List[VerificationReport]:
        return [
            _family_report(U, i, [j] * n).restrict(case, f"{case}(i={i},j={j},n={n})", names)
            for i, j, n in _serre_lusztig_instances(U)
        ]
    return run


def _mixed_serre(U: QuantumGroup, case: str) -> List[VerificationReport]:
    reports = []
    for i, js in _mixed_instances(U):
        label = ",".join(str(j) for j in js)
        reports.append(_family_report(U, i, js).restrict(case, f"{case}(i={i},js=[{label}])", ["relation"]))
    return reports


def _annihilation(U: QuantumGroup) -> List[VerificationReport]:
    reports = []
    for i in U.datum.index_set:
        for n in range(min(MAX_ANNIHILATION_WEIGHT, U.degree_cap - 1) + 1):
            reports.append(repmod.verify_annihilation(U, i, n, 1))
        reports.append(repmod.verify_annihilation_below(U, i, min(4, U.degree_cap - 1)))
    return reports


def _tensor_annihilation(U: QuantumGroup) -> List[VerificationReport]:
    reports = []
    for i in U.datum.index_set:
        for n, k in TENSOR_POWERS:
            reports.append(repmod.verify_annihilation(U, i, n, k, case="tensor-annihilation"))
        for weights in MIXED_WEIGHTS:
            reports.append(repmod.verify_mixed_annihilation(U, i, weights))
    return reports


# Keyed by case id; runners get the descriptive name (CASE_NAMES) for instance labels.
CATALOG: Dict[str, Tuple[str, Callable[[QuantumGroup, str], List[VerificationReport]]]] = {
    "lemma31": ("antipode of F^(n), Echeck^(n) and K-brackets", lambda U, c: _antipode_formulas(U)),
    "thm32": ("coproduct of ı-divided powers, both forms", lambda U, c: _comult_formula(U)),
    "prop33": ("adjoint action of ı-divided powers", lambda U, c: _adjoint_formula(U)),
    "eq11": ("adjoint form of the q-Serre relation", lambda U, c: _classical_serre_adjoint(U)),
    "prop34": ("bridge between the two ı Serre forms", _restricted(["bridge"])),
    "thm35": ("ı Serre forms vanish together", _restricted(["equivalence"])),
    "prop36": ("bridge for minimal-degree Serre-Lusztig", _restricted_lusztig(["bridge"])),
    "thm37": ("Serre-Lusztig forms vanish together", _restricted_lusztig(["equivalence"])),
    "thm42": ("ı Serre relation", _restricted(["relation"])),
    "lemma41": ("B^(n+1) of parity n kills L(n)", lambda U, c: _annihilation(U)),
    "lemma43": ("B^(kn+1) of parity kn kills L(n)^k", lambda U, c: _tensor_annihilation(U)),
    "thm44": ("minimal-degree Serre-Lusztig relations", _restricted_lusztig(["relation"])),
    "thm45": ("mixed relations with several j", _mixed_serre),
}


@log_execution_time
def run_case(config: RunConfig, case: str) -> VerificationReport:
    """Run one catalogued case (id or alias); engine errors become an errored record."""
    case = resolve_case(case) or case
    claim, runner = CATALOG[case]
    started = time.perf_counter()
    datum_summary = params_summary = ""
    logger.info(f"Case {case} started")
    try:
        U = algebra_for(config)
        datum_summary, params_summary = U.datum.summary(), U.params.summary()
        report = combine(case, claim, runner(U, CASE_NAMES[case]), datum_summary, params_summary)
        report = replace(report, elapsed_ms=(time.perf_counter() - started) * 1000)
    except IQuantumError as e:
        elapsed = (time.perf_counter() - started) * 1000
        return errored(case, claim, datum_summary, params_summary, e, elapsed)
    logger.info(f"Case {case} {report.outcome} in {report.elapsed_ms:.1f} ms")
    return report


def run(config: RunConfig, cases: Optional[Sequence[str]] = None, jobs: int = 1) -> List[VerificationReport]:
    """Run cases in config order; with jobs > 1 they run in worker processes."""
    cases = list(cases or config.cases)
    if jobs <= 1 or len(cases) <= 1:
        return [run_case(config, case) for case in cases]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_case, [config] * len(cases), cases))
