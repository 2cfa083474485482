"""
Command-line entry point.

    python -m helpers.cli verify --config a2.conf [--cases iserre,annihilation] [--jobs 4]
    python -m helpers.cli show idiv i=1 n=3 parity=0 [--cartan A2 | --config a2.conf]
    python -m helpers.cli show tcomp i=1 n=2 r=1
    python -m helpers.cli show serre i=1 j=2
    python -m helpers.cli cache stats|clear

``verify`` writes one JSON record per case (case, claim, params, outcome,
witness, elapsed_ms) and exits 0 only if every case is verified.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from domains.iquantum.idivided import idiv_of, t_component
from domains.quantum.cartan import named_datum
from domains.quantum.uq import QuantumGroup
from .cases import algebra_for, run
from .config_loader import load_config, parse_cases
from .db_helper import IdealBasisCache, cache_db_path, clear_cache, get_cache_stats, init_database, log_run
from .reliability import IQuantumError, ValidationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iquantum", description="Verify identities in split ı quantum groups.")
    parser.add_argument("--log-level", default=os.getenv("IQUANTUM_LOG_LEVEL", "WARNING"),
                        help="Logging level (default from IQUANTUM_LOG_LEVEL, else WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="Run verification cases from a config file")
    verify.add_argument("--config", required=True, type=Path)
    verify.add_argument("--cases", help="Comma-separated case ids, or 'all' (overrides the config)")
    verify.add_argument("--jobs", type=int, default=1, help="Worker processes (default 1)")
    verify.add_argument("--output", type=Path, help="Report file (overrides the config; default stdout)")

    show = sub.add_parser("show", help="Print a normal form")
    show.add_argument("what", choices=["idiv", "tcomp", "serre"])
    show.add_argument("assignments", nargs="*", help="key=value arguments, e.g. i=1 n=3 parity=0")
    source = show.add_mutually_exclusive_group()
    source.add_argument("--config", type=Path)
    source.add_argument("--cartan", default="A2", help="Catalogued Cartan type (default A2)")

    cache = sub.add_parser("cache", help="Inspect or clear the persistent cache")
    cache.add_argument("action", choices=["stats", "clear"])
    return parser


def _parse_assignments(tokens: Sequence[str], required: Sequence[str],
                       defaults: Optional[Dict[str, int]] = None) -> Dict[str, int]:
    values = dict(defaults or {})
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep:
            raise ValidationError(f"expected key=value, got {token!r}")
        try:
            values[key.strip()] = int(value)
        except ValueError:
            raise ValidationError(f"{key} must be an integer, got {value!r}")
    missing = [k for k in required if k not in values]
    if missing:
        raise ValidationError(f"missing arguments: {', '.join(missing)}")
    return values


def _emit(records: List[dict], output: Optional[Path]) -> None:
    lines = [json.dumps(record, ensure_ascii=False) for record in records]
    if output is None:
        for line in lines:
            print(line)
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    logger.info(f"Wrote {len(lines)} records to {output}")


def cmd_verify(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    cases = parse_cases(args.cases) if args.cases else config.cases
    reports = run(config, cases, jobs=args.jobs)
    records = [r.to_record() for r in reports]
    output = args.output or (Path(config.output) if config.output else None)
    _emit(records, output)

    db_path = cache_db_path()
    if db_path is not None:
        try:
            init_database(db_path)
            for record in records:
                log_run(db_path, record, label=config.label or None)
        except Exception as e:
            logger.warning(f"Could not record the run in {db_path}: {e}")

    failed = [r.case for r in reports if not r.verified]
    if failed:
        logger.warning(f"{len(failed)} of {len(reports)} cases not verified: {failed}")
        return EXIT_FAILED
    return EXIT_OK


def cmd_show(args: argparse.Namespace) -> int:
    if args.config is not None:
        U = algebra_for(load_config(args.config))
    else:
        U = QuantumGroup(named_datum(args.cartan), store=IdealBasisCache.from_env())

    if args.what == "idiv":
        values = _parse_assignments(args.assignments, ["i", "n"], {"parity": 0})
        print(U.format(idiv_of(U, values["i"], values["n"], values["parity"])))
    elif args.what == "tcomp":
        values = _parse_assignments(args.assignments, ["i", "n", "r"])
        print(U.format(t_component(U, values["i"], values["n"], values["r"])))
    else:
        values = _parse_assignments(args.assignments, ["i", "j"])
        print(U.quotient.serre_element(values["i"], values["j"]).format("E"))
    return EXIT_OK


def cmd_cache(args: argparse.Namespace) -> int:
    db_path = cache_db_path()
    if db_path is None:
        print("IQUANTUM_CACHE_DIR is not set; caching is in-memory only")
        return EXIT_OK
    init_database(db_path)
    if args.action == "stats":
        print(json.dumps(get_cache_stats(db_path), indent=2))
    else:
        print(json.dumps(clear_cache(db_path), indent=2))
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "show": cmd_show, "cache": cmd_cache}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except IQuantumError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
