"""
construct-audit command line.

    construct-audit audit FILE [--supports FILE] [--tests dp,eo,...] [--criteria categorical,...]
    construct-audit distance FILE_A FILE_B [--var Yp] [--group 0|1] [--metric tv]
    construct-audit construct KIND [--output FILE] [--csv FILE --copies N]
    construct-audit verify [--theorem all|ID] [--trials N] [--seed S] [--workers W]

Reports and printed numbers go to stdout; logs and diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from src.cli.commands import (
    CONSTRUCT_KINDS,
    EXIT_INPUT,
    CommandResult,
    cmd_audit,
    cmd_construct,
    cmd_distance,
    cmd_verify,
    detect_format,
)
from src.config.constants import ARITHMETIC_MODES, THEOREM_IDS, VARIABLES
from src.config.settings import DATASET_TAU, DEFAULT_SEED, HARNESS_WORKERS, LOG_LEVEL
from src.models.audit_config import AuditConfig
from src.models.errors import AuditError

logger = logging.getLogger("construct_audit")

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s - %(message)s"


def _csv_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="construct-audit",
        description="Audit classifiers against construct-space fairness criteria.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    # --- audit ---
    audit = sub.add_parser("audit", help="Run tests and criteria on a distribution or dataset")
    audit.add_argument("input", type=Path, help="Distribution JSON or CSV dataset")
    audit.add_argument("--format", choices=["csv", "dist-json"], default=None, help="Input format (by suffix)")
    audit.add_argument(
        "--supports", dest="supports_path", type=Path, default=None,
        help="JSON with a \"supports\" object declaring the CSV label sets (keeps zero-mass labels)",
    )
    audit.add_argument("--tests", type=_csv_list, default=["dp"], help="dp,eo,pp,alpha,misclass,ppercent")
    audit.add_argument("--criteria", type=_csv_list, default=[], help="categorical,general,accuracy")
    audit.add_argument("--worldview", default=None, help="wae | wysiwyg | alpha:<value>")
    audit.add_argument("--metric", default="indicator", help="indicator | numeric | <matrix.json>")
    audit.add_argument("--mode", choices=ARITHMETIC_MODES, default=None)
    audit.add_argument("--tau", default=None, help="Test tolerance (0; CONSTRUCT_AUDIT_DATASET_TAU for CSV)")
    audit.add_argument("--alpha", default=None, help="α of the α-disparity test")
    audit.add_argument("--p", default="4/5", help="Threshold of the p%% rule")
    audit.add_argument("--favorable", default=None, help="Favorable Yp label for the p%% rule")
    audit.add_argument("--output", type=Path, default=None, help="Report path (stdout when omitted)")
    audit.add_argument("--seed", type=int, default=DEFAULT_SEED)

    # --- distance ---
    distance = sub.add_parser("distance", help="Distance between the laws of one variable in two inputs")
    distance.add_argument("file_a", type=Path)
    distance.add_argument("file_b", type=Path)
    distance.add_argument("--var", choices=VARIABLES, default="Yp")
    distance.add_argument("--group", type=int, choices=[0, 1], default=None, help="Condition on Z=group")
    distance.add_argument("--metric", default="tv", help="tv | indicator | numeric | <matrix.json>")
    distance.add_argument("--mode", choices=ARITHMETIC_MODES, default=None)

    # --- construct ---
    construct = sub.add_parser("construct", help="Write a generated distribution")
    construct.add_argument("kind", choices=CONSTRUCT_KINDS)
    construct.add_argument("--input", default=None, help="Base distribution (optimal-dp)")
    construct.add_argument("--yo0", default=None, help="Pr[Yo=1 | Z=0] (pp-adversarial)")
    construct.add_argument("--yo1", default=None, help="Pr[Yo=1 | Z=1] (pp-adversarial)")
    construct.add_argument("--epsilon", default=None, help="ε in (0, 1) (pp-adversarial)")
    construct.add_argument("--alpha", default=None, help="Worldview α (alpha-counterexample)")
    construct.add_argument("--alpha-prime", dest="alpha_prime", default=None, help="Test α′ (alpha-counterexample)")
    construct.add_argument("--mode", choices=ARITHMETIC_MODES, default=None)
    construct.add_argument("--seed", type=int, default=DEFAULT_SEED)
    construct.add_argument("--output", type=Path, default=None, help="Distribution path (stdout when omitted)")
    construct.add_argument("--csv", dest="csv_path", type=Path, default=None, help="Also write a replicated dataset")
    construct.add_argument("--copies", type=int, default=1, help="Replication factor of the dataset")

    # --- verify ---
    verify = sub.add_parser("verify", help="Run the randomized theorem suites")
    verify.add_argument("--theorem", choices=["all"] + THEOREM_IDS, default="all")
    verify.add_argument("--trials", type=int, default=500)
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify.add_argument("--mode", choices=ARITHMETIC_MODES, default=None)
    verify.add_argument("--workers", type=int, default=HARNESS_WORKERS)
    verify.add_argument("--output", type=Path, default=None, help="Report path (stdout when omitted)")
    return parser


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def _dispatch(args: argparse.Namespace) -> CommandResult:
    if args.command == "audit":
        input_format = args.format or detect_format(args.input)
        tau = args.tau
        if tau is None:
            tau = str(DATASET_TAU) if input_format == "csv" else "0"
        config = AuditConfig(
            input_path=args.input,
            input_format=input_format,
            supports_path=args.supports_path,
            tests=args.tests,
            criteria=args.criteria,
            tau=tau,
            alpha=args.alpha,
            p=args.p,
            favorable=args.favorable,
            worldview=args.worldview,
            metric=args.metric,
            mode=args.mode,
            output=args.output,
            seed=args.seed,
        )
        return cmd_audit(config)
    if args.command == "distance":
        return cmd_distance(args.file_a, args.file_b, args.var, args.group, args.metric, args.mode)
    if args.command == "construct":
        params = {
            "input": args.input,
            "yo0": args.yo0,
            "yo1": args.yo1,
            "epsilon": args.epsilon,
            "alpha": args.alpha,
            "alpha_prime": args.alpha_prime,
            "mode": args.mode,
            "seed": args.seed,
        }
        return cmd_construct(args.kind, params, args.output, args.csv_path, args.copies)
    return cmd_verify(args.theorem, args.trials, args.seed, args.mode, args.workers, args.output)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        code, text = _dispatch(args)
    except (AuditError, OSError, ValidationError, ValueError) as exc:
        message = " ".join(str(exc).split())
        logger.error("%s: %s", type(exc).__name__, message)
        logger.debug("Input error details", exc_info=True)
        return EXIT_INPUT
    if text:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
