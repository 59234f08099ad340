#!/usr/bin/env python
"""Command-line front end for ΛVaR insurance design runs."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from config import CONFIG, AppConfig
from LambdaVarInsurance.core.validation import NumericError, ValidationError
from LambdaVarInsurance.logic.reproduce import TARGETS, reproduce
from LambdaVarInsurance.logic.run_config import load_run_config
from LambdaVarInsurance.logic.runner import EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION, run
from version import __version__

logger = logging.getLogger(__name__)


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    """Return CLI arguments."""
    parser = argparse.ArgumentParser(
        description="Optimal insurance design under Lambda-Value-at-Risk"
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", type=Path, help="Run config file (JSON or YAML)")
    source.add_argument(
        "--reproduce",
        choices=TARGETS,
        help="Rebuild the worked example or one of the sweep figures",
    )
    parser.add_argument("--out", help="Output file (run) or directory (reproduce)")
    parser.add_argument(
        "--format", choices=["json", "csv"], help="Output format; overrides the config"
    )
    parser.add_argument("--seed", type=int, help="Seed override for sampled diagnostics")
    parser.add_argument("--verbose", action="store_true", help="Log solver probes")
    parser.add_argument("--version", action="version", version=__version__)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None, settings: AppConfig | None = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO)
    settings = settings or CONFIG
    if args.seed is not None:
        settings = settings.model_copy(update={"seed": args.seed})

    if args.reproduce:
        out_dir = Path(args.out or settings.output_dir)
        try:
            result = reproduce(args.reproduce, settings, out_dir=out_dir)
        except ValidationError as exc:
            logger.error("Validation failed: %s", exc)
            return EXIT_VALIDATION
        except NumericError as exc:
            logger.error("Numeric failure: %s", exc)
            return EXIT_NUMERIC
        for path in result.paths:
            print(path)
        return EXIT_OK

    try:
        config = load_run_config(args.config)
    except ValidationError as exc:
        logger.error("%s", exc)
        return EXIT_VALIDATION
    outcome = run(
        config,
        settings,
        out=args.out,
        fmt=args.format,
        seed=args.seed,
        version=__version__,
    )
    if outcome.path is not None:
        print(outcome.path)
    elif outcome.error:
        print(outcome.error, file=sys.stderr)
    return outcome.status


if __name__ == "__main__":  # pragma: no cover - CLI entrypoint
    sys.exit(main())
