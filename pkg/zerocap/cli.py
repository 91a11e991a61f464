"""
zerocap/cli.py: argument parsing, dispatch and error mapping.

Exit codes: 0 success, 1 computation or solver failure, 2 spec or usage
error, 3 infeasible request. Failures print one line to stderr:

    error code=<CODE> message="<text>"
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from zerocap.utils.config import settings
from zerocap.utils.errors import SpecError, UsageError, ZerocapError
from zerocap.utils.logger import set_level, setup_logging
from zerocap.services.reports import emit
from zerocap.commands import alphastar, capacity, packing, power, regress, schema, simcost, sweep, theta, verify
from zerocap.commands.common import add_common_flags, context_from_args

logger = setup_logging(__name__)

COMMANDS = (capacity, simcost, packing, theta, alphastar, power, verify, sweep, regress, schema)


class _Parser(argparse.ArgumentParser):
    """Usage errors go through the same one-line channel as every other failure."""

    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    add_common_flags(common)

    parser = _Parser(
        prog="zerocap",
        description="No-signalling assisted zero-error capacities and simulation costs",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    for module in COMMANDS:
        module.register(sub, [common])
    return parser


def _fail(err: ZerocapError) -> int:
    sys.stderr.write(err.one_line() + "\n")
    return err.exit_code


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except ZerocapError as e:
        return _fail(e)

    set_level(logging.DEBUG if args.verbose or settings.VERBOSE else logging.WARNING)
    try:
        ctx = context_from_args(args)
        report = args.handler(args, ctx)
        text = None
        if args.command == "schema":
            text = report.details["text"] + "\n"
        elif args.command == "sweep" and args.fmt != "json":
            text = sweep.render_sweep_csv(report)
        emit(report, args.fmt, out=args.out, text=text)
    except ZerocapError as e:
        logger.debug(f"{args.command} failed: {e}")
        return _fail(e)
    except (ValidationError, json.JSONDecodeError) as e:
        return _fail(SpecError(str(e).splitlines()[0]))
    except Exception as e:
        logger.debug(f"unexpected failure in {args.command}", exc_info=True)
        return _fail(ZerocapError(f"{type(e).__name__}: {e}"))

    if not report.ok:
        logger.warning(f"{args.command}: report is not ok")
        return 1
    return 0
