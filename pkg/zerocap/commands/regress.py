"""`regress`: every acceptance criterion, with a pass/fail table. Exit code 0 iff all pass."""

from __future__ import annotations

import argparse
from typing import Optional

from zerocap.utils.config import settings
from zerocap.utils.errors import UsageError
from zerocap.services.acceptance import CRITERIA, SuiteContext, run_suite
from zerocap.services.reports import Report, check_row
from zerocap.commands.common import CommandContext


def register(sub, parents) -> None:
    p = sub.add_parser("regress", parents=parents, help="run the acceptance suite")
    p.add_argument("--jobs", type=int, default=settings.REGRESS_JOBS, help="criteria solved in parallel")
    p.add_argument("--only", default=None, help="comma-separated criterion numbers, e.g. 1,4,9")
    p.set_defaults(handler=handle)


def _selection(only: Optional[str]) -> Optional[set[int]]:
    if not only:
        return None
    try:
        chosen = {int(x) for x in only.split(",") if x.strip()}
    except ValueError:
        raise UsageError(f"--only expects comma-separated integers, got {only!r}") from None
    known = {n for n, _, _ in CRITERIA}
    if not chosen <= known:
        raise UsageError(f"unknown criteria {sorted(chosen - known)}; choose from {sorted(known)}")
    return chosen


def handle(args: argparse.Namespace, ctx: CommandContext) -> Report:
    suite = SuiteContext(options=ctx.options, backend=ctx.backend, seed=ctx.seed)
    outcomes = run_suite(suite, jobs=args.jobs, only=_selection(args.only), progress=args.verbose)
    rows = []
    for o in outcomes:
        row = check_row(f"{o.number:02d}_{o.name}", o.passed, seconds=o.seconds, **o.residuals)
        if o.error:
            row.notes["error"] = o.error
        row.notes.update(o.reported)
        rows.append(row)
    passed = sum(o.passed for o in outcomes)
    return Report(
        command="regress",
        rows=rows,
        details={"passed": passed, "total": len(outcomes), "seed": ctx.seed},
        ok=passed == len(outcomes),
    )
