"""`alphastar <classical spec>`: fractional packing number α* with the simplex cross-check."""

from __future__ import annotations

import argparse

from zerocap.utils.constants import LP_AGREEMENT_TOL
from zerocap.services.quantities import fractional_packing
from zerocap.services.reports import Report
from zerocap.commands.common import CommandContext, load_graph, result_row


def register(sub, parents) -> None:
    p = sub.add_parser("alphastar", parents=parents, help="fractional packing number α* of a classical channel")
    p.add_argument("spec", help="GraphSpec JSON file describing a classical graph")
    p.set_defaults(handler=handle)


def handle(args: argparse.Namespace, ctx: CommandContext) -> Report:
    _, K = load_graph(args.spec)
    res = fractional_packing(K, **ctx.solver)
    simplex = res.notes["simplex"]
    return Report(
        command="alphastar",
        spec=args.spec,
        rows=[result_row(res, ctx)],
        details={
            "simplex": simplex,
            "pack_cover_gap": res.crosscheck_gap,
            "simplex_gap": res.crosschecks["simplex"],
            "simplex_agrees": res.crosschecks["simplex"] <= LP_AGREEMENT_TOL,
            "tolerance": LP_AGREEMENT_TOL,
        },
        ok=res.ok,
    )
