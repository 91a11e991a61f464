"""`packing <spec>`: A, Ã, Â and the product A·Â."""

from __future__ import annotations

import argparse

from zerocap.services.quantities import aram, aram_hat, aram_tilde
from zerocap.services.reports import Report, value_row
from zerocap.commands.common import CommandContext, add_full_flag, load_graph, result_row


def register(sub, parents) -> None:
    p = sub.add_parser("packing", parents=parents, help="semidefinite packing numbers A, Ã, Â")
    p.add_argument("spec", help="GraphSpec JSON file")
    add_full_flag(p)
    p.set_defaults(handler=handle)


def handle(args: argparse.Namespace, ctx: CommandContext) -> Report:
    _, K = load_graph(args.spec)
    a = aram(K, use_cq=ctx.use_cq, **ctx.solver)
    a_tilde = aram_tilde(K, **ctx.solver)
    a_hat = aram_hat(K, **ctx.solver)
    results = (a, a_tilde, a_hat)
    rows = [result_row(r, ctx) for r in results]
    rows.append(value_row("aram_product", a.value * a_hat.value, K.name, status=a.status))
    return Report(command="packing", spec=args.spec, rows=rows, ok=all(r.ok for r in results))
