"""`simcost <spec>`: Σ of the graph, and Σ and H_min of the channel when the spec fixes one."""

from __future__ import annotations

import argparse

from zerocap.services.model import channel_from_spec
from zerocap.services.quantities import sigma_channel, sigma_graph
from zerocap.services.reports import Report, value_row
from zerocap.commands.common import CommandContext, add_full_flag, load_graph, result_row


def register(sub, parents) -> None:
    p = sub.add_parser("simcost", parents=parents, help="one-shot assisted simulation cost Σ")
    p.add_argument("spec", help="GraphSpec JSON file")
    add_full_flag(p)
    p.set_defaults(handler=handle)


def handle(args: argparse.Namespace, ctx: CommandContext) -> Report:
    spec, K = load_graph(args.spec)
    graph_cost = sigma_graph(K, use_cq=ctx.use_cq, **ctx.solver)
    rows = [result_row(graph_cost, ctx)]
    ok = graph_cost.ok

    N = channel_from_spec(spec)
    if N is not None:
        cost = sigma_channel(N, **ctx.solver)
        rows.append(result_row(cost, ctx))
        rows.append(value_row("hmin", cost.notes["hmin"], N.name, status=cost.status))
        ok = ok and cost.ok
    return Report(command="simcost", spec=args.spec, rows=rows, ok=ok)
