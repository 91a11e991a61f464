"""`theta <graph>`: Lovász ϑ of a `graph` spec, or of the confusability graph of a cq spec."""

from __future__ import annotations

import argparse

from zerocap.services.model import classical_graph_from_spec, graph_from_spec, load_spec
from zerocap.services.model.specs import GraphTypeSpec
from zerocap.services.quantities import aram, lovasz_theta
from zerocap.services.reports import Report
from zerocap.commands.common import CommandContext, result_row


def register(sub, parents) -> None:
    p = sub.add_parser("theta", parents=parents, help="Lovász number ϑ")
    p.add_argument("spec", help="GraphSpec JSON file of type graph, or a cq-type spec")
    p.set_defaults(handler=handle)


def handle(args: argparse.Namespace, ctx: CommandContext) -> Report:
    spec = load_spec(args.spec)
    G = classical_graph_from_spec(spec)
    res = lovasz_theta(G, **ctx.solver)
    rows = [result_row(res, ctx)]
    ok = res.ok
    details = {"vertices": G.n, "edges": len(G.edges)}
    if not isinstance(spec, GraphTypeSpec):
        a = aram(graph_from_spec(spec), **ctx.solver)
        rows.append(result_row(a, ctx))
        details["aram_minus_theta"] = a.value - res.value
        ok = ok and a.ok
    return Report(command="theta", spec=args.spec, rows=rows, details=details, ok=ok)
