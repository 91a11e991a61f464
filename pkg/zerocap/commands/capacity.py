"""`capacity <spec>`: Υ(K), the superdense coding bound and the positive-capacity test."""

from __future__ import annotations

import argparse

from zerocap.services.quantities import feasibility, superdense_bound, upsilon, upsilon_with_noiseless
from zerocap.services.reports import Report, value_row
from zerocap.utils.errors import UsageError
from zerocap.commands.common import CommandContext, add_full_flag, load_graph, result_row


def register(sub, parents) -> None:
    p = sub.add_parser("capacity", parents=parents, help="one-shot assisted zero-error capacity Υ")
    p.add_argument("spec", help="GraphSpec JSON file")
    p.add_argument(
        "--noiseless",
        type=int,
        default=None,
        metavar="ELL",
        help="also report Υ(K⊗Δ_ELL) against ELL·Υ(K)",
    )
    add_full_flag(p)
    p.set_defaults(handler=handle)


def handle(args: argparse.Namespace, ctx: CommandContext) -> Report:
    _, K = load_graph(args.spec)
    res = upsilon(K, use_cq=ctx.use_cq, **ctx.solver)
    feas = feasibility(K)
    rows = [
        result_row(res, ctx),
        value_row("superdense_bound", superdense_bound(K), K.name),
    ]
    details = {f"feasibility_{k}": v for k, v in feas.as_dict().items()}
    if feas.certificate is not None:
        details["feasibility_certificate"] = [[float(z.real), float(z.imag)] for z in feas.certificate]
    ok = res.ok
    if args.noiseless is not None:
        if args.noiseless < 1:
            raise UsageError(f"--noiseless needs ELL ≥ 1, got {args.noiseless}")
        joint = upsilon_with_noiseless(K, args.noiseless, **ctx.solver)
        rows.append(result_row(joint, ctx))
        details["noiseless_ratio"] = joint.notes["ratio"]
        ok = ok and joint.ok
    return Report(command="capacity", spec=args.spec, rows=rows, details=details, ok=ok)
