"""`verify <spec> -M m [--simulate]`: build the no-signalling correlation and check it end to end."""

from __future__ import annotations

import argparse

from zerocap.utils.file_utils import ensure_directory, write_json
from zerocap.utils.logger import setup_logging
from zerocap.services.nosig import correlation_to_json, verify_code, verify_simulation
from zerocap.services.reports import Report, check_row
from zerocap.commands.common import CommandContext, channel_for, load_graph

logger = setup_logging(__name__)


def register(sub, parents) -> None:
    p = sub.add_parser("verify", parents=parents, help="build and verify an assisted code or simulation")
    p.add_argument("spec", help="GraphSpec JSON file")
    p.add_argument("-M", type=int, required=True, help="number of messages")
    p.add_argument("--simulate", action="store_true", help="verify a simulation of the channel instead of a code")
    p.set_defaults(handler=handle)


def _ns_residuals(ns) -> dict[str, float]:
    return {k: v for k, v in ns.as_dict().items() if k != "ok"}


def handle(args: argparse.Namespace, ctx: CommandContext) -> Report:
    spec, K = load_graph(args.spec)
    N = channel_for(spec, K)

    if args.simulate:
        rep = verify_simulation(N, args.M, **ctx.solver)
        rows = [
            check_row("no_signalling", rep.ns.ok, **_ns_residuals(rep.ns)),
            check_row("reproduces_channel", rep.choi_distance <= 1e-6, choi_distance=rep.choi_distance,
                      tp_deviation=rep.tp_deviation),
        ]
    else:
        rep = verify_code(K, N, args.M, **ctx.solver)
        rows = [
            check_row("no_signalling", rep.ns.ok, **_ns_residuals(rep.ns)),
            check_row("zero_error", rep.max_offdiag <= 1e-6 and rep.choi_distance <= 1e-6,
                      max_offdiag=rep.max_offdiag, choi_distance=rep.choi_distance),
            check_row("orthogonality", rep.orthogonality <= 1e-6, orthogonality=rep.orthogonality),
            check_row("trace_form", rep.trace_form_distance <= 1e-8, distance=rep.trace_form_distance),
        ]
    for row in rows:
        row.seconds = rep.seconds
        row.subject = N.name

    details = {k: v for k, v in rep.as_dict().items() if k not in ("ns", "transition")}
    if rep.correlation is not None and ctx.dump_dir is not None:
        kind = "simulation" if args.simulate else "code"
        path = write_json(ensure_directory(ctx.dump_dir) / f"correlation_{kind}_M{args.M}.json", correlation_to_json(rep.correlation))
        details["correlation_file"] = str(path)
        logger.info(f"wrote correlation to {path}")
    ok = rep.ok and all(row.status == "pass" for row in rows)
    return Report(command="verify", spec=args.spec, rows=rows, details=details, ok=ok)
