"""
`sweep two_state --points P`: the curves log A ≤ C_minE ≤ log Σ of the
two-state family over β² ∈ (0, 1/2), from the closed forms and optionally
from the SDPs.
"""

from __future__ import annotations

import argparse
import csv
import io
import math

from tqdm import tqdm

from zerocap.utils.errors import UsageError
from zerocap.services.model import two_state_channel, two_state_graph
from zerocap.services.quantities import aram, sigma_channel, two_state_closed
from zerocap.services.reports import Report
from zerocap.commands.common import CommandContext

SWEEP_COLUMNS = ("beta_sq", "log_aram", "cmin_e", "log_sigma")
SDP_COLUMNS = ("log_aram_sdp", "log_sigma_sdp")


def register(sub, parents) -> None:
    p = sub.add_parser("sweep", parents=parents, help="two-state family curves as CSV")
    p.add_argument("family", choices=("two_state",))
    p.add_argument("--points", type=int, default=9, help="number of β² samples, spaced evenly in (0, 1/2)")
    p.add_argument("--sdp", action="store_true", help="also solve A and Σ numerically at every point")
    p.set_defaults(handler=handle)


def sweep_points(points: int) -> list[float]:
    if points < 1:
        raise UsageError(f"--points must be positive, got {points}")
    return [0.5 * k / (points + 1) for k in range(1, points + 1)]


def handle(args: argparse.Namespace, ctx: CommandContext) -> Report:
    data = []
    chain_ok = True
    for beta_sq in tqdm(sweep_points(args.points), desc="sweep", disable=not args.verbose):
        alpha = math.sqrt(1.0 - beta_sq)
        log_a, cmin_e, log_s = two_state_closed(alpha).chain
        chain_ok = chain_ok and log_a <= cmin_e <= log_s
        point = {"beta_sq": beta_sq, "log_aram": log_a, "cmin_e": cmin_e, "log_sigma": log_s}
        if args.sdp:
            point["log_aram_sdp"] = math.log2(aram(two_state_graph(alpha), **ctx.solver).value)
            point["log_sigma_sdp"] = math.log2(sigma_channel(two_state_channel(alpha), **ctx.solver).value)
        data.append(point)

    columns = SWEEP_COLUMNS + (SDP_COLUMNS if args.sdp else ())
    return Report(
        command="sweep",
        spec=args.family,
        details={"points": data, "columns": list(columns), "chain_ok": chain_ok},
        ok=chain_ok,
    )


def render_sweep_csv(report: Report) -> str:
    """The sweep has its own columns, not the quantity-report header."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=report.details["columns"], lineterminator="\n")
    writer.writeheader()
    for point in report.details["points"]:
        writer.writerow({k: f"{point[k]:.12g}" for k in report.details["columns"]})
    return buf.getvalue()
