"""
zerocap/commands/common.py: pieces every subcommand shares: solver context,
spec loading and report rows.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from zerocap.utils.config import settings
from zerocap.utils.errors import SpecError
from zerocap.utils.logger import setup_logging
from zerocap.services.model import (
    Channel,
    NCGraph,
    channel_from_spec,
    cq_channel,
    graph_from_spec,
    load_spec,
)
from zerocap.services.model.specs import GraphSpec
from zerocap.services.sdp import SolveOptions, get_backend
from zerocap.services.quantities import QuantityResult
from zerocap.services.reports import ReportRow, dump_witnesses, row_from_result

logger = setup_logging(__name__)


@dataclass
class CommandContext:
    options: SolveOptions
    backend: Any
    seed: int
    dump_dir: Optional[Path] = None
    use_cq: bool = True

    @property
    def solver(self) -> dict:
        return {"options": self.options, "backend": self.backend}


def add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver progress to stderr")
    parser.add_argument("--backend", choices=("embedded", "cvxpy"), default=None, help="SDP backend")
    parser.add_argument("--gap-tol", type=float, default=None, help=f"duality gap tolerance (default {settings.GAP_TOL:g})")
    parser.add_argument("--feas-tol", type=float, default=None, help=f"feasibility tolerance (default {settings.FEAS_TOL:g})")
    parser.add_argument("--seed", type=int, default=None, help="seed for randomized suites")
    parser.add_argument("--dump-witness", metavar="PATH", default=None, help="directory for witness JSON files")
    parser.add_argument("--out", metavar="PATH", default=None, help="write the report here instead of stdout")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv", help="CSV report")
    parser.set_defaults(fmt="table")


def add_full_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--full", action="store_true", help="use the full formulation even for cq specs")


def context_from_args(args: argparse.Namespace) -> CommandContext:
    """Per-invocation overrides; the settings singleton is never touched."""
    options = SolveOptions.from_settings(gap_tol=args.gap_tol, feas_tol=args.feas_tol)
    return CommandContext(
        options=options,
        backend=get_backend(args.backend),
        seed=args.seed if args.seed is not None else settings.DEFAULT_SEED,
        dump_dir=Path(args.dump_witness) if args.dump_witness else None,
        use_cq=not getattr(args, "full", False),
    )


def load_graph(path: str) -> tuple[GraphSpec, NCGraph]:
    spec = load_spec(path)
    K = graph_from_spec(spec)
    if K.name.startswith("K["):
        K.name = Path(path).stem
    logger.info(f"{path}: {K!r}")
    return spec, K


def channel_for(spec: GraphSpec, K: NCGraph) -> Channel:
    """The spec's own channel, else for a cq-graph the channel i → P_i / tr P_i, whose Kraus space is K."""
    N = channel_from_spec(spec)
    if N is not None:
        return N
    if K.is_cq:
        return cq_channel([p.entries / p.trace() for p in K.cq], name=f"uniform({K.name})")
    raise SpecError(f"a {spec.type!r} spec does not determine a channel")


def result_row(res: QuantityResult, ctx: CommandContext, closed: bool = False) -> ReportRow:
    witnesses = dump_witnesses(res, ctx.dump_dir) if ctx.dump_dir and not closed else []
    return row_from_result(res, witnesses=witnesses, closed=closed)
