"""`power <spec> -n N <quantity>`: a quantity of the n-fold tensor power (n ≤ MAX_TENSOR_POWER)."""

from __future__ import annotations

import argparse
import math

from zerocap.utils.config import settings
from zerocap.utils.errors import CapacityLimitError, DimensionError
from zerocap.services.model import NCGraph
from zerocap.services.model.specs import TwoStateSpec
from zerocap.services.quantities import aram, aram_hat, aram_tilde, sigma_channel, sigma_graph, two_state_report, upsilon
from zerocap.services.reports import Report, value_row
from zerocap.commands.common import CommandContext, add_full_flag, channel_for, load_graph, result_row

GRAPH_QUANTITIES = {
    "upsilon": lambda K, ctx: upsilon(K, use_cq=ctx.use_cq, **ctx.solver),
    "sigma_graph": lambda K, ctx: sigma_graph(K, use_cq=ctx.use_cq, **ctx.solver),
    "aram": lambda K, ctx: aram(K, use_cq=ctx.use_cq, **ctx.solver),
    "aram_tilde": lambda K, ctx: aram_tilde(K, **ctx.solver),
    "aram_hat": lambda K, ctx: aram_hat(K, **ctx.solver),
}
QUANTITIES = tuple(GRAPH_QUANTITIES) + ("sigma_channel",)


def register(sub, parents) -> None:
    p = sub.add_parser("power", parents=parents, help="quantity of a tensor power K^⊗n")
    p.add_argument("spec", help="GraphSpec JSON file")
    p.add_argument("quantity", choices=QUANTITIES)
    p.add_argument("-n", type=int, required=True, help=f"number of copies (at most {settings.MAX_TENSOR_POWER})")
    add_full_flag(p)
    p.set_defaults(handler=handle)


def _channel_power(N, n: int):
    out = N
    for _ in range(n - 1):
        out = out.tensor(N)
    if (out.d_in * out.d_out) > settings.MAX_STATE_DIM:
        raise CapacityLimitError(f"channel power state space {out.d_in * out.d_out} exceeds {settings.MAX_STATE_DIM}")
    out.name = f"{N.name}^{n}"
    return out


def handle(args: argparse.Namespace, ctx: CommandContext) -> Report:
    n = args.n
    if n < 1:
        raise DimensionError(f"tensor power must be at least 1, got {n}")
    if n > settings.MAX_TENSOR_POWER:
        raise CapacityLimitError(f"tensor power {n} exceeds the cap {settings.MAX_TENSOR_POWER}", n=n)

    spec, K = load_graph(args.spec)
    if args.quantity == "sigma_channel":
        res = sigma_channel(_channel_power(channel_for(spec, K), n), **ctx.solver)
    else:
        Kn: NCGraph = K.power(n)
        res = GRAPH_QUANTITIES[args.quantity](Kn, ctx)

    rows = [result_row(res, ctx)]
    per_copy = res.value ** (1.0 / n) if res.value > 0 else math.nan
    rows.append(value_row(f"{args.quantity}_per_copy", per_copy, res.subject, status=res.status, n=n))
    details = {"n": n}

    if args.quantity == "upsilon" and isinstance(spec, TwoStateSpec) and n >= 2:
        alpha = spec.value
        if alpha * alpha > 0.5:
            ansatz = two_state_report(alpha, n)
            details.update({f"ansatz_{k}": v for k, v in ansatz.as_dict().items() if not isinstance(v, list)})
            if ansatz.bound is not None:
                rows.append(value_row("ansatz_lower_bound", ansatz.bound, res.subject, n=n))
    return Report(command="power", spec=args.spec, rows=rows, details=details, ok=res.ok)
