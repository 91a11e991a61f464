"""
Exception hierarchy shared by every zerocap layer.

Each error carries a short machine code and the process exit code the CLI
maps it to. Solver outcomes (infeasible, unbounded, max_iter, numerical) are
*statuses* on a solution, not exceptions.
"""


class ZerocapError(Exception):
    code = "E_INTERNAL"
    exit_code = 1

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    def one_line(self) -> str:
        extra = "".join(f" {k}={v}" for k, v in sorted(self.context.items()))
        text = self.message.replace('"', "'")
        return f'error code={self.code} message="{text}"{extra}'


class DimensionError(ZerocapError):
    code = "E_DIM"


class NotHermitianError(ZerocapError):
    code = "E_HERM"


class NotPsdError(ZerocapError):
    code = "E_PSD"


class GraphError(ZerocapError):
    code = "E_GRAPH"


class SpecError(ZerocapError):
    code = "E_SPEC"
    exit_code = 2


class InfeasibleRequest(ZerocapError):
    code = "E_INFEASIBLE"
    exit_code = 3


class SolverError(ZerocapError):
    code = "E_SOLVER"


class CapacityLimitError(ZerocapError):
    code = "E_LIMIT"


class UsageError(ZerocapError):
    code = "E_USAGE"
    exit_code = 2
