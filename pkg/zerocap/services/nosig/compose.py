"""
Plugging a channel N: A_o → B_i between the two halves of a correlation.

The composed map A_i → B_o has Choi matrix

    C[i, p, i', p'] = Σ Ω[i, o, j, p, i', o', j', p'] · J_N[o, j, o', j']

which is trace preserving whenever Ω cannot signal from B to A.
"""

from __future__ import annotations

import numpy as np

from zerocap.utils.errors import DimensionError
from zerocap.utils.logger import setup_logging
from zerocap.services.matcore import HermitianMatrix
from zerocap.services.model import Channel, channel_from_choi
from zerocap.services.nosig.correlation import NsCorrelation, apply_correlation

logger = setup_logging(__name__)


def _check_fit(corr: NsCorrelation, N: Channel) -> None:
    _, dAo, dBi, _ = corr.dims
    if (N.d_in, N.d_out) != (dAo, dBi):
        raise DimensionError(
            f"{N.name} maps {N.d_in}→{N.d_out} but {corr.name} expects a {dAo}→{dBi} channel between its halves"
        )


def compose_choi(corr: NsCorrelation, N: Channel) -> HermitianMatrix:
    _check_fit(corr, N)
    dAi, dAo, dBi, dBo = corr.dims
    J = N.choi.entries.reshape(dAo, dBi, dAo, dBi)
    C = np.einsum("iojpxyzq,ojyz->ipxq", corr.tensor, J)
    return HermitianMatrix(C.reshape(dAi * dBo, dAi * dBo), (dAi, dBo), tol=1e-7)


def compose(corr: NsCorrelation, N: Channel) -> Channel:
    C = compose_choi(corr, N)
    out = channel_from_choi(C, corr.dims[0], corr.dims[3], name=f"{corr.name}∘{N.name}")
    if not out.trace_preserving:
        logger.warning(f"{corr.name} with {N.name}: composition is not trace preserving ({out.tp_deviation:.3e})")
    return out


def compose_via_trace(corr: NsCorrelation, N: Channel) -> HermitianMatrix:
    """
    Same Choi matrix, computed operator by operator: write Π(ρ ⊗ σ) in
    blocks Π_{oo'} over A_o, feed N(|o⟩⟨o'|) to Bob and sum.
    """
    _check_fit(corr, N)
    dAi, dAo, dBi, dBo = corr.dims
    C = np.zeros((dAi, dBo, dAi, dBo), dtype=complex)
    for i in range(dAi):
        for ip in range(dAi):
            X = np.zeros((dAi, dAi))
            X[i, ip] = 1.0
            for o in range(dAo):
                for op in range(dAo):
                    unit = np.zeros((dAo, dAo))
                    unit[o, op] = 1.0
                    Y = N.apply(unit)
                    out = apply_correlation(corr, X, Y).reshape(dAo, dBo, dAo, dBo)
                    C[i, :, ip, :] += out[o, :, op, :]
    return HermitianMatrix(C.reshape(dAi * dBo, dAi * dBo), (dAi, dBo), tol=1e-7)
