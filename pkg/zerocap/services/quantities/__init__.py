# services/quantities/__init__.py
from .results import QuantityResult, acceptable, combine, closed_form, witness_array, FLOOR, CEIL, NONE
from .capacity import (
    upsilon,
    upsilon_primal,
    upsilon_dual,
    upsilon_cq_primal,
    upsilon_cq_dual,
    upsilon_witness,
    upsilon_with_noiseless,
    cq_witness_to_full,
)
from .simulation import (
    sigma_channel,
    sigma_channel_primal,
    sigma_channel_dual,
    sigma_graph,
    sigma_graph_primal,
    sigma_graph_dual,
    sigma_graph_cq_primal,
    sigma_graph_cq_dual,
)
from .packing import (
    aram,
    aram_tilde,
    aram_kraus,
    aram_hat,
    aram_product,
    or_value,
    fractional_packing,
    fractional_packing_lp,
)
from .theta import lovasz_theta, theta_primal, theta_dual
from .closed_forms import (
    TwoOutputForms,
    DampingForms,
    entropy,
    binary_entropy,
    f_max,
    two_state_general,
    two_state_closed,
    amplitude_damping_closed,
    damping_cmin_e,
    cmin_e_closed,
    superdense_bound,
)
from .ansatz import TwoStateReport, two_state_report, ansatz_coefficients, ansatz_operator, verify_ansatz
from .feasibility import FeasibilityReport, feasibility, feasibility_cq, feasibility_general

__all__ = [
    "QuantityResult",
    "acceptable",
    "combine",
    "closed_form",
    "witness_array",
    "FLOOR",
    "CEIL",
    "NONE",
    "upsilon",
    "upsilon_primal",
    "upsilon_dual",
    "upsilon_cq_primal",
    "upsilon_cq_dual",
    "upsilon_witness",
    "upsilon_with_noiseless",
    "cq_witness_to_full",
    "sigma_channel",
    "sigma_channel_primal",
    "sigma_channel_dual",
    "sigma_graph",
    "sigma_graph_primal",
    "sigma_graph_dual",
    "sigma_graph_cq_primal",
    "sigma_graph_cq_dual",
    "aram",
    "aram_tilde",
    "aram_kraus",
    "aram_hat",
    "aram_product",
    "or_value",
    "fractional_packing",
    "fractional_packing_lp",
    "lovasz_theta",
    "theta_primal",
    "theta_dual",
    "TwoOutputForms",
    "DampingForms",
    "entropy",
    "binary_entropy",
    "f_max",
    "two_state_general",
    "two_state_closed",
    "amplitude_damping_closed",
    "damping_cmin_e",
    "cmin_e_closed",
    "superdense_bound",
    "TwoStateReport",
    "two_state_report",
    "ansatz_coefficients",
    "ansatz_operator",
    "verify_ansatz",
    "FeasibilityReport",
    "feasibility",
    "feasibility_cq",
    "feasibility_general",
]
