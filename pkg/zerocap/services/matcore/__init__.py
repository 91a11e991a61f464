# services/matcore/__init__.py
from .hermitian import HermitianMatrix, as_array
from .ops import (
    kron_perm,
    permute,
    partial_trace,
    partial_trace_array,
    permute_array,
    support_projector,
    support_basis,
    projector_basis,
    min_eigenvalue,
    max_eigenvalue,
    spectrum,
    rank,
    is_projector,
)
from .bases import (
    hermitian_basis,
    max_entangled,
    max_entangled_vector,
    random_unitary,
    random_isometry,
    random_density,
    random_hermitian,
)

__all__ = [
    "HermitianMatrix",
    "as_array",
    "kron_perm",
    "permute",
    "partial_trace",
    "partial_trace_array",
    "permute_array",
    "support_projector",
    "support_basis",
    "projector_basis",
    "min_eigenvalue",
    "max_eigenvalue",
    "spectrum",
    "rank",
    "is_projector",
    "hermitian_basis",
    "max_entangled",
    "max_entangled_vector",
    "random_unitary",
    "random_isometry",
    "random_density",
    "random_hermitian",
]
