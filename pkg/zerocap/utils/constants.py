# zerocap/utils/constants.py
"""Fixed numbers and names that are part of the tool's contract (not tunable)."""

# Values this close to an integer are tagged with it (floor/ceiling safety)
INTEGER_TAG_TOL = 1e-6

# Construction-time checks
CPTP_TOL = 1e-9
PROJECTOR_TOL = 1e-9
ORTHOGONALITY_TOL = 1e-9      # confusability edge iff ||P_i P_j|| exceeds this
NS_TOL = 1e-8                 # check_ns pass/fail threshold
KRAUS_SPACE_EPS = 1e-6        # R must dominate eps * 1 for a valid Kraus space

# Packing vs covering LP and the simplex cross-check of α* must agree this closely
LP_AGREEMENT_TOL = 1e-7

# Two-state ansatz verification
ANSATZ_TOL = 1e-8

# Golden-section bracket width for C_minE of amplitude damping
GOLDEN_TOL = 1e-9

# CSV report contract
CSV_HEADER = ("quantity", "value", "integer_part", "bits", "gap", "status", "seconds")

# GraphSpec types accepted by the loader
SPEC_TYPES = (
    "kraus",
    "cq",
    "classical",
    "graph",
    "two_state",
    "amplitude_damping",
    "noiseless_classical",
    "noiseless_quantum",
    "tensor",
)

# Solver statuses
OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
MAX_ITER = "max_iter"
NUMERICAL = "numerical"
SOLVER_STATUSES = (OPTIMAL, INFEASIBLE, UNBOUNDED, MAX_ITER, NUMERICAL)

# Eigenvalue threshold of the positive-capacity tests
FEASIBILITY_TOL = 1e-9
