"""Exact verification laboratory for linear random operators on finite probability spaces."""

from .conditional import best_conditional, is_stochastically_continuous, omega_x_sets, restrict
from .continuity import (
    CLAUSES,
    ProbeSet,
    WitnessBundle,
    alpha_oracle,
    alpha_T,
    check_clause,
    check_sequential,
    f_profile,
    prob_bound_at,
    transform_witness,
)
from .graph import closed_graph_report, probe_separating, closed_graph_theorem_check
from .operators import (
    INF,
    Affine,
    Constant,
    DiagonalMap,
    Harmonic,
    MatrixMap,
    RandomOperator,
    RankOneMap,
    ZeroMap,
    bounded_event,
    linearity_probability,
    table,
)
from .prob_core import condition, intersect, joint_lower_bound, make_space, prob
from .randomization import (
    PrefixTrace,
    RandomVector,
    converges_in_probability,
    event_norm_ge,
    event_norm_lt,
    ky_fan_distance,
    prob_equal_zero,
)
from .sequences import ScaledBasis, ScaledFixed, SymbolicTrace, UserPrefix, WindowSum
from .spaces import C00, SeqVector, basis, finite_dim

__version__ = "0.1.0"
