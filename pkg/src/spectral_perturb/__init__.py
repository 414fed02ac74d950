"""Edge importance from leading-eigenpair perturbation.

Scores edges and non-edges of undirected, unweighted graphs by the
first-order change they induce in the adjacency matrix's leading
eigenvalue, compares those estimates against exact recomputation for
single-edge toggles, grows or prunes graphs greedily by that score, and
propagates the estimates into closed-form Kuramoto synchronization
predictions (validated by a direct simulator).
"""

from .errors import (
    AlignmentFailure,
    DegenerateSpectrum,
    EdgeStateConflict,
    GenerationFailed,
    InvalidCoupling,
    InvalidNode,
    InvalidVector,
    NotConnected,
    NumericalBlowup,
    SelfLoopRejected,
    ShapeError,
)
from .generators import (
    GeneratorSpec,
    generate,
    largest_connected_component,
    spec_from_json,
    spec_to_json,
)
from .graphs import (
    DegreeStats,
    Graph,
    build_graph,
    complement_edges,
    degree_stats,
    is_connected,
    read_edge_list,
    toggle_edge,
    write_edge_list,
)
from .greedy import GreedyResult, GreedyTrace, greedy_add, greedy_remove
from .importance import EdgeScore, foedi, foedi_sum_check, score_all
from .kuramoto import (
    DeltaRCurve,
    DeltaRTable,
    FrequencyModel,
    KuramotoPrediction,
    SimResult,
    critical_coupling,
    delta_r_ranking,
    eta,
    order_parameter_sq,
    parabolic_frequency_model,
    perturbed_prediction,
    predict,
    simulate,
)
from .perturbation import (
    PerturbationReport,
    angle_bound_check,
    edge_scan,
    predict_delta_v,
    true_delta_lambda,
    true_delta_v,
)
from .spectral import EigenPair, leading_eigenpair, minnorm_solve, rayleigh_quotient

__version__ = "0.1.0"
