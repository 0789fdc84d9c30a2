"""Fault erasure BP decoder analysis: exact density evolution, threshold
location, message-encoding and majority-voting protection schemes, and a
Monte Carlo cross-validation simulator."""

from .density_evolution import (
    ChannelSpec,
    DEConfig,
    DEResult,
    EnsembleSpec,
    MessageDist,
    TrajectoryRow,
    apply_intermediate,
    channel_dist,
    check_update,
    run_de,
    tentative_correct_prob,
    variable_update,
)
from .majority import MajorityBoundResult, majority_lower_bound, majority_vote
from .mc_simulator import (
    SimConfig,
    SimResult,
    TannerGraph,
    estimate_joint_s00,
    graph_to_adjacency_text,
    sample_graph,
    simulate_decode,
)
from .message_code import (
    FaultParams,
    MessageCodeSpec,
    MessageSymbol,
    TransitionMatrix,
    decode,
    encode,
    fault_pattern_prob,
    transition_matrix,
    transition_matrix_bruteforce,
)
from .threshold import (
    BracketError,
    CurvePoint,
    ThresholdResult,
    find_threshold,
    sweep_curve,
    trajectory_field,
)

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "ChannelSpec",
    "CurvePoint",
    "DEConfig",
    "DEResult",
    "EnsembleSpec",
    "FaultParams",
    "MajorityBoundResult",
    "MessageCodeSpec",
    "MessageDist",
    "MessageSymbol",
    "SimConfig",
    "SimResult",
    "TannerGraph",
    "ThresholdResult",
    "TrajectoryRow",
    "TransitionMatrix",
    "apply_intermediate",
    "channel_dist",
    "check_update",
    "decode",
    "encode",
    "estimate_joint_s00",
    "fault_pattern_prob",
    "find_threshold",
    "graph_to_adjacency_text",
    "majority_lower_bound",
    "majority_vote",
    "run_de",
    "sample_graph",
    "simulate_decode",
    "sweep_curve",
    "tentative_correct_prob",
    "trajectory_field",
    "transition_matrix",
    "transition_matrix_bruteforce",
    "variable_update",
]
