"""Exact analysis and protocol simulation for secret key generation in
pairwise independent networks: capacity via exact LP, partition bounds,
multigraph tree packings, XOR key propagation and zero-leakage audits."""

from .audit import (
    BRUTEFORCE_EDGE_CAP,
    SecurityReport,
    audit,
    flip_broadcast,
    leak_key_bit,
    security_index_bruteforce,
    security_index_rank,
)
from .capacity import (
    CapacityResult,
    ConsistencyReport,
    SubsetFamily,
    WeightAssignment,
    capacity_objective,
    check_objective_consistency,
    entropy_objective,
    pair_coefficients,
    sample_vertex,
    solve_capacity,
    subset_family,
)
from .errors import (
    AuditFailureError,
    InvalidAssignmentError,
    InvalidPackingError,
    InvalidScaleError,
    InvalidTreeError,
    ModelFormatError,
    PinkeyError,
    SizeLimitError,
    UnsupportedModeError,
)
from .gf2 import Gf2Matrix, gf2_rank
from .model import (
    EdgeRef,
    Multigraph,
    Pair,
    PairPmf,
    PinModel,
    Rational,
    TerminalSet,
    base_scale,
    format_rational,
    mutual_information,
    parse_rational,
    realize_multigraph,
)
from .modelfile import dump_model, dumps_model, load_model, loads_model
from .packing import (
    STEINER_EXACT_EDGE_CAP,
    Tree,
    TreePacking,
    max_disjoint_paths,
    min_cut,
    spanning_packing,
    steiner_packing,
    steiner_rate_lower_bound,
)
from .partitions import (
    Partition,
    best_partition,
    crossing_edges,
    crossing_weight,
    enumerate_partitions,
    nash_williams_count,
    spanning_rate,
    upper_bound,
)
from .protocol import (
    Broadcast,
    EdgeKeyBits,
    ProtocolRun,
    draw_edge_keys,
    export_transcript,
    propagate_tree,
    recover_key,
    run_protocol,
    verify_linear_maps,
)

__version__ = "0.1.0"

__all__ = [
    "AuditFailureError",
    "BRUTEFORCE_EDGE_CAP",
    "Broadcast",
    "CapacityResult",
    "ConsistencyReport",
    "EdgeKeyBits",
    "EdgeRef",
    "Gf2Matrix",
    "InvalidAssignmentError",
    "InvalidPackingError",
    "InvalidScaleError",
    "InvalidTreeError",
    "ModelFormatError",
    "Multigraph",
    "Pair",
    "PairPmf",
    "Partition",
    "PinModel",
    "PinkeyError",
    "ProtocolRun",
    "Rational",
    "STEINER_EXACT_EDGE_CAP",
    "SecurityReport",
    "SizeLimitError",
    "SubsetFamily",
    "TerminalSet",
    "Tree",
    "TreePacking",
    "UnsupportedModeError",
    "WeightAssignment",
    "audit",
    "base_scale",
    "best_partition",
    "capacity_objective",
    "check_objective_consistency",
    "crossing_edges",
    "crossing_weight",
    "draw_edge_keys",
    "dump_model",
    "dumps_model",
    "entropy_objective",
    "enumerate_partitions",
    "export_transcript",
    "flip_broadcast",
    "format_rational",
    "gf2_rank",
    "leak_key_bit",
    "load_model",
    "loads_model",
    "max_disjoint_paths",
    "min_cut",
    "mutual_information",
    "nash_williams_count",
    "pair_coefficients",
    "parse_rational",
    "propagate_tree",
    "realize_multigraph",
    "recover_key",
    "run_protocol",
    "sample_vertex",
    "security_index_bruteforce",
    "security_index_rank",
    "solve_capacity",
    "spanning_packing",
    "spanning_rate",
    "steiner_packing",
    "steiner_rate_lower_bound",
    "subset_family",
    "upper_bound",
    "verify_linear_maps",
]
