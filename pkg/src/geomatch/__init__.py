"""Spectral matching of correlated Gaussian point clouds.

Two point sets linked by a hidden permutation and additive Gaussian noise are
observed only through their Gram or pairwise-distance matrices. The estimator
aligns the top-d eigenvector bases of the two observations over all 2^d
per-column sign choices, solving a maximum linear assignment for each. The
package adds a Monte Carlo harness for recovery-threshold experiments and a
diagnostics suite for the spectral quantities that drive recovery.
"""

from .assignment import AssignmentSolution, brute_force_lap, solve_max_lap
from .container import ContainerFormatError, load_instance, read_matrix, save_instance, write_matrix
from .diagnostics import (
    AlignmentReport,
    EnvelopeReport,
    GapReport,
    ResidualRow,
    basis_residual_sweep,
    best_sign_alignment,
    goe_min_gap_sample,
    singular_envelope,
)
from .harness import (
    CellAggregate,
    SweepConfig,
    SweepResult,
    TrialRecord,
    aggregate_records,
    run_sweep,
    run_trial,
)
from .matcher import (
    MatchResult,
    SignMatrix,
    enumerate_signs,
    match_bases,
    match_distance,
    similarity_matrix,
    umeyama_match,
)
from .metrics import RecoveryScore, ThresholdMode, score, threshold_sigma
from .model import (
    ModelInstance,
    ModelKind,
    ObservationPair,
    Permutation,
    TruthMode,
    derive_seed,
    observe_distance,
    observe_dot,
    sample_instance,
)
from .spectral import CenteredGram, SpectralBasis, SvdFactors, double_center, svd_factor, top_d_eigs

__version__ = "0.1.0"

__all__ = [
    "AlignmentReport",
    "AssignmentSolution",
    "CellAggregate",
    "CenteredGram",
    "ContainerFormatError",
    "EnvelopeReport",
    "GapReport",
    "MatchResult",
    "ModelInstance",
    "ModelKind",
    "ObservationPair",
    "Permutation",
    "RecoveryScore",
    "ResidualRow",
    "SignMatrix",
    "SpectralBasis",
    "SvdFactors",
    "SweepConfig",
    "SweepResult",
    "ThresholdMode",
    "TrialRecord",
    "TruthMode",
    "aggregate_records",
    "basis_residual_sweep",
    "best_sign_alignment",
    "brute_force_lap",
    "derive_seed",
    "double_center",
    "enumerate_signs",
    "goe_min_gap_sample",
    "load_instance",
    "match_bases",
    "match_distance",
    "observe_distance",
    "observe_dot",
    "read_matrix",
    "run_sweep",
    "run_trial",
    "sample_instance",
    "save_instance",
    "score",
    "similarity_matrix",
    "singular_envelope",
    "solve_max_lap",
    "svd_factor",
    "threshold_sigma",
    "top_d_eigs",
    "umeyama_match",
    "write_matrix",
]
