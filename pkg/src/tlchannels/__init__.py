"""Finite-N numerics for Temperley-Lieb quantum channels of O_N^+.

Construct Jones-Wenzl projectors, the Temperley-Lieb Stinespring
isometries and their flat cup approximants as concrete real matrices,
expose the induced channels with Kraus/Choi views, and measure the
distances and capacity brackets between them.
"""

from .qarith import (
    AdmissibleTriple,
    admissible_triples,
    check_admissible,
    irrep_dim,
    qdim,
    qfact,
    theta,
)
from .tensorkit import (
    CupVector,
    DenseOp,
    DimensionCapError,
    apply_kron_left,
    cup_vector,
    eigh,
    get_dim_cap,
    kron,
    op_norm,
    partial_trace,
    set_dim_cap,
    trace_norm,
)
from .jones_wenzl import (
    IrrepBasis,
    JWProjector,
    adjacent_cup_image,
    in_irrep,
    irrep_basis,
    jw_projector,
)
from .channels import (
    ChannelRec,
    IsometryRec,
    alpha_isometry,
    apply_channel,
    approx_channel_pair,
    choi,
    cptp_report,
    gamma_isometry,
    kraus_ops,
    tensor_with_identity,
    tl_channel_pair,
)
from .entropic import (
    CapacityBracket,
    Ensemble,
    capacity_bracket,
    coherent_information,
    entropy,
    holevo_chi,
    product_ensemble_bounds,
    witness_ensemble,
)
from .distances import (
    FitResult,
    GapReport,
    bures_upper,
    convergence_fit,
    diamond_lower,
    isometry_gap,
    projection_defect,
    projection_defect_numeric,
    projection_defect_squared,
    tensor_gap_check,
)

__version__ = "0.1.0"
