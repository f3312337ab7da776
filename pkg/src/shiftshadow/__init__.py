"""Exact-arithmetic laboratory for shadowing and hyperspace dynamics on
shift spaces: eventually-periodic points, dyadic metrics, loop-graph
subshifts and their products, the unit-cube shift, finite compacta under
the Hausdorff metric, and a pseudo-orbit shadowing engine — every
comparison an exact rational."""

from .cubeshift import (
    BoxMembershipError,
    DBox,
    NonuniformityReport,
    PreconditionError,
    box_splice,
    contraction_time,
    dbox_diameter,
    nonuniform_witness,
    nonuniformity_report,
)
from .graphshift import (
    LoopGraph,
    ProductPoint,
    WalkError,
    apply_F,
    base_point,
    loop_switch_displacement,
    loop_switch_point,
    product_metric,
    splice_walks,
    validate_walk,
)
from .hyperspace import (
    CoveringReport,
    FiniteCompact,
    PairingError,
    PairSet,
    close_pairs,
    hausdorff,
    induced_map,
    splice_set,
    verify_covering,
)
from .seqspace import (
    BiSeq,
    ExactDist,
    SpaceMismatchError,
    UNIT,
    ValueSpace,
    agreement_index,
    constant_seq,
    periodic_seq,
    seq_metric,
    shift,
    splice,
    value_at,
    with_values,
)
from .shadowing import (
    IllegalPerturbationError,
    MembershipReport,
    PseudoOrbit,
    ShadowRepairError,
    ShadowReport,
    estimate_contraction_deadline,
    perturb_orbit,
    rate_membership,
    shadow_point,
    verify_shadowing,
)
from .spaces import (
    ShiftSpace,
    SpliceError,
    distance_curve,
    point_agreement,
    point_dist,
    point_from_json,
    point_shift,
    point_to_json,
    splice_point,
    tail_certificate_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
