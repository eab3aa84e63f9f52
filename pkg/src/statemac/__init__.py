"""Inner and outer rate-region bounds for a two-user MAC with degraded message
sets and state known non-causally at the encoder that sends only the common message.

Gaussian closed forms live in :mod:`statemac.gaussian` with a covariance oracle
in :mod:`statemac.oracle`; discrete channels are handled by
:mod:`statemac.discrete` and :mod:`statemac.search`.
"""
from .discrete import (
    DmChannel,
    FiniteDist,
    InnerFactorization,
    JointPmf,
    OuterFactorization,
    dm_inner_constraints,
    dm_outer_constraints,
    inner_joint,
    load_dm_channel,
    mutual_info,
    outer_joint,
    parse_dm_channel,
    random_channel,
    xor_channel,
)
from .fourier_motzkin import fm_equivalence_check, projected_system
from .gaussian import (
    DEFAULT_GRID,
    ChannelParams,
    GridSpec,
    InnerParams,
    OuterParams,
    common_message_capacity,
    helper_rate_bounds,
    inner_boundary,
    inner_constraints,
    outer_boundary,
    outer_constraints,
    region_pair,
)
from .geometry import (
    RateConstraints,
    RatePair,
    RegionBoundary,
    boundary_from_constraints,
    constraint_polygon,
    dominates,
    union_upper_boundary,
    upper_concave_envelope,
)
from .oracle import CovMatrix, assemble_inner_covariance, assemble_outer_covariance, gaussian_cmi
from .search import dm_inner_search, dm_outer_search

__version__ = "0.1.0"
