"""Degree-8 circulant graphs of diameter k and the lattice reduction that certifies them."""

from .lattice_core import (
    ZERO,
    ConstructionError,
    LatticeSystem,
    Parity,
    Vec4,
    ball_size,
    build_system,
    det4,
    half_param,
    l1_norm,
    lies_between,
    order_formula,
    sign_pattern,
)
from .graph_verify import (
    CirculantGraph,
    DistanceProfile,
    build_circulant,
    cvp_oracle,
    diameter,
    distance_profile,
    verify_case_coverage,
    verify_covering,
)
from .quotient_iso import GeneratorSet, generator_set, project, verify_cyclic
from .reduction_engine import (
    AnchorViolation,
    Certificate,
    NoMatchingCase,
    between_anchor,
    format_word,
    replay_word,
    canonical_orthant,
    reduce,
    stage1_reduce,
    stage2_resolve,
    word_from_certificate,
)

__version__ = "0.1.0"
