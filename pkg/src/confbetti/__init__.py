"""Rational Betti numbers of unordered configuration spaces of manifolds."""
from .basis import (
    BigradedBasis,
    Monomial,
    enumerate_all,
    enumerate_basis,
    format_monomial,
    monomial_bigrade,
    monomial_length,
    multiply_monomials,
)
from .differential import (
    AlgebraElement,
    algebra_element,
    assemble_matrix,
    cell_images,
    d_generator,
    d_monomial,
)
from .engine import (
    BettiEngine,
    BettiTable,
    DiagonalRun,
    InternalConsistencyError,
    StabilizationReport,
    betti_number,
    betti_odd_closed,
    betti_table,
    detect_stabilization,
    e_infinity_dim,
    engine_for,
    stable_betti,
    vanishing_bound,
)
from .linalg import (
    RankProfile,
    RationalMatrix,
    UnusablePrimeError,
    rank,
    rank_modular,
    rank_profile_modular,
)
from .oracles import (
    CheckResult,
    OracleReport,
    check_d_squared,
    check_euler,
    check_reduction_equivalence,
    check_theorems,
    run_all,
)
from .rings import (
    BasisClass,
    GradedRing,
    RingElement,
    RingError,
    RingFormatError,
    RingValidationError,
    basis_element,
    dual_basis,
    element,
    euler_characteristic,
    multiply,
    parse_ring,
    ring_cp,
    ring_even_sphere,
    ring_product,
    ring_projective_bundle_cp2,
    ring_sphere,
    ring_surface,
    serialize_ring,
    validate_ring,
)
from .spaces import REGISTRY, resolve_space, space_names

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
