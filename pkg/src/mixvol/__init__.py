"""Exact mixed volumes of lattice polytopes, cross-checked through
multigraded Hilbert functions and Samuel multiplicities, plus a
mixed-volume root-bound checker for sparse Laurent systems."""

from .bernstein import (
    BoundViolation,
    LaurentPoly,
    LaurentSystem,
    bernstein_bound,
    clear_denominators,
    count_torus_points_exhaustive,
    count_with_multiplicity,
    newton_polytope,
    verify_bernstein,
)
from .geometry import (
    LatticePolytope,
    convex_hull,
    cube,
    euclidean_volume,
    lattice_normalized_volume,
    minkowski_sum,
    mixed_volume,
    mixed_volume_ie,
    mixed_volume_interp,
    simplex,
)
from .groebner import (
    Poly,
    PrimeFieldIdeal,
    buchberger,
    general_element,
    graded_multiplicity,
    krull_dim,
    samuel_mixed_multiplicity,
    saturate,
    teissier_check,
)
from .hilbert import (
    MixedMultiplicityVector,
    MonomialConfiguration,
    MonomialSet,
    StabilizationError,
    diagonal_multiplicity,
    hilbert_value,
    mixed_multiplicity_fd,
    mixed_mults_via_diagonals,
    mv_via_algebra,
    probe_af,
    sumset_power,
)

__version__ = "0.1.0"
