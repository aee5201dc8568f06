"""Discretized spheres, antipodal-free covers and grid-level verification."""
from .chi import chi_decompose, chi_values, reconstruct
from .geometry import (
    TOL,
    Cap,
    CapUnion,
    Cover,
    CoverSet,
    VoronoiCell,
    angle,
    cover_from_json,
    cover_to_json,
    default_epsilon,
    distance_to_set,
    effective_epsilon,
    load_cover,
    membership,
    save_cover,
    unit_point,
)
from .grid import SphereGrid, circle_half, make_grid
from .search import (
    CheckReport,
    WitnessReport,
    calibrate_epsilon,
    check_antipodal_free,
    check_coverage,
    check_epsilon_claim,
    chi_support_matrix,
    compute_realized_samples,
    grid_samples,
    is_in_interval_closure,
    sample_at,
    scan,
    witness_search,
)
