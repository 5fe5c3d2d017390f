"""Matchings and rainbow matchings on direct products of uniform set systems."""

from .bounds import (
    BoundReport,
    Composition,
    averaging_bound,
    binom,
    check_ratio_inequality,
    claim1_bound,
    composition_bound,
    composition_min,
    composition_min_enumerated,
    emc_bound,
    overlapping_sum_bound,
    product_matching_bound,
    product_rainbow_bound,
    rainbow_threshold_bound,
)
from .constructions import (
    CoverSpec,
    build_clique_family,
    build_cover_family,
    random_family,
)
from .core import (
    Family,
    FamilyTuple,
    InputError,
    ProductSpace,
    ResourceError,
    edge_dominates,
    enumerate_space,
    read_family,
    vertex_precedes,
    write_family,
)
from .matching import (
    MatchingCertificate,
    has_rainbow_matching,
    is_s_overlapping,
    matching_number,
    verify_certificate,
)
from .montecarlo import (
    averaging_check,
    build_bipartite,
    concentration_run,
    rainbow_run,
    sample_matching,
)
from .search import max_family_with_matching_cap, max_rainbow_free_tuple, verify_theorem
from .shifting import ShiftLog, is_downward_closed, is_shifted, shift_once, shift_to_fixpoint
from .spectral import SpectrumReport, kneser_spectrum, mixing_audit, product_graph_spectrum

__version__ = "0.1.0"
