"""Exact tools for poset saturation problems in the Boolean lattice."""

from .copies import (
    Embedding,
    creates_copy,
    find_almost_strong_copy,
    find_strong_copy,
    find_weak_copy,
)
from .family import GroundSpec, SetFamily, complement_family, containment_order, split_in_out, translate
from .constructions import ConstructionError, ConstructionResult, build
from .poset import Poset, all_posets, disjoint_union, has_uctp, make_named, structure
from .saturation import (
    SaturationReport,
    blow_up,
    dichotomy_scan,
    verify_almost_saturated,
    verify_external,
    verify_ordinary,
    verify_projective,
    verify_relaxed_projective,
    vee_structure_checks,
)
from .search import (
    SearchCapError,
    SearchOutcome,
    min_chain_partition,
    min_external,
    min_ordinary,
    min_projective,
    min_relaxed_projective,
    search,
    tabulate,
)

__version__ = "0.1.0"
