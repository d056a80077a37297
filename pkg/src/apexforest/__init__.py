"""Graphs without k+1 disjoint cycles: exact enumeration, blockers,
structure of the k = 1 class, generating functions and random sampling."""

from __future__ import annotations

__version__ = "0.1.0"

from .blockers import (
    BlockerCertificate,
    PackingWitness,
    certificate_ok,
    cycle_packing_number,
    is_apex_forest,
    is_blocker,
    is_in_ex_cycles,
    min_blocker,
    redundant_blocker,
    verify_redundant,
)
from .coloring import ColoringResult, chromatic_number, clique_number, coloring_invariants
from .constants import (
    GfConstants,
    apex_constant,
    connectivity_constant,
    tree_function_point,
    wheel_constants,
)
from .enumeration import (
    CountRecord,
    census,
    forest_count,
    forest_count_by_components,
    tree_count,
)
from .errors import NotABlockerError, NotInClassError, SizeGuardError, TruncationError
from .graph import (
    LabeledGraph,
    Multigraph,
    build_graph,
    components,
    is_connected,
    is_forest,
    parse_edge_list,
    spikes,
    topological_core,
    two_core,
)
from .samplers import (
    ApexConstruction,
    SeededRng,
    exact_uniform_ex,
    random_apex_construction,
    random_forest,
    random_tree,
)
from .series import RationalSeries, series_toolkit, wheel_series
from .structure import Ex2CClass, Ex2CLabel, classify_ex2c, ex2c_oracle_check

__all__ = [name for name in dir() if not name.startswith("_")]
