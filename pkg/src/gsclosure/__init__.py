"""The tower x_{i+1}^p + x_{i+1} = x_i^(p+1)/(x_i^p + x_i) over GF(p^2) and its Galois closure.

Exact finite-field arithmetic, generator/relation systems for the tower and
its closure, completely split point enumeration, symbolic identity checks and
the different/genus/ratio formulas.
"""

from .errors import TowerError
from .finite_field import (
    FieldCtx,
    FieldElement,
    artin_schreier_solve,
    check_norm_trace_identity,
    eval_wgh,
    field_arith,
    in_kminus,
    make_field,
    trace_norm,
    trace_zero_set,
)
from .funcfield import build_ring, equals, normalize
from .identities import (
    checklist,
    solve_delta,
    solve_eta,
    verify_g_shift,
    verify_lemma_relations,
    verify_reduced_generation,
)
from .points import (
    count_split_points,
    degree_via_fiber,
    enumerate_fiber,
    next_coordinate,
    sample_points,
    verify_split_values,
)
from .ramification import (
    deg_D,
    deg_L,
    genus_closure,
    hurwitz_check,
    path_different,
    ratio_bound,
    ratio_limit,
)
from .report import Report
from .tower import TowerSpec, classify_index, closure_tower, dependency_order, gs_tower

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "artin_schreier_solve",
    "build_ring",
    "check_norm_trace_identity",
    "checklist",
    "classify_index",
    "closure_tower",
    "count_split_points",
    "deg_D",
    "deg_L",
    "degree_via_fiber",
    "dependency_order",
    "enumerate_fiber",
    "equals",
    "eval_wgh",
    "field_arith",
    "FieldCtx",
    "FieldElement",
    "genus_closure",
    "gs_tower",
    "hurwitz_check",
    "in_kminus",
    "make_field",
    "next_coordinate",
    "normalize",
    "path_different",
    "ratio_bound",
    "ratio_limit",
    "Report",
    "sample_points",
    "solve_delta",
    "solve_eta",
    "TowerError",
    "TowerSpec",
    "trace_norm",
    "trace_zero_set",
    "verify_g_shift",
    "verify_lemma_relations",
    "verify_reduced_generation",
    "verify_split_values",
]
