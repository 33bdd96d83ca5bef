"""Trace calculus for finitely generated subgroups of SL(2,C).

Symbolically reduces the trace of any group word to an exact polynomial in
basis traces, reconstructs generator tuples up to conjugacy from reduced
trace coordinates, certifies trace-preserving homomorphisms as conjugations
(or exposes the degenerate families where this fails), and solves relator
trace equations tr(W) = +-2 locally.
"""

__version__ = "0.1.0"

from .errors import TraceEngineError
from .homcheck import (
    HomCandidate,
    HomVerdict,
    TraceCheckReport,
    VerdictKind,
    WordSet,
    check_relators,
    check_trace_preserving,
    classify,
)
from .normalize import (
    CanonicalPair,
    conjugator_between,
    match_third_element,
    normalize_pair,
)
from .reconstruct import (
    ReconstructedGroup,
    TraceCoordinates,
    extract_coordinates,
    reconstruct_group,
    swap_roles,
    theorem3_vars,
    undo_swap,
)
from .relator import (
    LocalSolution,
    RelatorEquation,
    RelatorSign,
    differentiate,
    proviso_scan,
    solve_for_variable,
)
from .sl2 import (
    DET_TOL,
    ENTRY_TOL,
    INFINITY,
    TRACE_TOL,
    FixedPointKind,
    FixedPointSet,
    Mat2C,
    evaluate_word,
    fixed_points,
    inverse,
    mul,
    shares_fixed_point,
    trace,
)
from .tracepoly import (
    BasisVar,
    TracePoly,
    basis_for,
    evaluate_poly,
    reduce_trace,
    var_name,
)
from .words import CyclicWord, FreeWord

__all__ = [
    "BasisVar",
    "CanonicalPair",
    "CyclicWord",
    "DET_TOL",
    "ENTRY_TOL",
    "FixedPointKind",
    "FixedPointSet",
    "FreeWord",
    "HomCandidate",
    "HomVerdict",
    "INFINITY",
    "LocalSolution",
    "Mat2C",
    "ReconstructedGroup",
    "RelatorEquation",
    "RelatorSign",
    "TRACE_TOL",
    "TraceCheckReport",
    "TraceCoordinates",
    "TraceEngineError",
    "TracePoly",
    "VerdictKind",
    "WordSet",
    "basis_for",
    "check_relators",
    "check_trace_preserving",
    "classify",
    "conjugator_between",
    "differentiate",
    "evaluate_poly",
    "evaluate_word",
    "extract_coordinates",
    "fixed_points",
    "inverse",
    "match_third_element",
    "mul",
    "normalize_pair",
    "proviso_scan",
    "reconstruct_group",
    "reduce_trace",
    "shares_fixed_point",
    "solve_for_variable",
    "swap_roles",
    "theorem3_vars",
    "trace",
    "undo_swap",
    "var_name",
]
