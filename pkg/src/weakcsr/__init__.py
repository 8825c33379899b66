"""Exact max-plus matrix powers and bounds on when they turn periodic."""

__version__ = "0.1.0"

from .core import (BOTTOM, DivergentStarError, Matrix, Vector, kleene_star,
                   mat_mul, mat_oplus, mat_power, mat_vec, scalar)
from .csr import (csr_decomposition, csr_product, csr_terms, run_scheme,
                  scheme_cycle_threshold, scheme_hartmann_arguelles,
                  scheme_nachtigall)
from .spectral import (critical_graph, is_max_balanced, max_balance,
                       max_cycle_mean, select_representing, visualize)

__all__ = [
    "BOTTOM", "DivergentStarError", "Matrix", "Vector", "kleene_star", "mat_mul",
    "mat_oplus", "mat_power", "mat_vec", "scalar", "csr_decomposition", "csr_product",
    "csr_terms", "run_scheme", "scheme_cycle_threshold", "scheme_hartmann_arguelles",
    "scheme_nachtigall", "critical_graph", "is_max_balanced", "max_balance",
    "max_cycle_mean", "select_representing", "visualize",
]
