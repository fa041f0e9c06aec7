"""Numerical laboratory for symmetrized Cauchy-type kernels on graph curves."""
from .curve import CurveSpec, DomainError, curve_data, format_curve, parse_curve, point_at
from .geometry import DegenerateTripleError, Triple, admissible_order, menger_curvature_sq
from .kernels import KernelHandle, PhaseFunction, constant_phase, custom_phase, graph_phase, parse_kernel
from .symmetry import (h_functional, remainder_rh, s_im_graph, s_im_graph_terms, s_re_graph,
                       s_re_graph_terms, symmetrize)

__version__ = "0.1.0"

__all__ = [
    "CurveSpec", "DegenerateTripleError", "DomainError", "KernelHandle", "PhaseFunction", "Triple",
    "admissible_order", "constant_phase", "curve_data", "custom_phase", "format_curve",
    "graph_phase", "h_functional", "menger_curvature_sq", "parse_curve", "parse_kernel",
    "point_at", "remainder_rh", "s_im_graph", "s_im_graph_terms", "s_re_graph", "s_re_graph_terms",
    "symmetrize",
]
