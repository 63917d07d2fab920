"""Geometry, norms, superlevel sets and inequality checks on the complex hyperbolic ball."""

from ._core import (
    ConfigError,
    Polynomial,
    decreasing_rearrangement,
    distribution_function,
    ell_integral,
    geodesic_ball_volume,
    geodesic_radius,
    geodesic_sphere_area,
    isoperimetric_model_check,
    isoperimetric_refined_check,
    norm,
    run_suite,
    sobolev_check,
    sobolev_constant,
    sup_representation,
    weak_type_margin,
    weighted_hardy,
)

__all__ = [
    "ConfigError",
    "Polynomial",
    "decreasing_rearrangement",
    "distribution_function",
    "ell_integral",
    "geodesic_ball_volume",
    "geodesic_radius",
    "geodesic_sphere_area",
    "isoperimetric_model_check",
    "isoperimetric_refined_check",
    "norm",
    "run_suite",
    "sobolev_check",
    "sobolev_constant",
    "sup_representation",
    "weak_type_margin",
    "weighted_hardy",
]
