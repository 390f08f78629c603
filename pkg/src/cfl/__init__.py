"""Exact tools for the center problem of ``dv/dx = sum_i a_i(x) v^(i+1)`` on ``[0, 2*pi]``."""

from .coeffs import CoeffSeq, PiecewiseCoeff, coeff_eval, coeff_integral, coeff_tilde
from .exppoly import ExpPoly, ep_affine, ep_antiderivative, ep_mul
from .group import concat, equivalent_up_to, in_Xstar, inverse
from .integrals import iterated_integral, moment
from .polar import (
    AlphaWeight,
    PlanarField,
    check_alpha_homogeneous,
    param_count,
    polar_reduce,
    trig_restrict,
)
from .returnmap import (
    CenterVerdict,
    CrossCheckError,
    NumericFailure,
    center_check,
    comb_coefficient,
    numeric_radius,
    return_coeffs_iterated,
    return_coeffs_transport,
    return_map_numeric,
)
from .scalar import PI, Scalar, parse_scalar
from .series import ReturnSeries, series_compose, series_inverse
from .words import MomentSpec, compositions, moment_shuffle_expand, shuffle

__version__ = "0.1.0"

__all__ = [
    "AlphaWeight",
    "CenterVerdict",
    "CoeffSeq",
    "CrossCheckError",
    "ExpPoly",
    "MomentSpec",
    "NumericFailure",
    "PI",
    "PiecewiseCoeff",
    "PlanarField",
    "ReturnSeries",
    "Scalar",
    "center_check",
    "check_alpha_homogeneous",
    "coeff_eval",
    "coeff_integral",
    "coeff_tilde",
    "comb_coefficient",
    "compositions",
    "concat",
    "ep_affine",
    "ep_antiderivative",
    "ep_mul",
    "equivalent_up_to",
    "in_Xstar",
    "inverse",
    "iterated_integral",
    "moment",
    "moment_shuffle_expand",
    "numeric_radius",
    "param_count",
    "parse_scalar",
    "polar_reduce",
    "return_coeffs_iterated",
    "return_coeffs_transport",
    "return_map_numeric",
    "series_compose",
    "series_inverse",
    "shuffle",
    "trig_restrict",
]
