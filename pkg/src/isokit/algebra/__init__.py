"""Exact arithmetic foundation: scalars, parameter polynomials, series."""

from .poly import (MonomialOrder, ParamPoly, auto_weight, auto_weights,
                   grevlex_order, lex_order, radical_tag, weighted_grevlex,
                   weighted_lex)
from .scalars import (MixedRadicalError, QuadNum, RAT_ONE, RAT_ZERO, Rat,
                      scalar_float, scalar_is_zero, scalar_sign, scalar_sqrt,
                      scalar_str)
from .series import DEFAULT_ORDER, XSeries

__all__ = [
    "MonomialOrder", "ParamPoly", "auto_weight", "auto_weights",
    "grevlex_order", "lex_order", "radical_tag", "weighted_grevlex",
    "weighted_lex", "MixedRadicalError", "QuadNum", "RAT_ONE", "RAT_ZERO",
    "Rat", "scalar_float", "scalar_is_zero", "scalar_sign", "scalar_sqrt",
    "scalar_str", "DEFAULT_ORDER", "XSeries",
]
