"""Exact sl2 orbit calculus and normal forms for nilpotent vector fields."""

from .cgc import (cgc_3j, invert_tensor, lambda_coeff, orbit_transvectant, product_orbit,
                  transvectant, transvectant_norm_sq)
from .exactnum import Rational, binom, factorial, format_rational, parse_rational
from .liealg import (LieComb, OrbitElement, bracket, bracket_filtered, comb_bracket,
                     comb_to_vectorfield, parse_element)
from .normalform import (NFProblem, NFReport, apply_transform, detect_leading, first_level,
                         normal_form, second_level, solve_generator_chain, third_level)
from .polyvf import CoordPoly, VectorField, oracle_bracket
from .symcoeff import ParamPoly, parse_ppoly

__all__ = [
    "cgc_3j", "invert_tensor", "lambda_coeff", "orbit_transvectant", "product_orbit",
    "transvectant", "transvectant_norm_sq", "Rational", "binom", "factorial",
    "format_rational", "parse_rational", "LieComb", "OrbitElement", "bracket",
    "bracket_filtered", "comb_bracket", "comb_to_vectorfield", "parse_element",
    "NFProblem", "NFReport", "apply_transform", "detect_leading", "first_level",
    "normal_form", "second_level", "solve_generator_chain", "third_level",
    "CoordPoly", "VectorField", "oracle_bracket", "ParamPoly", "parse_ppoly",
]

__version__ = "0.1.0"
