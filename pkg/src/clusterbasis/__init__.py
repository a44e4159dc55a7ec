"""Integral differentials and v(λ) of semistable hyperelliptic curves from
their cluster pictures, in exact arithmetic."""

from .errors import InputError, ValidationError
from .exact import INFINITY, check_prime, eval_p_expr, parse_p_expr, parse_rational, val_p
from .cluster import (ClusterNode, ClusterPicture, IntegralityReport,
                      build_picture_from_roots, validate_integrality)
from .notation import (NotationError, parse_picture, picture_from_json, picture_to_json,
                       print_picture)
from .basis import (BasisResult, BasisStep, basis_sequence, gamma_counts, vanishing_bound)
from .lambda_formula import (DiscResult, LambdaResult, disc_result,
                             disc_valuation_from_picture, disc_valuation_from_roots,
                             hyperdisc_order, kausz_lambda8, lambda8, lambda_result)
from .transforms import TransformSpec, parse_op
from .harness import CheckReport, EnumSpec, cross_validate, enumerate_pictures, run_check

__version__ = "0.1.0"

__all__ = [
    "INFINITY", "BasisResult", "BasisStep", "CheckReport", "ClusterNode", "ClusterPicture",
    "DiscResult", "EnumSpec", "InputError", "IntegralityReport", "LambdaResult",
    "NotationError", "TransformSpec", "ValidationError", "basis_sequence",
    "build_picture_from_roots", "check_prime", "cross_validate", "disc_result",
    "disc_valuation_from_picture", "disc_valuation_from_roots", "enumerate_pictures",
    "eval_p_expr", "gamma_counts", "hyperdisc_order", "kausz_lambda8", "lambda8",
    "lambda_result", "parse_op", "parse_p_expr", "parse_picture", "parse_rational",
    "picture_from_json", "picture_to_json", "print_picture", "run_check", "val_p",
    "validate_integrality", "vanishing_bound",
]
