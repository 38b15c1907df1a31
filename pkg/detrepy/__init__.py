"""detrepy: determinantal representations and the image of the principal minor map."""

from .action import GroupElement, SL2, act_on_matrix, act_on_poly
from .counterexamples import family, first_variable_matrix, moving_variable_matrix, verify_family
from .detrep import (
    DetRep,
    MinorVector,
    algorithm1,
    charpoly,
    hermitian_pencil_rep,
    is_in_image_general,
    is_in_image_hermitian,
    minors_to_poly,
    necessary_conditions_hermitian,
    poly_to_minors,
    principal_minors,
    rep_from_g,
)
from .exactfield import FieldId, FieldValue, resolve_field
from .mpoly import Poly, parse_poly
from .rayleigh import delta, phi, res_k
from .squares import Certificate, certify_hermitian_square, hyperdet, ma_factorization

__all__ = [
    "FieldId",
    "FieldValue",
    "resolve_field",
    "Poly",
    "parse_poly",
    "GroupElement",
    "SL2",
    "act_on_poly",
    "act_on_matrix",
    "delta",
    "res_k",
    "phi",
    "Certificate",
    "certify_hermitian_square",
    "ma_factorization",
    "hyperdet",
    "MinorVector",
    "DetRep",
    "principal_minors",
    "minors_to_poly",
    "poly_to_minors",
    "charpoly",
    "rep_from_g",
    "algorithm1",
    "is_in_image_hermitian",
    "is_in_image_general",
    "necessary_conditions_hermitian",
    "hermitian_pencil_rep",
    "family",
    "first_variable_matrix",
    "moving_variable_matrix",
    "verify_family",
]

__version__ = "1.0.0"
