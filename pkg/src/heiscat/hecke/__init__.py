from .affine import AffineElement, normal_form
from .cyclo import CycloAlgebra, CycloElement, cyclo_reduce
from .expr import parse_hecke_expr

__all__ = [
    "AffineElement",
    "normal_form",
    "CycloAlgebra",
    "CycloElement",
    "cyclo_reduce",
    "parse_hecke_expr",
]
