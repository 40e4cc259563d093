"""Generalized Lupas operators built on the Polya distribution with Pochhammer
k-symbol, their Kantorovich-Stancu modification and the bivariate tensor form.
"""
__version__ = "0.1.0"

from .core import gauss_legendre, pochhammer_k, pochhammer_k_signed_log, polya_weight_row
from .functions import CATALOG, CATALOG_2D, get_function, get_function_2d
from .operators import OperatorParams, eval_on_grid, evaluate

__all__ = [
    "__version__",
    "CATALOG",
    "CATALOG_2D",
    "OperatorParams",
    "eval_on_grid",
    "evaluate",
    "gauss_legendre",
    "get_function",
    "get_function_2d",
    "pochhammer_k",
    "pochhammer_k_signed_log",
    "polya_weight_row",
]
