"""Jets, Frobenius-Stickelberger identities and Lagrange inversion."""

from .errors import LagjetError
from .expr import jet_from_expr, parse, to_source
from .jet import Jet, jet_compose
from .lagrange import invert, lag_coeff, lag_series, product_identity, tree_coeffs
from .phi import phi
from .scalar import EXACT, FLOAT
from .verify import SUITES, run_suite

__all__ = [
    "EXACT",
    "FLOAT",
    "SUITES",
    "Jet",
    "LagjetError",
    "invert",
    "jet_compose",
    "jet_from_expr",
    "lag_coeff",
    "lag_series",
    "parse",
    "phi",
    "product_identity",
    "run_suite",
    "to_source",
    "tree_coeffs",
]

__version__ = "0.1.0"
