"""Border bases of zero-dimensional polynomial ideals over prime fields.

The package covers the full pipeline: exact sparse arithmetic, the
border basis engine with plain and oracle-guided expansion, random
instance sampling, training-sample extraction with two token formats,
and a benchmark harness.
"""

from .algebra import Context, Polynomial, format_polynomial, parse_polynomial
from .bba import BorderBasis, RunTrace, compute_border_basis
from .errors import BorderforgeError
from .obba import OracleConfig, run_obba
from .orderideal import OrderIdeal, universe

__all__ = [
    "BorderBasis",
    "BorderforgeError",
    "Context",
    "OracleConfig",
    "OrderIdeal",
    "Polynomial",
    "RunTrace",
    "compute_border_basis",
    "format_polynomial",
    "parse_polynomial",
    "run_obba",
    "universe",
]

__version__ = "0.1.0"
