"""Continued fractions with arbitrary elements and their geometry."""

from .cf_core import ProjectiveRatio, continuants, eval_cf, expand_rational, expand_real
from .errors import CollinearError, DegenerateError, DomainError, NumericalError
from .lattice_sail import integer_length, integer_sine, lls_of_sail, sail
from .polyline import Frame, Polyline, build, endpoint_pair, is_closed, lls_of, transform

__all__ = [
    "ProjectiveRatio", "continuants", "eval_cf", "expand_rational", "expand_real",
    "CollinearError", "DegenerateError", "DomainError", "NumericalError",
    "integer_length", "integer_sine", "lls_of_sail", "sail",
    "Frame", "Polyline", "build", "endpoint_pair", "is_closed", "lls_of", "transform",
]
