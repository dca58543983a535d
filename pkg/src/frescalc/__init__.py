"""Exact computations with (a,b)-modules, frescos and their Bernstein polynomials."""

from .errors import DomainError, ExhaustedError, FrescalcError, ParseError
from .fresco import (
    AbModulePresentation,
    BernsteinPoly,
    FrescoPresentation,
    HomogeneousElement,
    bpoly_to_element,
    cofactor_poly,
    divide_right,
    element_to_bpoly,
    exact_sequence_bpoly,
    expand_presentation,
    is_geometric,
    reduce_mod_pi,
    roots_from_factors,
)
from .gaussmanin import MonomialInput, analyze
from .ncalg import NcElement, NcSeriesElement, TruncatedSeries, initial_form, normal_order
from .parser import evaluate, parse_expression, parse_polynomial
from .poles import LedgerFamily, PoleLedger, apply_generator, apply_series, check_fond3, maximal_pole, shift
from .saturation import saturate_bernstein

__version__ = "0.1.0"
