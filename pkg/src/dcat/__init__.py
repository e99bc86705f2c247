"""Finite double categories, enrichments over computable bases, and their translations."""

from .base import RelSet, SetSet, SpanSet, get_base, rel_set, set_set, span_set
from .doublecat import (
    FinDoubleCategory,
    MonoidalFinDoubleCategory,
    diagonal_category,
    globular_horizontal,
    globular_vertical,
    horizontal_category,
    is_framed,
    is_inclusion,
    is_thin,
    iso_search,
    make_double,
    squares_double_category,
    terminal_double_category,
    transversal,
    validate_double_category,
    validate_monoidal,
    vertical_opposite,
)
from .dsl import Document, parse, parse_file, render, to_dsl
from .enrich import EnrichedDoubleCategory, enriched_hom, trivial_enrichment, validate_enrichment
from .errors import DcatError
from .fincat import FinCategory, FinFunctor, validate_category
from .groth import grothendieck
from .report import ValidationReport, Violation
from .translate import double_to_span, framed_to_set, rel_to_thin, round_trip, thin_to_rel

__version__ = "0.1.0"
