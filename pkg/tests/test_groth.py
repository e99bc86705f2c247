import pytest

from dcat.base import get_base, rel_set
from dcat.corpus import MONOIDS, constant_monoid_enrichment, rel_corpus, set_corpus, span_corpus, walking_arrow
from dcat.doublecat import is_framed, is_thin, iso_search, squares_double_category, validate_double_category
from dcat.enrich import trivial_enrichment
from dcat.errors import EnumerationBound, InvalidInput
from dcat.fincat import terminal_category
from dcat.groth import groth_census, grothendieck
from dcat.translate import double_to_span, thin_to_rel

SQ2_CENSUS = {"objects": 2, "horizontals": 3, "squares": 6, "frames": 6, "max_squares_per_frame": 1}


def test_census_of_rel_sq2():
    assert groth_census(thin_to_rel(squares_double_category(walking_arrow()))) == SQ2_CENSUS


def test_census_of_span_sq2():
    assert groth_census(double_to_span(squares_double_category(walking_arrow()))) == SQ2_CENSUS


def test_round_trip_sq2():
    d = squares_double_category(walking_arrow())
    assert iso_search(grothendieck(thin_to_rel(d)), d) is not None
    assert iso_search(grothendieck(double_to_span(d)), d) is not None


@pytest.mark.parametrize("base", ["RelSet", "SpanSet", "SetSet"])
def test_trivial_enrichment_gives_terminal(base):
    d = grothendieck(trivial_enrichment(get_base(base)))
    assert validate_double_category(d).ok
    assert groth_census(trivial_enrichment(get_base(base)))["squares"] == 1


def test_constant_monoid_census():
    # one object, horizontals = elements, squares over id = one per element
    e = constant_monoid_enrichment(terminal_category(), *MONOIDS["Z3"], "Z3")
    c = groth_census(e)
    assert c["horizontals"] == 3 and c["squares"] == 3


@pytest.mark.parametrize("e", rel_corpus()[:12], ids=lambda e: e.name)
def test_rel_outputs_are_thin(e):
    d = grothendieck(e)
    assert validate_double_category(d).ok
    assert is_thin(d)
    assert all(len(v) <= 1 for v in d.frames.values())


@pytest.mark.parametrize("e", set_corpus()[:8], ids=lambda e: e.name)
def test_set_outputs_are_framed(e):
    assert is_framed(grothendieck(e))


def test_span_outputs_validate():
    for e in span_corpus()[:6]:
        assert validate_double_category(grothendieck(e)).ok


def test_invalid_input_refused():
    e = trivial_enrichment(rel_set())
    with pytest.raises(InvalidInput):
        grothendieck(e.replace(C_cell={}))


def test_square_bound():
    e = constant_monoid_enrichment(walking_arrow(), *MONOIDS["Z3"], "Z3")
    with pytest.raises(EnumerationBound):
        grothendieck(e, max_squares=3)
