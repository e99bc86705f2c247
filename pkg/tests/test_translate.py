import pytest

from dcat.corpus import framed_corpus, iso_pair, strict_double_corpus, thin_corpus, walking_arrow, weak_example
from dcat.doublecat import is_thin, iso_search, squares_double_category, units_double_category, validate_double_category
from dcat.enrich import validate_enrichment
from dcat.errors import NotFramed, NotStrict, NotThin
from dcat.groth import grothendieck
from dcat.translate import double_to_span, framed_to_set, rel_to_thin, round_trip, thin_to_rel


def test_rel_round_trip_sq2():
    d = squares_double_category(walking_arrow())
    e, back, iso = round_trip(d, "rel")
    assert validate_enrichment(e).ok
    assert iso is not None
    assert iso_search(rel_to_thin(thin_to_rel(d)), d) is not None


def test_span_round_trip_sq2():
    d = squares_double_category(walking_arrow())
    _, _, iso = round_trip(d, "span")
    assert iso is not None


def test_span_identity_fibers_are_globular_endosquares():
    d = squares_double_category(iso_pair())
    e = double_to_span(d)
    for u in d.A.objects:
        X, Y = d.S.obj_map[u], d.T.obj_map[u]
        fib = e.E_arr[d.V.identity[X], d.V.identity[Y]].fiber((u,), (u,))
        globular = [
            p
            for p in d.A.arrows
            if d.A.src[p] == d.A.tgt[p] == u and d.S.arr_map[p] == d.V.identity[X] and d.T.arr_map[p] == d.V.identity[Y]
        ]
        assert len(fib) == len(globular)


def test_sq2_is_not_framed():
    with pytest.raises(NotFramed):
        framed_to_set(squares_double_category(walking_arrow()))
    with pytest.raises(NotFramed):
        framed_to_set(units_double_category(walking_arrow()))


@pytest.mark.parametrize("d", framed_corpus(), ids=lambda d: d.name)
def test_set_round_trip_on_framed(d):
    e = framed_to_set(d)
    assert validate_enrichment(e).ok
    assert iso_search(grothendieck(e), d) is not None


def test_preconditions():
    with pytest.raises(NotStrict):
        double_to_span(weak_example())
    with pytest.raises(NotThin):
        thin_to_rel(next(d for d in strict_double_corpus() if not is_thin(d)))


@pytest.mark.parametrize("d", thin_corpus()[:10], ids=lambda d: d.name)
def test_thin_round_trips(d):
    assert iso_search(rel_to_thin(thin_to_rel(d)), d, 200) is not None


@pytest.mark.parametrize("d", [d for d in strict_double_corpus() if len(d.A.arrows) <= 8], ids=lambda d: d.name)
def test_span_round_trips(d):
    back = grothendieck(double_to_span(d))
    assert validate_double_category(back).ok
    assert iso_search(d, back, 200) is not None
