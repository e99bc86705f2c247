import pytest

from dcat.base import Fn, Rel, get_base, rel_set
from dcat.corpus import MONOIDS, constant_monoid_enrichment, enrichment_corpus, walking_arrow
from dcat.doublecat import squares_double_category
from dcat.enrich import LAWS, enriched_hom, thin_cells, trivial_enrichment, validate_enrichment
from dcat.errors import InvalidInput, LawViolation
from dcat.fincat import terminal_category
from dcat.mutate import _reframe, enrichment_mutations
from dcat.translate import thin_to_rel


@pytest.mark.parametrize("base", ["RelSet", "SpanSet", "SetSet"])
def test_trivial_enrichments_validate(base):
    e = trivial_enrichment(get_base(base))
    assert validate_enrichment(e).ok
    assert enriched_hom(e).report.ok


def test_rel_enrichment_of_sq2():
    d = squares_double_category(walking_arrow())
    e = thin_to_rel(d)
    assert validate_enrichment(e).ok
    # E(X, Y) is the set of horizontals X -|> Y
    for (X, Y), s in e.E_obj.items():
        assert {x[0] for x in s} == {u for u in d.A.objects if d.S.obj_map[u] == X and d.T.obj_map[u] == Y}
    # E(f, g) relates u and v exactly when a square u => v over (f, g) exists
    for (f, g), r in e.E_arr.items():
        expected = {
            (d.A.src[p], d.A.tgt[p]) for p in d.A.arrows if d.S.arr_map[p] == f and d.T.arr_map[p] == g
        }
        assert {(x[0], y[0]) for x, y in r.pairs} == expected


def test_non_unital_composition_fails_T1():
    e = constant_monoid_enrichment(terminal_category(), *MONOIDS["Z2"], "Z2")
    assert validate_enrichment(e).ok
    ((key, m),) = e.comp_obj.items()
    const0 = Fn(m.dom, m.cod, tuple((0,) for _ in m.dom.elems))
    rep = validate_enrichment(_reframe(e, comp_obj={key: const0}))
    assert "T1" in rep.axioms


def test_enriched_hom_of_monoid():
    e = constant_monoid_enrichment(terminal_category(), *MONOIDS["Z3"], "Z3")
    h = enriched_hom(e)
    assert len(h.hom["*", "*"]) == 3


def test_invalid_enrichment_refused():
    e = trivial_enrichment(rel_set())
    (key,) = e.E_arr
    empty = Rel(e.E_arr[key].dom, e.E_arr[key].cod, frozenset())
    bad = e.replace(E_arr={key: empty})
    rep = validate_enrichment(bad)
    assert not rep.ok
    with pytest.raises(InvalidInput):
        enriched_hom(bad)
    with pytest.raises(LawViolation):
        rep.raise_if_failed()


def test_missing_cells_reported_not_raised():
    e = trivial_enrichment(rel_set())
    rep = validate_enrichment(e.replace(C_cell={}))
    assert "C-missing" in rep.axioms


def test_thin_cells_rebuild_the_same_enrichment():
    e = thin_to_rel(squares_double_category(walking_arrow()))
    cells = thin_cells(e.base, e.V, e.E_obj, e.E_arr, e.unit_obj, e.comp_obj)
    assert e.replace(**cells) == e


@pytest.mark.parametrize(
    "make",
    [lambda: trivial_enrichment(rel_set()), lambda: thin_to_rel(squares_double_category(walking_arrow()))],
    ids=["trivial", "rel-Sq2"],
)
def test_each_law_named_by_some_mutation(make):
    e = make()
    named = set()
    for _, m in enrichment_mutations(e):
        named |= validate_enrichment(m).axioms & set(LAWS)
    assert named == set(LAWS)


def test_corpus_size():
    c = enrichment_corpus()
    assert len(c) >= 50
    assert {e.base.name for e in c} == {"RelSet", "SpanSet", "SetSet"}
