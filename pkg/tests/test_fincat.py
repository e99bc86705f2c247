from dataclasses import replace

import pytest
from hypothesis import given

from dcat.corpus import chain3, cyclic, iso_pair, small_categories, walking_arrow
from dcat.doublecat import squares_double_category
from dcat.errors import DanglingId
from dcat.fincat import (
    FinCategory,
    FinFunctor,
    FinNatIso,
    compose_functors,
    empty_category,
    identity_functor,
    identity_nat_iso,
    product,
    pullback_category,
    terminal_category,
    validate_category,
    validate_functor,
    validate_nat_iso,
)
from dcat.doublecat import category_iso

from .strategies import posets


def comp_mutations(c):
    """Endpoint-preserving single-entry corruptions of the composition table."""
    for key, val in c.comp.items():
        for other in c.arrows:
            if other != val and c.src[other] == c.src[val] and c.tgt[other] == c.tgt[val]:
                yield key, other, replace(c, comp={**c.comp, key: other})


def test_terminal_and_walking_arrow_validate():
    assert validate_category(terminal_category()).ok
    assert validate_category(walking_arrow()).ok


def test_redirected_unit_composite_names_right_unit():
    two = walking_arrow()
    bad = replace(two, comp={**two.comp, ("t", "id_1"): "id_0"})
    rep = validate_category(bad)
    assert not rep.ok
    assert ("t",) in [v.instance for v in rep.by_axiom("right-unit")]


def test_dangling_reference_raises():
    two = walking_arrow()
    bad = replace(two, comp={**two.comp, ("t", "id_1"): "ghost"})
    with pytest.raises(DanglingId):
        validate_category(bad)


@pytest.mark.parametrize("c", small_categories(), ids=lambda c: c.name)
def test_corpus_categories_validate(c):
    assert validate_category(c).ok


def test_product_sizes():
    two = walking_arrow()
    p = product(two, two)
    assert (len(p.objects), len(p.arrows)) == (4, 9)
    assert validate_category(p).ok
    assert category_iso(product(terminal_category(), two), two) is not None
    assert product(empty_category(), two).objects == ()


def test_pullback_of_sq2():
    # one object per pair (u, v) with T(u) = S(v): (id_0, id_0), (id_0, t), (t, id_1), (id_1, id_1)
    d = squares_double_category(walking_arrow())
    pb, p1, p2 = pullback_category(d.S, d.T)
    assert len(pb.objects) == 4
    assert len(pb.arrows) == 10
    assert validate_category(pb).ok
    for x in pb.objects:
        assert d.T.obj_map[p1.obj_map[x]] == d.S.obj_map[p2.obj_map[x]]


def test_pullback_of_identities_is_diagonal():
    c = chain3()
    i = identity_functor(c)
    pb, _, _ = pullback_category(i, i)
    assert len(pb.objects) == len(c.objects)
    assert len(pb.arrows) == len(c.arrows)


def test_functor_and_nat_iso_checks():
    two = walking_arrow()
    const = FinFunctor(two, two, {"0": "0", "1": "0"}, {"id_0": "id_0", "id_1": "id_0", "t": "id_0"})
    ident = identity_functor(two)
    assert validate_functor(const).ok
    assert validate_functor(compose_functors(const, ident)).ok
    assert validate_nat_iso(identity_nat_iso(ident)).ok
    bad = FinNatIso(const, ident, {"0": "id_0", "1": "t"})
    assert "invertibility" in validate_nat_iso(bad).axioms
    I = iso_pair()
    swap = FinNatIso(identity_functor(I), identity_functor(I), {"0": "id_0", "1": "id_1"})
    assert validate_nat_iso(swap).ok


def test_non_functor_detected():
    two = walking_arrow()
    f = FinFunctor(two, two, {"0": "0", "1": "1"}, {"id_0": "id_0", "id_1": "id_1", "t": "id_0"})
    assert not validate_functor(f).ok


def test_some_group_mutations_are_valid_categories():
    # in Z2 = {e, x}, redirecting x;x from e to x gives the monoid ({e,x}, max), still a category
    z2 = cyclic(2)
    assert validate_category(replace(z2, comp={**z2.comp, (1, 1): 1})).ok


@given(posets())
def test_posets_validate_and_reject_every_comp_mutation(c):
    assert validate_category(c).ok
    for key, other, bad in comp_mutations(c):
        assert not validate_category(bad).ok, (key, other)


@given(posets())
def test_op_is_involution(c):
    assert validate_category(c.op()).ok
    assert c.op().op() == c


@given(posets(max_size=3), posets(max_size=2))
def test_products_validate(c1, c2):
    p = product(c1, c2)
    assert validate_category(p).ok
    assert len(p.arrows) == len(c1.arrows) * len(c2.arrows)


def test_build_adds_identities():
    c = FinCategory.build(["a"], name="One")
    assert c.arrows == ("id_a",)
    assert c.comp == {("id_a", "id_a"): "id_a"}
