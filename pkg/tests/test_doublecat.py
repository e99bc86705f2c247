from dataclasses import replace
from itertools import product as cartesian

import pytest
from hypothesis import given

from dcat.corpus import (
    chain3,
    cyclic,
    iso_pair,
    monoid_double_category,
    small_categories,
    strict_double_corpus,
    walking_arrow,
    weak_example,
)
from dcat.doublecat import (
    category_iso,
    companions,
    conjoints,
    diagonal_category,
    globular_horizontal,
    globular_vertical,
    horizontal_category,
    is_framed,
    is_inclusion,
    is_thin,
    iso_search,
    relabel_double,
    squares_double_category,
    squares_monoidal,
    terminal_double_category,
    transversal,
    units_double_category,
    validate_2category,
    validate_double_category,
    validate_monoidal,
    vertical_opposite,
)
from dcat.errors import NotStrict, SizeBoundExceeded
from dcat.fincat import terminal_category, validate_category
from dcat.mutate import DOUBLE_TABLES, double_mutations

from .strategies import finite_monoids, posets


def commuting_quadruples(c):
    """Independent count of commutative squares u;g = f;v in ``c``."""
    n = 0
    for u, v, f, g in cartesian(c.arrows, repeat=4):
        if (
            c.src[u] == c.src[f]
            and c.tgt[u] == c.src[g]
            and c.tgt[f] == c.src[v]
            and c.tgt[g] == c.tgt[v]
            and c.comp[u, g] == c.comp[f, v]
        ):
            n += 1
    return n


# frozen from commuting_quadruples
SQUARE_COUNTS = {"1": 1, "2": 6, "3": 20, "I": 16, "D2": 2, "Z2": 8, "Z3": 27, "Span": 11, "Cospan": 11, "Par": 10, "Max2": 10}


@pytest.mark.parametrize("c", small_categories(), ids=lambda c: c.name)
def test_square_counts(c):
    assert commuting_quadruples(c) == SQUARE_COUNTS[c.name]
    d = squares_double_category(c)
    assert len(d.A.arrows) == SQUARE_COUNTS[c.name]
    assert validate_double_category(d).ok
    assert is_thin(d)
    assert d.is_strict()


@pytest.mark.parametrize("d", strict_double_corpus() + [weak_example()], ids=lambda d: d.name)
def test_corpus_validates(d):
    assert validate_double_category(d).ok


def test_terminal_is_sq_of_terminal():
    assert iso_search(terminal_double_category(), squares_double_category(terminal_category())) is not None


def test_weak_example_is_not_strict():
    w = weak_example()
    assert not w.is_strict()
    for f in (horizontal_category, diagonal_category, transversal, globular_horizontal):
        with pytest.raises(NotStrict):
            f(w)
    assert validate_2category(globular_vertical(w)).ok


def test_every_sq2_mutation_detected():
    d = squares_double_category(walking_arrow())
    n = 0
    for desc, m in double_mutations(d, DOUBLE_TABLES + ("S", "T", "coherence")):
        rep = validate_double_category(m)
        assert not rep.ok, desc
        assert rep.violations[0].axiom
        n += 1
    assert n == 214


def test_alpha_mutation_detected():
    d = squares_double_category(walking_arrow())
    muts = [(desc, m) for desc, m in double_mutations(d, ("coherence",)) if desc.startswith("alpha")]
    assert muts
    for desc, m in muts:
        assert not validate_double_category(m).ok, desc


def test_weak_coherence_mutation_detected():
    w = weak_example()
    rep = validate_double_category(replace(w, lam={**w.lam, "J": "j"}))
    assert not rep.ok


def test_horizontal_category_of_sq2():
    two = walking_arrow()
    assert category_iso(horizontal_category(squares_double_category(two)), two) is not None
    assert category_iso(horizontal_category(terminal_double_category()), terminal_category()) is not None


def test_diagonal_category_of_sq2():
    d = squares_double_category(walking_arrow())
    D = diagonal_category(d)
    assert validate_category(D).ok
    assert D.hom("0", "1")
    # identity tuple (id_X, U_X, U_id, U_id) is a two-sided unit
    for x in D.objects:
        f, u, phi, psi = D.identity[x]
        assert (f, u) == (d.V.identity[x], d.U.obj_map[x])
        assert phi == psi == d.U.arr_map[f]
        for a in D.arrows:
            if D.src[a] == x:
                assert D.comp[D.identity[x], a] == a
            if D.tgt[a] == x:
                assert D.comp[a, D.identity[x]] == a
    assert len(D.arrows) == 3


def test_globular_sq2():
    d = squares_double_category(walking_arrow())
    gh = globular_horizontal(d)
    assert validate_2category(gh).ok
    assert all(gh.cell_src[c] == gh.cell_tgt[c] for c in gh.cells)
    gv = globular_vertical(d)
    assert validate_2category(gv).ok
    assert all(gv.cell_src[c] == gv.cell_tgt[c] for c in gv.cells)
    assert len(gv.cells) == 3


def test_transversal_of_sq2():
    d = squares_double_category(walking_arrow())
    t = transversal(d)
    assert validate_double_category(t).ok
    assert len(t.A.objects) == 3
    assert iso_search(transversal(t), d) is not None
    assert iso_search(transversal(terminal_double_category()), terminal_double_category()) is not None


@pytest.mark.parametrize("d", strict_double_corpus() + [weak_example()], ids=lambda d: d.name)
def test_vertical_opposite_involution(d):
    v = vertical_opposite(d)
    assert validate_double_category(v).ok
    assert vertical_opposite(v) == d


def test_vertical_opposite_keeps_frames():
    # V and A are replaced by their opposites; S, T, U and the horizontal composite are unchanged
    d = squares_double_category(walking_arrow())
    v = vertical_opposite(d)
    assert v.V == d.V.op() and v.A == d.A.op()
    assert v.S.obj_map == d.S.obj_map
    assert iso_search(v, squares_double_category(walking_arrow().op()), 20) is None


def test_predicates():
    two = walking_arrow()
    sq2 = squares_double_category(two)
    assert is_thin(sq2) and is_inclusion(sq2)
    # t : 0 -> 1 has a companion but no conjoint, since Sq(2) has no horizontal 1 -|> 0
    assert companions(sq2, "t") and not conjoints(sq2, "t")
    assert not is_framed(sq2)
    assert not is_inclusion(units_double_category(two))
    t = terminal_double_category()
    assert is_thin(t) and is_inclusion(t) and is_framed(t)
    for g in (iso_pair(), cyclic(2), cyclic(3)):
        assert is_framed(squares_double_category(g))


def test_framed_implies_inclusion():
    for d in strict_double_corpus():
        if is_framed(d):
            assert is_inclusion(d)


def test_monoid_squares_not_thin():
    d = monoid_double_category([0, 1], lambda a, b: (a + b) % 2, 0)
    assert validate_double_category(d).ok
    assert not is_thin(d)


def test_iso_search():
    d = squares_double_category(chain3())
    assert iso_search(d, d) is not None
    assert iso_search(d, relabel_double(d)) is not None
    assert iso_search(squares_double_category(walking_arrow()), terminal_double_category()) is None
    with pytest.raises(SizeBoundExceeded):
        iso_search(d, d, max_objects=2)


def test_monoidal_squares():
    for c in (cyclic(2), cyclic(3)):
        assert validate_monoidal(squares_monoidal(c)).ok
    m = squares_monoidal(cyclic(2))
    other = next(u for u in m.carrier.A.objects if u != m.unitA)
    assert "unit-preservation" in validate_monoidal(replace(m, unitA=other)).axioms


@given(posets(max_size=3))
def test_sq_of_random_posets(c):
    d = squares_double_category(c)
    assert len(d.A.arrows) == commuting_quadruples(c)
    assert validate_double_category(d).ok
    assert is_thin(d) and is_inclusion(d)
    assert vertical_opposite(vertical_opposite(d)) == d


@given(finite_monoids())
def test_monoid_double_categories(m):
    els, mult, unit = m
    d = monoid_double_category(els, mult, unit)
    assert validate_double_category(d).ok
    assert horizontal_category(d).objects == ("*",)
