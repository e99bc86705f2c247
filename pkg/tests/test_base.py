from itertools import product as cartesian

import pytest
from hypothesis import given, strategies as st

from dcat.base import (
    UNIT_SET,
    BaseSquare,
    FinSet,
    Fn,
    Rel,
    SpanSet,
    fset,
    get_base,
    multi,
    rel_set,
    set_set,
    span_set,
    spot_check_base,
)
from dcat.errors import EnumerationBound, SizeBoundExceeded

from .strategies import fin_sets, relations


def test_fin_set_shapes():
    with pytest.raises(ValueError):
        FinSet((("a",), ("a", "b")), 1)
    with pytest.raises(ValueError):
        FinSet((("a",), ("a",)), 1)
    assert len(UNIT_SET) == 1 and UNIT_SET.rank == 0
    assert fset("ba").elems == (("a",), ("b",))


def test_tensor_is_concatenation():
    b = rel_set()
    ab, xy = fset("ab"), fset("xy")
    t = b.tensor_obj(ab, xy)
    assert t.rank == 2 and len(t) == 4 and ("a", "y") in t
    assert b.tensor_obj(UNIT_SET, ab) == ab
    assert b.tensor_obj(b.tensor_obj(ab, xy), ab) == b.tensor_obj(ab, b.tensor_obj(xy, ab))


@pytest.mark.parametrize("name", ["RelSet", "SpanSet", "SetSet"])
def test_bases_pass_spot_checks(name):
    b = get_base(name)
    rep = spot_check_base(b, [UNIT_SET, fset("a"), fset("ab")])
    assert rep.ok, str(rep)


def test_spot_check_size_bound():
    with pytest.raises(SizeBoundExceeded):
        spot_check_base(rel_set(), [fset("abcd")], max_set=3)


def test_span_composite_counts():
    # |(u;v)(x,z)| = sum over y of |u(x,y)| * |v(y,z)|
    b = span_set()
    A, B, C = fset("ab"), fset("xyz"), fset("pq")
    u = multi(A, B, 1, {(("a",), ("x",)): {("w1",), ("w2",)}, (("a",), ("y",)): {("w3",)}})
    v = multi(B, C, 1, {(("x",), ("p",)): {("k1",)}, (("y",), ("p",)): {("k2",), ("k3",)}})
    uv = b.hcomp(u, v)
    assert len(uv.fiber(("a",), ("p",))) == 2 * 1 + 1 * 2
    assert len(uv.fiber(("b",), ("p",))) == 0


def test_span_endo_squares_count():
    # squares u => u over identity verticals are families of fiber endomaps: prod |u(x,y)|^|u(x,y)|
    b = span_set()
    A, B = fset("ab"), fset("xyz")
    u = multi(A, B, 1, {(("a",), ("x",)): {("w1",), ("w2",)}, (("a",), ("y",)): {("w3",)}})
    assert len(b.squares(u, u, b.vid(A), b.vid(B))) == 2**2 * 1**1


def test_span_units_are_weak():
    b = span_set()
    A, B = fset("a"), fset("xy")
    u = multi(A, B, 1, {(("a",), ("x",)): {("w",)}})
    assert b.hcomp(b.hunit(A), u) != u
    lam = b.lunitor(u)
    # the unitor runs u => U ; u, sending witness a to x + a
    assert lam.top == u and lam.bottom == b.hcomp(b.hunit(A), u)
    assert b.vpaste(lam, b.lunitor_inv(u)) == b.vunit_sq(lam.top)


def test_rel_squares_are_thin():
    b = rel_set()
    A = fset("ab")
    u = Rel(A, A, frozenset({(("a",), ("b",))}))
    v = Rel(A, A, frozenset({(("b",), ("a",))}))
    swap = Fn(A, A, (("b",), ("a",)))
    assert b.squares(u, v, swap, swap) == [BaseSquare(u, v, swap, swap)]
    assert b.squares(u, u, swap, swap) == []


def test_set_squares_commute():
    b = set_set()
    A = fset("ab")
    const_a = Fn(A, A, (("a",), ("a",)))
    ident = b.vid(A)
    assert b.squares(ident, ident, const_a, const_a)
    assert not b.squares(ident, const_a, ident, ident)


def test_enumeration_bound():
    b = set_set(limit=10)
    with pytest.raises(EnumerationBound):
        b.verticals(fset("abc"), fset("abc"))


class _LossySpanSet(SpanSet):
    """Composition that forgets every fiber but the first; used to check the spot checks bite."""

    def hcomp(self, u, v):
        full = super().hcomp(u, v)
        fibers = sorted(full.fibers, key=repr)[:1]
        return type(full)(full.dom, full.cod, full.arity, frozenset(fibers))


def test_broken_composer_is_caught():
    rep = spot_check_base(_LossySpanSet(), [UNIT_SET, fset("a"), fset("ab")])
    assert not rep.ok


@given(fin_sets(), fin_sets(), fin_sets(), st.data())
def test_rel_composition_associative_and_unital(a, b_, c, data):
    b = rel_set()
    u = Rel(a, b_, data.draw(relations(a, b_)))
    v = Rel(b_, c, data.draw(relations(b_, c)))
    w = Rel(c, a, data.draw(relations(c, a)))
    assert b.hcomp(b.hcomp(u, v), w) == b.hcomp(u, b.hcomp(v, w))
    assert b.hcomp(b.hunit(a), u) == u == b.hcomp(u, b.hunit(b_))


@given(fin_sets(max_size=2), fin_sets(max_size=2), st.data())
def test_span_fiber_counts_match_oracle(a, c, data):
    b = span_set()
    mid = fset("xy")
    def rand_multi(dom, cod):
        fibers = {}
        for x, y in cartesian(dom.elems, cod.elems):
            k = data.draw(st.integers(0, 2))
            fibers[x, y] = {(f"{x[0]}{y[0]}{i}",) for i in range(k)}
        return multi(dom, cod, 1, fibers)
    u, v = rand_multi(a, mid), rand_multi(mid, c)
    uv = b.hcomp(u, v)
    for x, z in cartesian(a.elems, c.elems):
        expected = sum(len(u.fiber(x, y)) * len(v.fiber(y, z)) for y in mid.elems)
        assert len(uv.fiber(x, z)) == expected
