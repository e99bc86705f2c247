"""Translations between finite double categories and enrichments over the built-in bases."""

from itertools import product as cartesian

from .base import BaseSquare, FinSet, Fn, Rel, const_fn, multi, rel_set, set_set, span_set
from .doublecat import (
    FinDoubleCategory,
    companions,
    conjoints,
    is_framed,
    is_thin,
    iso_search,
    make_double,
    validate_double_category,
)
from .enrich import EnrichedDoubleCategory, thin_enrichment, validate_enrichment
from .errors import Ambiguous, InvalidInput, NotFramed, NotStrict, NotThin
from .fincat import FinCategory
from .groth import grothendieck


def _require_strict(d, what):
    if not d.is_strict():
        raise NotStrict(f"{what} needs a strict double category")


def _hom_sets(d):
    homs = {}
    for X, Y in cartesian(d.V.objects, repeat=2):
        homs[X, Y] = FinSet(tuple((u,) for u in sorted(d.hom_h(X, Y), key=repr)), 1)
    return homs


def _object_level(d, base, E_obj):
    one = base.unit_object()
    unit_obj = {X: Fn(one, E_obj[X, X], ((d.unit(X),),)) for X in d.V.objects}
    comp_obj = {}
    for X, Y, Z in cartesian(d.V.objects, repeat=3):
        dom = base.tensor_obj(E_obj[X, Y], E_obj[Y, Z])
        comp_obj[X, Y, Z] = Fn(dom, E_obj[X, Z], tuple((d.hcomp(w[0], w[1]),) for w in dom.elems))
    return unit_obj, comp_obj


def thin_to_rel(d: FinDoubleCategory, name=None) -> EnrichedDoubleCategory:
    """``E(X, Y)`` = horizontals ``X -> Y``; ``E(f, g)`` relates ``u, v`` when a square ``u => v`` sits over ``(f, g)``."""
    _require_strict(d, "thin_to_rel")
    if not is_thin(d):
        raise NotThin(f"{d.name or 'input'} has two squares on one frame")
    b = rel_set()
    V = d.V
    E_obj = _hom_sets(d)
    E_arr = {}
    for f, g in cartesian(V.arrows, repeat=2):
        pairs = frozenset(
            ((d.A.src[p],), (d.A.tgt[p],))
            for p in d.A.arrows
            if d.S.arr_map[p] == f and d.T.arr_map[p] == g
        )
        E_arr[f, g] = Rel(E_obj[V.src[f], V.src[g]], E_obj[V.tgt[f], V.tgt[g]], pairs)
    unit_obj, comp_obj = _object_level(d, b, E_obj)
    return thin_enrichment(b, V, E_obj, E_arr, unit_obj, comp_obj, name or f"rel({d.name})")


def rel_to_thin(e: EnrichedDoubleCategory, validate=True, name=None) -> FinDoubleCategory:
    """Thin double category with horizontals ``(X, Y, x)`` and a square ``(x, y, f, g)`` per related pair."""
    if e.base.name != "RelSet":
        raise InvalidInput(f"rel_to_thin expects a RelSet enrichment, got {e.base.name}")
    if validate:
        rep = validate_enrichment(e)
        if not rep.ok:
            raise InvalidInput(f"enrichment {e.name} does not validate", rep)
    V = e.V
    objs = [(X, Y, x) for X, Y in cartesian(V.objects, repeat=2) for x in e.E_obj[X, Y].elems]
    arrows, src, tgt = [], {}, {}
    for f, g in cartesian(V.arrows, repeat=2):
        for x, y in sorted(e.E_arr[f, g].pairs):
            a = ((V.src[f], V.src[g], x), (V.tgt[f], V.tgt[g], y), f, g)
            arrows.append(a)
            src[a], tgt[a] = a[0], a[1]
    identity = {o: (o, o, V.identity[o[0]], V.identity[o[1]]) for o in objs}
    out = {}
    for a in arrows:
        out.setdefault(a[0], []).append(a)
    comp = {}
    for a in arrows:
        for c in out.get(a[1], []):
            comp[a, c] = (a[0], c[1], V.comp[a[2], c[2]], V.comp[a[3], c[3]])
    A = FinCategory(tuple(objs), tuple(arrows), src, tgt, identity, comp, "A")
    S = ({o: o[0] for o in objs}, {a: a[2] for a in arrows})
    T = ({o: o[1] for o in objs}, {a: a[3] for a in arrows})

    def unit(X):
        return (X, X, e.unit_obj[X](()))

    U = ({X: unit(X) for X in V.objects}, {f: (unit(V.src[f]), unit(V.tgt[f]), f, f) for f in V.arrows})

    def hc(o, o2):
        X, Y, x = o
        Z = o2[1]
        return (X, Z, e.comp_obj[X, Y, Z](x + o2[2]))

    odot_obj = {(o, o2): hc(o, o2) for o in objs for o2 in objs if o[1] == o2[0]}
    odot_arr = {}
    by_left = {}
    for a in arrows:
        by_left.setdefault(a[2], []).append(a)
    for a in arrows:
        for c in by_left.get(a[3], []):
            odot_arr[a, c] = (hc(a[0], c[0]), hc(a[1], c[1]), a[2], c[3])
    return make_double(V, A, S, T, U, odot_obj, odot_arr, name=name or f"thin({e.name})")


def double_to_span(d: FinDoubleCategory, name=None) -> EnrichedDoubleCategory:
    """Multirelation ``E(f, g)(u, v)`` is the set of squares ``u => v`` over ``(f, g)``, as 1-tuples."""
    _require_strict(d, "double_to_span")
    b = span_set()
    V, A = d.V, d.A
    E_obj = _hom_sets(d)
    E_arr = {}
    for f, g in cartesian(V.arrows, repeat=2):
        fibers = {}
        for p in A.arrows:
            if d.S.arr_map[p] == f and d.T.arr_map[p] == g:
                fibers.setdefault(((A.src[p],), (A.tgt[p],)), set()).add((p,))
        E_arr[f, g] = multi(E_obj[V.src[f], V.src[g]], E_obj[V.tgt[f], V.tgt[g]], 1, fibers)
    unit_obj, comp_obj = _object_level(d, b, E_obj)

    def globular(top, bottom, mapping):
        return BaseSquare(
            top,
            bottom,
            b.vid(top.dom),
            b.vid(top.cod),
            frozenset(((x, y, w), mapping(w)) for x, y, w in top.entries()),
        )

    I_cell = {}
    for X, Y in cartesian(V.objects, repeat=2):
        top = b.hunit(E_obj[X, Y])
        I_cell[X, Y] = BaseSquare(
            top,
            E_arr[V.identity[X], V.identity[Y]],
            b.vid(E_obj[X, Y]),
            b.vid(E_obj[X, Y]),
            frozenset(((x, x, ()), (A.identity[x[0]],)) for x in E_obj[X, Y].elems),
        )
    C_cell = {}
    pairs = list(V.composable_pairs())
    for (f, f2), (g, g2) in cartesian(pairs, repeat=2):
        top = b.hcomp(E_arr[f, g], E_arr[f2, g2])
        C_cell[f, g, f2, g2] = globular(top, E_arr[V.comp[f, f2], V.comp[g, g2]], lambda w: (A.comp[w[0], w[2]],))
    U1 = b.hunit(b.unit_object())
    unit_arr = {}
    for f in V.arrows:
        X, X2 = V.src[f], V.tgt[f]
        unit_arr[f] = BaseSquare(
            U1, E_arr[f, f], unit_obj[X], unit_obj[X2], frozenset({(((), (), ()), (d.unit_sq(f),))})
        )
    comp_arr = {}
    for f, g, h in cartesian(V.arrows, repeat=3):
        X, Y, Z = V.src[f], V.src[g], V.src[h]
        X2, Y2, Z2 = V.tgt[f], V.tgt[g], V.tgt[h]
        top = b.tensor_h(E_arr[f, g], E_arr[g, h])
        comp_arr[f, g, h] = BaseSquare(
            top,
            E_arr[f, h],
            comp_obj[X, Y, Z],
            comp_obj[X2, Y2, Z2],
            frozenset(((x, y, w), (d.hcomp_sq(w[0], w[1]),)) for x, y, w in top.entries()),
        )
    return EnrichedDoubleCategory(
        b, V, E_obj, E_arr, I_cell, C_cell, unit_obj, unit_arr, comp_obj, comp_arr, name or f"span({d.name})"
    )


def _unique(items, what):
    if len(items) != 1:
        raise Ambiguous(f"{what}: expected exactly one, found {len(items)}")
    return items[0]


def framed_to_set(d: FinDoubleCategory, name=None) -> EnrichedDoubleCategory:
    """``E(f, g)`` sends ``u`` to ``conj(f) . u . comp(g)``, the companion transport.

    Each frame ``(u, f, g)`` must carry exactly one square, whose bottom is
    that transport; anything else raises Ambiguous.
    """
    _require_strict(d, "framed_to_set")
    if not is_framed(d):
        raise NotFramed(f"{d.name or 'input'} is not framed")
    b = set_set()
    V, A = d.V, d.A
    comp_of = {g: _unique(companions(d, g), f"companion of {g!r}") for g in V.arrows}
    conj_of = {f: _unique(conjoints(d, f), f"conjoint of {f!r}") for f in V.arrows}
    E_obj = _hom_sets(d)
    below = {}
    for p in A.arrows:
        below.setdefault((A.src[p], d.S.arr_map[p], d.T.arr_map[p]), []).append(p)
    E_arr = {}
    for f, g in cartesian(V.arrows, repeat=2):
        dom, cod = E_obj[V.src[f], V.src[g]], E_obj[V.tgt[f], V.tgt[g]]
        images = []
        for (u,) in dom.elems:
            v = d.hcomp(d.hcomp(conj_of[f], u), comp_of[g])
            p = _unique(below.get((u, f, g), []), f"squares over ({u!r}, {f!r}, {g!r})")
            if A.tgt[p] != v:
                raise Ambiguous(f"square over ({u!r}, {f!r}, {g!r}) does not land on the transport {v!r}")
            images.append((v,))
        E_arr[f, g] = Fn(dom, cod, tuple(images))
    unit_obj, comp_obj = _object_level(d, b, E_obj)
    return thin_enrichment(b, V, E_obj, E_arr, unit_obj, comp_obj, name or f"set({d.name})")


def round_trip(d: FinDoubleCategory, via: str, max_objects=None):
    """Translate ``d`` and come back; returns ``(enrichment, double category, iso or None)``."""
    to = {"rel": thin_to_rel, "span": double_to_span, "set": framed_to_set}[via]
    e = to(d)
    rep = validate_enrichment(e)
    if not rep.ok:
        raise InvalidInput(f"translation to {via} does not validate", rep)
    back = rel_to_thin(e) if via == "rel" else grothendieck(e)
    if not validate_double_category(back).ok:
        raise InvalidInput("round-trip output does not validate", validate_double_category(back))
    kw = {} if max_objects is None else {"max_objects": max_objects}
    return e, back, iso_search(d, back, **kw)
