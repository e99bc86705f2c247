"""Deterministic corpora of small categories, double categories and enrichments."""

import random
from itertools import product as cartesian

from .base import FinSet, Fn, Rel, rel_set, set_set
from .doublecat import (
    make_double,
    monoid_category,
    squares_double_category,
    terminal_double_category,
    units_double_category,
)
from .enrich import thin_enrichment
from .fincat import FinCategory, terminal_category
from .translate import double_to_span, framed_to_set, rel_to_thin, thin_to_rel


def cyclic(n, name=None):
    return monoid_category(range(n), lambda a, b: (a + b) % n, 0, name or f"Z{n}")


def walking_arrow():
    return FinCategory.build(["0", "1"], {"t": ("0", "1")}, name="2")


def chain3():
    return FinCategory.build(
        ["0", "1", "2"],
        {"a": ("0", "1"), "b": ("1", "2"), "ab": ("0", "2")},
        {("a", "b"): "ab"},
        name="3",
    )


def iso_pair():
    return FinCategory.build(
        ["0", "1"],
        {"i": ("0", "1"), "j": ("1", "0")},
        {("i", "j"): "id_0", ("j", "i"): "id_1"},
        name="I",
    )


def discrete(n, names=None):
    return FinCategory.build(list(names) if names else [str(k) for k in range(n)], name=f"D{n}")


def span_shape():
    return FinCategory.build(["x", "y", "z"], {"p": ("x", "y"), "q": ("x", "z")}, name="Span")


def cospan_shape():
    return FinCategory.build(["x", "y", "z"], {"p": ("x", "z"), "q": ("y", "z")}, name="Cospan")


def parallel_pair():
    return FinCategory.build(["0", "1"], {"s": ("0", "1"), "t": ("0", "1")}, name="Par")


def small_categories():
    """Categories with at most three objects used throughout the tests."""
    return [
        terminal_category(),
        walking_arrow(),
        chain3(),
        iso_pair(),
        discrete(2),
        cyclic(2),
        cyclic(3),
        span_shape(),
        cospan_shape(),
        parallel_pair(),
        monoid_category([0, 1], max, 0, "Max2"),
    ]


def groupoids():
    return [terminal_category(), cyclic(2), cyclic(3), iso_pair(), discrete(2)]


def monoid_double_category(elements, mult, unit, name="M"):
    """One object, one horizontal, squares the elements of a commutative monoid."""
    M = monoid_category(elements, mult, unit, "A")
    A = M.relabel({"*": "h"}, {a: a for a in M.arrows}, "A")
    V = terminal_category()
    S = ({"h": "*"}, {a: "id_*" for a in A.arrows})
    U = ({"*": "h"}, {"id_*": unit})
    odot_obj = {("h", "h"): "h"}
    odot_arr = {(a, b): mult(a, b) for a in A.arrows for b in A.arrows}
    return make_double(V, A, S, S, U, odot_obj, odot_arr, name=name)


def weak_example():
    """A non-strict double category: units compose to a different, isomorphic horizontal.

    ``V`` is terminal; horizontals are ``I`` and ``J`` with an isomorphism
    ``j: I => J``; ``U(*) = J`` and every horizontal composite is ``I``.
    """
    A = FinCategory.build(
        ["I", "J"],
        {"j": ("I", "J"), "k": ("J", "I")},
        {("j", "k"): "id_I", ("k", "j"): "id_J"},
        name="A",
    )
    V = terminal_category()
    S = ({"I": "*", "J": "*"}, {a: "id_*" for a in A.arrows})
    U = ({"*": "J"}, {"id_*": "id_J"})
    odot_obj = {(u, v): "I" for u in A.objects for v in A.objects}
    odot_arr = {(p, q): "id_I" for p in A.arrows for q in A.arrows}
    lam = {"I": "id_I", "J": "k"}
    rho = {"I": "id_I", "J": "k"}
    return make_double(V, A, S, S, U, odot_obj, odot_arr, lam, rho, name="Weak")


def strict_double_corpus():
    """Strict double categories, each with at most a few dozen squares."""
    out = [terminal_double_category()]
    out += [squares_double_category(c) for c in small_categories()]
    out.append(units_double_category(walking_arrow(), "Units(2)"))
    out.append(monoid_double_category([0, 1], lambda a, b: (a + b) % 2, 0, "Z2-squares"))
    out.append(monoid_double_category([0, 1], max, 0, "Max2-squares"))
    return out


def framed_corpus():
    return [squares_double_category(g) for g in groupoids()]


def _closure(d_V, H, seeds):
    """Smallest family of relations ``E(f, g)`` on homs of ``H`` containing ``seeds`` and closed under the cell rules."""
    V = d_V
    rel = {(f, g): set() for f, g in cartesian(V.arrows, repeat=2)}
    for (f, g), pair in seeds:
        rel[f, g].add(pair)
    for X, Y in cartesian(V.objects, repeat=2):
        for u in H.hom(X, Y):
            rel[V.identity[X], V.identity[Y]].add((u, u))
    for f in V.arrows:
        rel[f, f].add((H.identity[V.src[f]], H.identity[V.tgt[f]]))
    pairs = list(V.composable_pairs())
    changed = True
    while changed:
        changed = False
        for (f, f2), (g, g2) in cartesian(pairs, repeat=2):
            tgt = rel[V.comp[f, f2], V.comp[g, g2]]
            for u, v in list(rel[f, g]):
                for v2, w in list(rel[f2, g2]):
                    if v == v2 and (u, w) not in tgt:
                        tgt.add((u, w))
                        changed = True
        for f, g, h in cartesian(V.arrows, repeat=3):
            tgt = rel[f, h]
            for u, v in list(rel[f, g]):
                for u2, v2 in list(rel[g, h]):
                    if (H.tgt[u] == H.src[u2]) and (H.tgt[v] == H.src[v2]):
                        p = (H.comp[u, u2], H.comp[v, v2])
                        if p not in tgt:
                            tgt.add(p)
                            changed = True
    return rel


def rel_enrichment(V: FinCategory, H: FinCategory, seeds=(), name=""):
    """RelSet enrichment with ``E(X, Y) = H(X, Y)`` and relations closed from ``seeds``."""
    b = rel_set()
    E_obj = {(X, Y): FinSet(tuple((u,) for u in sorted(H.hom(X, Y), key=repr)), 1) for X, Y in cartesian(V.objects, repeat=2)}
    rel = _closure(V, H, seeds)
    E_arr = {
        (f, g): Rel(
            E_obj[V.src[f], V.src[g]],
            E_obj[V.tgt[f], V.tgt[g]],
            frozenset(((u,), (v,)) for u, v in rel[f, g]),
        )
        for f, g in cartesian(V.arrows, repeat=2)
    }
    one = b.unit_object()
    unit_obj = {X: Fn(one, E_obj[X, X], ((H.identity[X],),)) for X in V.objects}
    comp_obj = {}
    for X, Y, Z in cartesian(V.objects, repeat=3):
        dom = b.tensor_obj(E_obj[X, Y], E_obj[Y, Z])
        comp_obj[X, Y, Z] = Fn(dom, E_obj[X, Z], tuple((H.comp[w[0], w[1]],) for w in dom.elems))
    return thin_enrichment(b, V, E_obj, E_arr, unit_obj, comp_obj, name)


def _random_seeds(V, H, rng, k):
    out = []
    for _ in range(k):
        f, g = rng.choice(V.arrows), rng.choice(V.arrows)
        us = H.hom(V.src[f], V.src[g])
        vs = H.hom(V.tgt[f], V.tgt[g])
        if us and vs:
            out.append(((f, g), (rng.choice(us), rng.choice(vs))))
    return out


def rel_corpus(seed=0):
    rng = random.Random(seed)
    out = [thin_to_rel(d) for d in strict_double_corpus() if _thin(d)]
    shapes = [
        (walking_arrow(), discrete(2)),
        (walking_arrow(), walking_arrow()),
        (walking_arrow(), iso_pair()),
        (discrete(2), iso_pair()),
        (iso_pair(), discrete(2)),
        (cyclic(2), terminal_category()),
        (chain3(), discrete(3)),
        (span_shape(), discrete(3, "xyz")),
    ]
    for i, (V, H) in enumerate(shapes):
        for j in range(2):
            seeds = _random_seeds(V, H, rng, 2 + j)
            out.append(rel_enrichment(V, H, seeds, f"rel-{V.name}-{H.name}-{j}"))
    return out


def _thin(d):
    from .doublecat import is_thin

    return is_thin(d)


def span_corpus():
    return [double_to_span(d) for d in strict_double_corpus() if len(d.A.arrows) <= 40]


def constant_monoid_enrichment(V: FinCategory, elements, mult, unit, name=""):
    """SetSet enrichment with every ``E(X, Y)`` the monoid and every ``E(f, g)`` the identity."""
    b = set_set()
    K = FinSet(tuple((k,) for k in elements), 1)
    E_obj = {(X, Y): K for X, Y in cartesian(V.objects, repeat=2)}
    E_arr = {(f, g): b.vid(K) for f, g in cartesian(V.arrows, repeat=2)}
    one = b.unit_object()
    unit_obj = {X: Fn(one, K, ((unit,),)) for X in V.objects}
    KK = b.tensor_obj(K, K)
    mul = Fn(KK, K, tuple((mult(w[0], w[1]),) for w in KK.elems))
    comp_obj = {k: mul for k in cartesian(V.objects, repeat=3)}
    return thin_enrichment(b, V, E_obj, E_arr, unit_obj, comp_obj, name)


MONOIDS = {
    "1": ([0], lambda a, b: 0, 0),
    "Z2": ([0, 1], lambda a, b: (a + b) % 2, 0),
    "Z3": ([0, 1, 2], lambda a, b: (a + b) % 3, 0),
    "Max2": ([0, 1], max, 0),
    "Min2": ([0, 1], min, 1),
    "Max3": ([0, 1, 2], max, 0),
}


def set_corpus():
    out = [framed_to_set(d) for d in framed_corpus()]
    shapes = [terminal_category(), walking_arrow(), chain3(), iso_pair(), discrete(2), cyclic(2), span_shape(), parallel_pair()]
    for V in shapes:
        for mname in ("1", "Z2", "Max2", "Z3"):
            els, mult, unit = MONOIDS[mname]
            out.append(constant_monoid_enrichment(V, els, mult, unit, f"const-{V.name}-{mname}"))
    return out


def enrichment_corpus():
    return rel_corpus() + span_corpus() + set_corpus()


def thin_corpus():
    """Thin strict double categories: squares double categories plus rel_to_thin of the RelSet corpus."""
    out = [d for d in strict_double_corpus() if _thin(d)]
    out += [rel_to_thin(e) for e in rel_corpus()[len(out):]]
    return out


def shipped_examples():
    """The documents stored as ``.dcat`` files under ``dcat/examples``, keyed by file name."""
    from .base import get_base
    from .doublecat import squares_monoidal
    from .dsl import Document, printable
    from .enrich import trivial_enrichment

    def doc(**values):
        return Document({k: printable(v) for k, v in values.items()})

    sq2 = squares_double_category(walking_arrow())
    return {
        "terminal.dcat": doc(One=terminal_category(), Terminal=terminal_double_category()),
        "categories.dcat": doc(
            Two=walking_arrow(), Three=chain3(), Iso=iso_pair(), Span=span_shape(), Cospan=cospan_shape(), Par=parallel_pair()
        ),
        "sq2.dcat": doc(Sq2=sq2),
        "sq3.dcat": doc(Sq3=squares_double_category(chain3())),
        "framed.dcat": doc(SqIso=squares_double_category(iso_pair()), SqZ2=squares_double_category(cyclic(2))),
        "weak.dcat": doc(Weak=weak_example()),
        "enriched.dcat": doc(
            TrivRel=trivial_enrichment(get_base("RelSet")),
            TrivSpan=trivial_enrichment(get_base("SpanSet")),
            TrivSet=trivial_enrichment(get_base("SetSet")),
            RelSq2=thin_to_rel(sq2),
            SpanSq2=double_to_span(sq2),
            ConstZ2=constant_monoid_enrichment(walking_arrow(), *MONOIDS["Z2"], "ConstZ2"),
        ),
        "monoidal.dcat": doc(SqZ2=squares_monoidal(cyclic(2))),
    }
