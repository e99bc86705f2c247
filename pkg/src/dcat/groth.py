"""Grothendieck construction: the underlying double category of an enrichment.

Horizontal arrows of the result are triples ``(X, Y, x)`` with ``x`` a point
of ``E(X, Y)``; squares are ``(f, g, phi)`` with ``phi`` a base square from
the horizontal unit on ``1`` down to ``E(f, g)``.  Points are stored as the
element tuples rather than as arrows ``1 -> E(X, Y)``.
"""

from collections import Counter

from .base import const_fn
from .doublecat import FinDoubleCategory, make_double
from .enrich import EnrichedDoubleCategory, validate_enrichment
from .errors import EnumerationBound, InvalidInput
from .fincat import FinCategory

DEFAULT_SQUARE_BOUND = 5000


def grothendieck(e: EnrichedDoubleCategory, validate=True, max_squares=DEFAULT_SQUARE_BOUND, name=None) -> FinDoubleCategory:
    if validate:
        rep = validate_enrichment(e)
        if not rep.ok:
            raise InvalidInput(f"enrichment {e.name} does not validate", rep)
    b, V = e.base, e.V
    one = b.unit_object()
    U1 = b.hunit(one)
    lam1 = b.lunitor(U1)

    objs = [(X, Y, x) for X in V.objects for Y in V.objects for x in e.E_obj[X, Y].elems]
    by_pair = {}
    for o in objs:
        by_pair.setdefault(o[:2], []).append(o)
    point = {o: const_fn(e.E_obj[o[0], o[1]], o[2]) for o in objs}

    squares, src, tgt = [], {}, {}
    for f in V.arrows:
        for g in V.arrows:
            bottom = e.E_arr[f, g]
            for o in by_pair.get((V.src[f], V.src[g]), []):
                for o2 in by_pair.get((V.tgt[f], V.tgt[g]), []):
                    for phi in b.squares(U1, bottom, point[o], point[o2]):
                        s = (f, g, phi)
                        squares.append(s)
                        src[s], tgt[s] = o, o2
                        if len(squares) > max_squares:
                            raise EnumerationBound("squares of the Grothendieck construction", len(squares), max_squares)

    identity = {}
    for o in objs:
        X, Y, _ = o
        identity[o] = (V.identity[X], V.identity[Y], b.vpaste(b.hunit_sq(point[o]), e.I_cell[X, Y]))
    out = {}
    for s in squares:
        out.setdefault(src[s], []).append(s)
    comp = {}
    for s in squares:
        f, g, phi = s
        for t in out.get(tgt[s], []):
            f2, g2, psi = t
            cell = b.vpaste(lam1, b.hpaste(phi, psi), e.C_cell[f, g, f2, g2])
            comp[s, t] = (V.comp[f, f2], V.comp[g, g2], cell)
    A = FinCategory(tuple(objs), tuple(squares), src, tgt, identity, comp, "A")

    S = ({o: o[0] for o in objs}, {s: s[0] for s in squares})
    T = ({o: o[1] for o in objs}, {s: s[1] for s in squares})
    U = (
        {X: (X, X, e.unit_obj[X](())) for X in V.objects},
        {f: (f, f, e.unit_arr[f]) for f in V.arrows},
    )
    odot_obj = {}
    for o in objs:
        X, Y, x = o
        for Z in V.objects:
            for o2 in by_pair.get((Y, Z), []):
                odot_obj[o, o2] = (X, Z, e.comp_obj[X, Y, Z](x + o2[2]))
    by_left = {}
    for s in squares:
        by_left.setdefault(s[0], []).append(s)
    odot_arr = {}
    for s in squares:
        f, g, phi = s
        for t in by_left.get(g, []):
            h, psi = t[1], t[2]
            odot_arr[s, t] = (f, h, b.vpaste(b.tensor_sq(phi, psi), e.comp_arr[f, g, h]))
    return make_double(V, A, S, T, U, odot_obj, odot_arr, name=name or f"groth({e.name})")


def groth_census(e: EnrichedDoubleCategory, **kw) -> dict:
    d = grothendieck(e, **kw)
    per_frame = Counter(len(v) for v in d.frames.values())
    return {
        "objects": len(d.V.objects),
        "horizontals": len(d.A.objects),
        "squares": len(d.A.arrows),
        "frames": len(d.frames),
        "max_squares_per_frame": max(per_frame, default=0),
    }
