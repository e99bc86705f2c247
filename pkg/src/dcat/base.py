"""Intensional monoidal double categories over finite sets.

These serve as enrichment bases.  Elements of a ``FinSet`` are tuples of
uniform length (its rank), so the cartesian tensor is tuple concatenation
and is strictly associative with unit ``{()}``.  Vertical arrows are
functions in every base; horizontal arrows are relations (RelSet),
multirelations (SpanSet) or functions (SetSet).
"""

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product as cartesian
from typing import Hashable, Optional

from .errors import EnumerationBound, FrameMismatch
from .report import ValidationReport

DEFAULT_ENUM_LIMIT = 20000


def _cached_hash(self):
    # values are nested deeply inside square ids, so rehashing dominates otherwise
    h = self.__dict__.get("_h")
    if h is None:
        h = hash(tuple(getattr(self, f) for f in self.__dataclass_fields__))
        object.__setattr__(self, "_h", h)
    return h


@dataclass(frozen=True)
class FinSet:
    elems: tuple
    rank: int = 1

    __hash__ = _cached_hash

    def __post_init__(self):
        if any(not isinstance(e, tuple) or len(e) != self.rank for e in self.elems):
            raise ValueError(f"elements of a rank-{self.rank} FinSet must be {self.rank}-tuples")
        if len(set(self.elems)) != len(self.elems):
            raise ValueError("duplicate elements")

    def __len__(self):
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __contains__(self, x):
        return x in self._members

    @cached_property
    def _members(self):
        return frozenset(self.elems)

    def __repr__(self):
        if self.rank == 1:
            return "{" + ", ".join(str(e[0]) for e in self.elems) + "}"
        return "{" + ", ".join(map(str, self.elems)) + "}"


def fset(labels) -> FinSet:
    """Rank-1 set with the given labels, in sorted order."""
    return FinSet(tuple((x,) for x in sorted(set(labels), key=repr)), 1)


UNIT_SET = FinSet(((),), 0)


@lru_cache(maxsize=4096)
def tensor_sets(a: FinSet, b: FinSet) -> FinSet:
    return FinSet(tuple(x + y for x in a.elems for y in b.elems), a.rank + b.rank)


@dataclass(frozen=True)
class Fn:
    dom: FinSet
    cod: FinSet
    images: tuple  # aligned with dom.elems

    __hash__ = _cached_hash

    @cached_property
    def table(self):
        return dict(zip(self.dom.elems, self.images))

    def __call__(self, x):
        return self.table[x]

    def is_valid(self):
        return len(self.images) == len(self.dom) and all(y in self.cod for y in self.images)


def fn(dom: FinSet, cod: FinSet, mapping) -> Fn:
    if callable(mapping):
        return Fn(dom, cod, tuple(mapping(x) for x in dom.elems))
    return Fn(dom, cod, tuple(mapping[x] for x in dom.elems))


def const_fn(cod: FinSet, elem) -> Fn:
    """The vertical arrow ``1 -> cod`` picking ``elem``."""
    return Fn(UNIT_SET, cod, (elem,))


@dataclass(frozen=True)
class Rel:
    dom: FinSet
    cod: FinSet
    pairs: frozenset

    __hash__ = _cached_hash


@dataclass(frozen=True)
class Multi:
    """A multirelation: each pair ``(x, y)`` carries a finite set of witness tuples."""

    dom: FinSet
    cod: FinSet
    arity: int
    fibers: frozenset  # of ((x, y), frozenset of witnesses), nonempty fibers only

    __hash__ = _cached_hash

    @cached_property
    def fiber_map(self):
        return dict(self.fibers)

    def fiber(self, x, y):
        return self.fiber_map.get((x, y), frozenset())

    def entries(self):
        for (x, y), ws in sorted(self.fibers, key=repr):
            for a in sorted(ws):
                yield x, y, a


def multi(dom, cod, arity, fibers: dict) -> Multi:
    return Multi(dom, cod, arity, frozenset((k, frozenset(v)) for k, v in fibers.items() if v))


@dataclass(frozen=True)
class BaseSquare:
    top: Hashable
    bottom: Hashable
    left: Fn
    right: Fn
    payload: Optional[frozenset] = None

    __hash__ = _cached_hash

    @cached_property
    def component(self):
        return dict(self.payload or ())

    def frame(self):
        return (self.top, self.bottom, self.left, self.right)


class ComputableBase:
    """Shared vertical structure and the interface every base implements."""

    name = "base"
    thin = True

    def __init__(self, limit=DEFAULT_ENUM_LIMIT):
        self.limit = limit

    # objects and verticals
    def unit_object(self) -> FinSet:
        return UNIT_SET

    def tensor_obj(self, a: FinSet, b: FinSet) -> FinSet:
        return tensor_sets(a, b)

    def vid(self, x: FinSet) -> Fn:
        return Fn(x, x, x.elems)

    def vcomp(self, f: Fn, g: Fn) -> Fn:
        if f.cod != g.dom:
            raise FrameMismatch(f"cannot compose verticals {f.cod} and {g.dom}")
        return Fn(f.dom, g.cod, tuple(g(f(x)) for x in f.dom.elems))

    def tensor_v(self, f: Fn, g: Fn) -> Fn:
        return Fn(
            tensor_sets(f.dom, g.dom),
            tensor_sets(f.cod, g.cod),
            tuple(a + b for a in f.images for b in g.images),
        )

    def verticals(self, dom: FinSet, cod: FinSet):
        if len(cod) ** len(dom) > self.limit:
            raise EnumerationBound(f"functions {dom} -> {cod}", len(cod) ** len(dom), self.limit)
        return [Fn(dom, cod, imgs) for imgs in cartesian(cod.elems, repeat=len(dom))]

    # horizontals, implemented per base
    def h_dom(self, u):
        return u.dom

    def h_cod(self, u):
        return u.cod

    # coherence witnesses default to identities; SpanSet overrides
    def lunitor(self, u) -> BaseSquare:
        return self.vunit_sq(u)

    def runitor(self, u) -> BaseSquare:
        return self.vunit_sq(u)

    def lunitor_inv(self, u) -> BaseSquare:
        return self.vunit_sq(u)

    def runitor_inv(self, u) -> BaseSquare:
        return self.vunit_sq(u)

    def interchanger(self, u, v, u2, v2) -> BaseSquare:
        """Square ``(u (x) u2) . (v (x) v2) => (u . v) (x) (u2 . v2)`` with identity sides."""
        top = self.hcomp(self.tensor_h(u, u2), self.tensor_h(v, v2))
        bottom = self.tensor_h(self.hcomp(u, v), self.hcomp(u2, v2))
        if top != bottom:
            raise FrameMismatch("thin base expected strict interchange")
        return self.vunit_sq(top)

    def squares(self, top, bottom, left, right):
        sq = self.thin_square(top, bottom, left, right)
        return [sq] if sq is not None else []

    def thin_square(self, top, bottom, left, right):
        sq = BaseSquare(top, bottom, left, right)
        return sq if self.is_valid_square(sq) else None

    def frame_ok(self, sq: BaseSquare) -> bool:
        return (
            self.h_dom(sq.top) == sq.left.dom
            and self.h_cod(sq.top) == sq.right.dom
            and self.h_dom(sq.bottom) == sq.left.cod
            and self.h_cod(sq.bottom) == sq.right.cod
        )

    def vpaste(self, *sqs) -> BaseSquare:
        out = sqs[0]
        for s in sqs[1:]:
            out = self._vpaste2(out, s)
        return out

    def _vpaste2(self, s, t):
        if s.bottom != t.top:
            raise FrameMismatch("vertical paste: bottom of first square differs from top of second")
        return BaseSquare(s.top, t.bottom, self.vcomp(s.left, t.left), self.vcomp(s.right, t.right))

    def hpaste(self, s, t) -> BaseSquare:
        if s.right != t.left:
            raise FrameMismatch("horizontal paste: right side of first square differs from left of second")
        return BaseSquare(self.hcomp(s.top, t.top), self.hcomp(s.bottom, t.bottom), s.left, t.right)

    def tensor_sq(self, s, t) -> BaseSquare:
        return BaseSquare(
            self.tensor_h(s.top, t.top),
            self.tensor_h(s.bottom, t.bottom),
            self.tensor_v(s.left, t.left),
            self.tensor_v(s.right, t.right),
        )

    def vunit_sq(self, u) -> BaseSquare:
        return BaseSquare(u, u, self.vid(self.h_dom(u)), self.vid(self.h_cod(u)))

    def hunit_sq(self, f: Fn) -> BaseSquare:
        return BaseSquare(self.hunit(f.dom), self.hunit(f.cod), f, f)

    def __repr__(self):
        return self.name


class RelSet(ComputableBase):
    name = "RelSet"

    def hunit(self, x: FinSet) -> Rel:
        return Rel(x, x, frozenset((a, a) for a in x.elems))

    def hcomp(self, u: Rel, v: Rel) -> Rel:
        if u.cod != v.dom:
            raise FrameMismatch("relations are not composable")
        by_src = {}
        for y, z in v.pairs:
            by_src.setdefault(y, []).append(z)
        return Rel(u.dom, v.cod, frozenset((x, z) for x, y in u.pairs for z in by_src.get(y, ())))

    def tensor_h(self, u: Rel, v: Rel) -> Rel:
        return Rel(
            tensor_sets(u.dom, v.dom),
            tensor_sets(u.cod, v.cod),
            frozenset((x + x2, y + y2) for x, y in u.pairs for x2, y2 in v.pairs),
        )

    def horizontals(self, dom: FinSet, cod: FinSet):
        cells = [(x, y) for x in dom.elems for y in cod.elems]
        if 2 ** len(cells) > self.limit:
            raise EnumerationBound(f"relations {dom} -/-> {cod}", 2 ** len(cells), self.limit)
        return [
            Rel(dom, cod, frozenset(c))
            for r in range(len(cells) + 1)
            for c in combinations(cells, r)
        ]

    def is_valid_square(self, sq: BaseSquare) -> bool:
        if not self.frame_ok(sq) or sq.payload is not None:
            return False
        return all((sq.left(x), sq.right(y)) in sq.bottom.pairs for x, y in sq.top.pairs)


class SetSet(ComputableBase):
    name = "SetSet"

    def hunit(self, x: FinSet) -> Fn:
        return self.vid(x)

    def hcomp(self, u: Fn, v: Fn) -> Fn:
        return self.vcomp(u, v)

    def tensor_h(self, u: Fn, v: Fn) -> Fn:
        return self.tensor_v(u, v)

    def horizontals(self, dom, cod):
        return self.verticals(dom, cod)

    def is_valid_square(self, sq: BaseSquare) -> bool:
        if not self.frame_ok(sq) or sq.payload is not None:
            return False
        return all(sq.right(sq.top(x)) == sq.bottom(sq.left(x)) for x in sq.top.dom.elems)


class SpanSet(ComputableBase):
    """Multirelations with witness tuples; composite witnesses are ``a + y + b``.

    Flattening makes composition strictly associative.  Units are weak:
    composing with the unit inserts the endpoint label into the witness.
    """

    name = "SpanSet"
    thin = False

    def hunit(self, x: FinSet) -> Multi:
        return Multi(x, x, 0, frozenset(((a, a), frozenset({()})) for a in x.elems))

    def hcomp(self, u: Multi, v: Multi) -> Multi:
        if u.cod != v.dom:
            raise FrameMismatch("multirelations are not composable")
        out = {}
        vf = v.fiber_map
        for (x, y), ws in u.fibers:
            for z in v.cod.elems:
                ws2 = vf.get((y, z))
                if ws2:
                    out.setdefault((x, z), set()).update(a + y + b for a in ws for b in ws2)
        return multi(u.dom, v.cod, u.arity + u.cod.rank + v.arity, out)

    def tensor_h(self, u: Multi, v: Multi) -> Multi:
        out = {}
        for (x, y), ws in u.fibers:
            for (x2, y2), ws2 in v.fibers:
                out[x + x2, y + y2] = {a + b for a in ws for b in ws2}
        return multi(tensor_sets(u.dom, v.dom), tensor_sets(u.cod, v.cod), u.arity + v.arity, out)

    def horizontals(self, dom, cod, max_fiber=1, pool=None):
        """Multirelations whose fibers are subsets of ``pool`` of size at most ``max_fiber``."""
        pool = pool if pool is not None else [(i,) for i in range(max_fiber)]
        arity = len(pool[0]) if pool else 1
        choices = [frozenset(c) for r in range(max_fiber + 1) for c in combinations(pool, r)]
        cells = [(x, y) for x in dom.elems for y in cod.elems]
        n = len(choices) ** len(cells)
        if n > self.limit:
            raise EnumerationBound(f"multirelations {dom} -/-> {cod}", n, self.limit)
        return [multi(dom, cod, arity, dict(zip(cells, pick))) for pick in cartesian(choices, repeat=len(cells))]

    def is_valid_square(self, sq: BaseSquare) -> bool:
        if not self.frame_ok(sq) or sq.payload is None:
            return False
        comp = sq.component
        keys = {(x, y, a) for x, y, a in sq.top.entries()}
        if set(comp) != keys:
            return False
        return all(b in sq.bottom.fiber(sq.left(x), sq.right(y)) for (x, y, a), b in comp.items())

    def squares(self, top, bottom, left, right):
        probe = BaseSquare(top, bottom, left, right, frozenset())
        if not self.frame_ok(probe):
            return []
        entries = list(top.entries())
        options = [sorted(bottom.fiber(left(x), right(y))) for x, y, _ in entries]
        n = 1
        for o in options:
            n *= len(o)
        if n > self.limit:
            raise EnumerationBound("span squares over frame", n, self.limit)
        return [
            BaseSquare(top, bottom, left, right, frozenset(zip(entries, pick)))
            for pick in cartesian(*options)
        ]

    def thin_square(self, top, bottom, left, right):
        found = self.squares(top, bottom, left, right)
        return found[0] if len(found) == 1 else None

    def _vpaste2(self, s, t):
        base = super()._vpaste2(s, t)
        f, g = s.left, s.right
        tc = t.component
        payload = frozenset(((x, y, a), tc[f(x), g(y), b]) for (x, y, a), b in s.component.items())
        return BaseSquare(base.top, base.bottom, base.left, base.right, payload)

    def hpaste(self, s, t):
        base = super().hpaste(s, t)
        sa, ta, mid = s.top.arity, t.top.arity, s.top.cod.rank
        sc, tc = s.component, t.component
        g = s.right
        payload = {}
        for x, z, w in base.top.entries():
            a, y, b = w[:sa], w[sa:sa + mid], w[sa + mid:]
            payload[x, z, w] = sc[x, y, a] + g(y) + tc[y, z, b]
        return BaseSquare(base.top, base.bottom, base.left, base.right, frozenset(payload.items()))

    def tensor_sq(self, s, t):
        base = super().tensor_sq(s, t)
        payload = {}
        for (x, y, a), b in s.component.items():
            for (x2, y2, a2), b2 in t.component.items():
                payload[x + x2, y + y2, a + a2] = b + b2
        return BaseSquare(base.top, base.bottom, base.left, base.right, frozenset(payload.items()))

    def vunit_sq(self, u):
        base = super().vunit_sq(u)
        return BaseSquare(u, u, base.left, base.right, frozenset(((x, y, a), a) for x, y, a in u.entries()))

    def hunit_sq(self, f):
        return BaseSquare(
            self.hunit(f.dom),
            self.hunit(f.cod),
            f,
            f,
            frozenset(((x, x, ()), ()) for x in f.dom.elems),
        )

    def _globular(self, top, bottom, mapping):
        return BaseSquare(
            top,
            bottom,
            self.vid(top.dom),
            self.vid(top.cod),
            frozenset(((x, y, a), mapping(x, y, a)) for x, y, a in top.entries()),
        )

    def lunitor(self, u):
        return self._globular(u, self.hcomp(self.hunit(u.dom), u), lambda x, y, a: x + a)

    def lunitor_inv(self, u):
        r = u.dom.rank
        return self._globular(self.hcomp(self.hunit(u.dom), u), u, lambda x, y, w: w[r:])

    def runitor(self, u):
        return self._globular(u, self.hcomp(u, self.hunit(u.cod)), lambda x, y, a: a + y)

    def runitor_inv(self, u):
        n = u.arity
        return self._globular(self.hcomp(u, self.hunit(u.cod)), u, lambda x, y, w: w[:n])

    def interchanger(self, u, v, u2, v2):
        top = self.hcomp(self.tensor_h(u, u2), self.tensor_h(v, v2))
        bottom = self.tensor_h(self.hcomp(u, v), self.hcomp(u2, v2))
        na, na2 = u.arity, u2.arity
        ry, ry2 = u.cod.rank, u2.cod.rank
        nb = v.arity

        def swap(x, z, w):
            a, a2 = w[:na], w[na:na + na2]
            k = na + na2
            y, y2 = w[k:k + ry], w[k + ry:k + ry + ry2]
            k += ry + ry2
            b, b2 = w[k:k + nb], w[k + nb:]
            return (a + y + b) + (a2 + y2 + b2)

        return self._globular(top, bottom, swap)


def rel_set(**kw) -> RelSet:
    return RelSet(**kw)


def span_set(**kw) -> SpanSet:
    return SpanSet(**kw)


def set_set(**kw) -> SetSet:
    return SetSet(**kw)


BASES = {"RelSet": rel_set, "SpanSet": span_set, "SetSet": set_set}


def get_base(name: str) -> ComputableBase:
    try:
        return BASES[name]()
    except KeyError:
        raise KeyError(f"unknown base {name!r}; expected one of {sorted(BASES)}") from None


# -- spot checks ------------------------------------------------------------


def _horizontals(b, x, y):
    if isinstance(b, SpanSet):
        return b.horizontals(x, y, max_fiber=1)
    return b.horizontals(x, y)


def spot_check_base(b: ComputableBase, objects, max_set=3, max_checks=400) -> ValidationReport:
    """Check category, pasting and monoidal laws on data generated from ``objects``.

    Horizontals are enumerated exhaustively between the given sets (SpanSet
    with fibers of size at most one), verticals likewise; triples of
    composable data are sampled in a fixed order up to ``max_checks``.
    """
    from .errors import SizeBoundExceeded

    rep = ValidationReport(f"base {b.name}")
    objects = list(objects)
    for x in objects:
        if len(x) > max_set:
            raise SizeBoundExceeded(f"set {x!r}", len(x), max_set)
    verts = {(x, y): b.verticals(x, y) for x in objects for y in objects}
    hors = {(x, y): _horizontals(b, x, y) for x in objects for y in objects}

    def fail(axiom, inst, group):
        rep.add(axiom, inst, b.name, group=group)

    # vertical category
    for x, y, z in cartesian(objects, repeat=3):
        for f in verts[x, y][:6]:
            if b.vcomp(b.vid(x), f) != f or b.vcomp(f, b.vid(y)) != f:
                fail("vertical-unit", (f,), "vertical")
            for g in verts[y, z][:6]:
                for w in objects:
                    for h in verts[z, w][:3]:
                        if b.vcomp(b.vcomp(f, g), h) != b.vcomp(f, b.vcomp(g, h)):
                            fail("vertical-associativity", (f, g, h), "vertical")

    # horizontal composition
    checks = 0
    for x, y in cartesian(objects, repeat=2):
        for u in hors[x, y]:
            lam, rho = b.lunitor(u), b.runitor(u)
            for name, s, inv in (("left-unit", lam, b.lunitor_inv(u)), ("right-unit", rho, b.runitor_inv(u))):
                if not b.is_valid_square(s) or not b.is_valid_square(inv):
                    fail(name, (u,), "horizontal")
                elif b.vpaste(s, inv) != b.vunit_sq(u) or b.vpaste(inv, s) != b.vunit_sq(s.bottom):
                    fail(name, (u,), "horizontal")
    for x, y, z, w in cartesian(objects, repeat=4):
        for u in hors[x, y][:4]:
            for v in hors[y, z][:4]:
                uv = b.hcomp(u, v)
                for t in hors[z, w][:4]:
                    checks += 1
                    if checks > max_checks:
                        break
                    if b.hcomp(uv, t) != b.hcomp(u, b.hcomp(v, t)):
                        fail("associativity", (u, v, t), "horizontal")

    # squares: validity of pastes, unit squares, interchange of pastes
    for x, y in cartesian(objects, repeat=2):
        for u in hors[x, y][:6]:
            if not b.is_valid_square(b.vunit_sq(u)):
                fail("vertical-unit-square", (u,), "squares")
    for f in [f for k in verts for f in verts[k][:4]]:
        if not b.is_valid_square(b.hunit_sq(f)):
            fail("horizontal-unit-square", (f,), "squares")
    pairs = 0
    for x, y in cartesian(objects, repeat=2):
        for u in hors[x, y][:3]:
            for v in hors[x, y][:3]:
                for f in verts[x, x][:2]:
                    for g in verts[y, y][:2]:
                        for s in b.squares(u, v, f, g)[:2]:
                            pairs += 1
                            if pairs > max_checks:
                                break
                            i1 = b.vpaste(b.vunit_sq(u), s)
                            i2 = b.vpaste(s, b.vunit_sq(v))
                            if i1 != s or i2 != s:
                                fail("square-vertical-unit", (s.frame(),), "squares")
                            for t in b.squares(v, v, b.vid(x), b.vid(y))[:2]:
                                if not b.is_valid_square(b.vpaste(s, t)):
                                    fail("square-vertical-closure", (s.frame(),), "squares")
                            for z in objects:
                                for u2 in hors[y, z][:2]:
                                    for s2 in b.squares(u2, u2, g, b.vid(z))[:1]:
                                        h = b.hpaste(s, s2)
                                        if not b.is_valid_square(h):
                                            fail("square-horizontal-closure", (s.frame(), s2.frame()), "squares")

    # tensor
    for x, y, z in cartesian(objects, repeat=3):
        lhs = b.tensor_obj(b.tensor_obj(x, y), z)
        rhs = b.tensor_obj(x, b.tensor_obj(y, z))
        if lhs != rhs:
            fail("tensor-associativity", (x, y, z), "tensor")
    one = b.unit_object()
    for x in objects:
        if b.tensor_obj(one, x) != x or b.tensor_obj(x, one) != x:
            fail("tensor-unit", (x,), "tensor")
        if b.tensor_h(b.hunit(one), b.hunit(x)) != b.hunit(x):
            fail("tensor-unit", (x,), "tensor")
    for x, y in cartesian(objects, repeat=2):
        if b.tensor_h(b.hunit(x), b.hunit(y)) != b.hunit(b.tensor_obj(x, y)):
            fail("unit-preservation", (x, y), "tensor")
        for u in hors[x, y][:3]:
            for u2 in hors[y, x][:3]:
                t = b.tensor_h(u, u2)
                if b.h_dom(t) != b.tensor_obj(x, y) or b.h_cod(t) != b.tensor_obj(y, x):
                    fail("tensor-frame", (u, u2), "tensor")
    for x, y in cartesian(objects, repeat=2):
        for u in hors[x, y][:3]:
            for v in hors[y, x][:3]:
                for u2 in hors[y, x][:2]:
                    for v2 in hors[x, y][:2]:
                        i = b.interchanger(u, v, u2, v2)
                        if not b.is_valid_square(i):
                            fail("interchanger", (u, v, u2, v2), "tensor")
    rep.counts.update(
        objects=len(objects),
        verticals=sum(len(v) for v in verts.values()),
        horizontals=sum(len(v) for v in hors.values()),
    )
    return rep
