"""Finite categories given by explicit composition tables.

Composition is written in diagrammatic order throughout: ``comp[(a, b)]``
is "a then b" and is defined exactly when ``tgt[a] == src[b]``.
"""

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Mapping

from .errors import CodomainMismatch, DanglingId
from .report import ValidationReport

Id = Hashable


@dataclass(frozen=True, eq=False)
class FinCategory:
    objects: tuple
    arrows: tuple
    src: Mapping
    tgt: Mapping
    identity: Mapping
    comp: Mapping
    name: str = ""

    @classmethod
    def build(cls, objects, arrows=(), comp=(), name="", identity_name=None):
        """Build a category from generators, adding identities and unit composites.

        ``arrows`` maps arrow id to ``(src, tgt)``; ``comp`` lists the
        non-identity composites as ``{(a, b): c}``.
        """
        identity_name = identity_name or (lambda x: f"id_{x}")
        objects = tuple(objects)
        arrows = dict(arrows)
        src = {a: s for a, (s, _) in arrows.items()}
        tgt = {a: t for a, (_, t) in arrows.items()}
        identity = {}
        for x in objects:
            i = identity_name(x)
            identity[x] = i
            src[i] = tgt[i] = x
        table = dict(comp)
        all_arrows = tuple(identity[x] for x in objects) + tuple(arrows)
        for a in all_arrows:
            if src.get(a) in identity:
                table.setdefault((identity[src[a]], a), a)
            if tgt.get(a) in identity:
                table.setdefault((a, identity[tgt[a]]), a)
        return cls(objects, all_arrows, src, tgt, identity, table, name)

    def __eq__(self, other):
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (
            set(self.objects) == set(other.objects)
            and set(self.arrows) == set(other.arrows)
            and dict(self.src) == dict(other.src)
            and dict(self.tgt) == dict(other.tgt)
            and dict(self.identity) == dict(other.identity)
            and dict(self.comp) == dict(other.comp)
        )

    __hash__ = None

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<FinCategory{label}: {len(self.objects)} objects, {len(self.arrows)} arrows>"

    @cached_property
    def _out(self):
        out = defaultdict(list)
        for a in self.arrows:
            out[self.src[a]].append(a)
        return out

    @cached_property
    def _homs(self):
        homs = defaultdict(list)
        for a in self.arrows:
            homs[self.src[a], self.tgt[a]].append(a)
        return homs

    def out_of(self, x):
        return self._out.get(x, [])

    def hom(self, x, y):
        return self._homs.get((x, y), [])

    def then(self, a, b):
        return self.comp[a, b]

    def composable_pairs(self):
        for a in self.arrows:
            for b in self.out_of(self.tgt[a]):
                yield a, b

    def inverse(self, a):
        """Two-sided inverse of ``a`` found in the table, or None."""
        x, y = self.src[a], self.tgt[a]
        for b in self.hom(y, x):
            if self.comp.get((a, b)) == self.identity[x] and self.comp.get((b, a)) == self.identity[y]:
                return b
        return None

    def is_identity(self, a):
        return self.identity.get(self.src.get(a)) == a

    def op(self):
        return FinCategory(
            self.objects,
            self.arrows,
            dict(self.tgt),
            dict(self.src),
            dict(self.identity),
            {(b, a): c for (a, b), c in self.comp.items()},
            f"{self.name}^op" if self.name else "",
        )

    def relabel(self, obj_map, arr_map, name=None):
        return FinCategory(
            tuple(obj_map[x] for x in self.objects),
            tuple(arr_map[a] for a in self.arrows),
            {arr_map[a]: obj_map[x] for a, x in self.src.items()},
            {arr_map[a]: obj_map[x] for a, x in self.tgt.items()},
            {obj_map[x]: arr_map[a] for x, a in self.identity.items()},
            {(arr_map[a], arr_map[b]): arr_map[c] for (a, b), c in self.comp.items()},
            self.name if name is None else name,
        )


@dataclass(frozen=True, eq=False)
class FinFunctor:
    dom: FinCategory
    cod: FinCategory
    obj_map: Mapping
    arr_map: Mapping
    name: str = ""

    def __call__(self, a):
        return self.arr_map[a]

    def ob(self, x):
        return self.obj_map[x]

    def __eq__(self, other):
        if not isinstance(other, FinFunctor):
            return NotImplemented
        return (
            self.dom == other.dom
            and self.cod == other.cod
            and dict(self.obj_map) == dict(other.obj_map)
            and dict(self.arr_map) == dict(other.arr_map)
        )

    __hash__ = None

    def __repr__(self):
        return f"<FinFunctor {self.name or '?'}: {self.dom!r} -> {self.cod!r}>"


@dataclass(frozen=True, eq=False)
class FinNatIso:
    dom: FinFunctor
    cod: FinFunctor
    components: Mapping
    name: str = ""

    def __getitem__(self, x):
        return self.components[x]


def identity_functor(c: FinCategory) -> FinFunctor:
    return FinFunctor(c, c, {x: x for x in c.objects}, {a: a for a in c.arrows}, "id")


def compose_functors(f: FinFunctor, g: FinFunctor) -> FinFunctor:
    """``f`` then ``g``."""
    if f.cod != g.dom:
        raise CodomainMismatch(f"cannot compose {f.name or 'functor'} with {g.name or 'functor'}")
    return FinFunctor(
        f.dom,
        g.cod,
        {x: g.obj_map[y] for x, y in f.obj_map.items()},
        {a: g.arr_map[b] for a, b in f.arr_map.items()},
        f"{f.name};{g.name}",
    )


def identity_nat_iso(f: FinFunctor) -> FinNatIso:
    return FinNatIso(f, f, {x: f.cod.identity[f.obj_map[x]] for x in f.dom.objects}, "id")


def check_ids(c: FinCategory):
    objs, arrs = set(c.objects), set(c.arrows)
    for a in c.arrows:
        if a not in c.src or a not in c.tgt:
            raise DanglingId(f"arrow {a!r} has no source/target")
        if c.src[a] not in objs or c.tgt[a] not in objs:
            raise DanglingId(f"arrow {a!r} has undeclared endpoint")
    for a in list(c.src) + list(c.tgt):
        if a not in arrs:
            raise DanglingId(f"endpoint table mentions undeclared arrow {a!r}")
    for x in c.objects:
        if x not in c.identity:
            raise DanglingId(f"object {x!r} has no identity")
    for x, i in c.identity.items():
        if x not in objs or i not in arrs:
            raise DanglingId(f"identity entry {x!r} -> {i!r} is undeclared")
    for (a, b), k in c.comp.items():
        for y in (a, b, k):
            if y not in arrs:
                raise DanglingId(f"composition table mentions undeclared arrow {y!r}")


def validate_category(c: FinCategory, report: ValidationReport = None, label=None) -> ValidationReport:
    check_ids(c)
    rep = report if report is not None else ValidationReport(f"category {c.name}".strip())
    loc = c.name if label is None else label
    for x in c.objects:
        i = c.identity[x]
        if c.src[i] != x or c.tgt[i] != x:
            rep.add("identity-typing", (x, i), loc)
    for (a, b), k in c.comp.items():
        if c.tgt[a] != c.src[b]:
            rep.add("spurious-composite", (a, b), loc)
        elif c.src[k] != c.src[a] or c.tgt[k] != c.tgt[b]:
            rep.add("composite-typing", (a, b, k), loc)
    for a, b in c.composable_pairs():
        if (a, b) not in c.comp:
            rep.add("missing-composite", (a, b), loc)
    for a in c.arrows:
        if c.comp.get((c.identity[c.src[a]], a)) != a:
            rep.add("left-unit", (a,), loc)
        if c.comp.get((a, c.identity[c.tgt[a]])) != a:
            rep.add("right-unit", (a,), loc)
    comp = c.comp
    for a, b in c.composable_pairs():
        ab = comp.get((a, b))
        for d in c.out_of(c.tgt[b]):
            bd = comp.get((b, d))
            lhs = comp.get((ab, d)) if ab is not None else None
            rhs = comp.get((a, bd)) if bd is not None else None
            if lhs is None and rhs is None:
                continue
            if lhs != rhs:
                rep.add("associativity", (a, b, d), loc)
    rep.counts.setdefault("objects", len(c.objects))
    rep.counts.setdefault("arrows", len(c.arrows))
    return rep


def validate_functor(f: FinFunctor, report: ValidationReport = None, label=None) -> ValidationReport:
    rep = report if report is not None else ValidationReport(f"functor {f.name}".strip())
    loc = label or f.name
    c, d = f.dom, f.cod
    dobjs, darrs = set(d.objects), set(d.arrows)
    for x in c.objects:
        if f.obj_map.get(x) not in dobjs:
            rep.add("functor-total", (x,), loc, detail="object not mapped")
    for a in c.arrows:
        if f.arr_map.get(a) not in darrs:
            rep.add("functor-total", (a,), loc, detail="arrow not mapped")
    if not rep.ok and any(v.axiom == "functor-total" and v.location == loc for v in rep.violations):
        return rep
    for a in c.arrows:
        fa = f.arr_map[a]
        if d.src[fa] != f.obj_map[c.src[a]] or d.tgt[fa] != f.obj_map[c.tgt[a]]:
            rep.add("functor-typing", (a,), loc)
    for x in c.objects:
        if f.arr_map[c.identity[x]] != d.identity[f.obj_map[x]]:
            rep.add("functor-identity", (x,), loc)
    for (a, b), k in c.comp.items():
        fa, fb = f.arr_map[a], f.arr_map[b]
        if d.comp.get((fa, fb)) != f.arr_map[k]:
            rep.add("functor-composition", (a, b), loc)
    return rep


def validate_nat_iso(eta: FinNatIso, report: ValidationReport = None, label=None) -> ValidationReport:
    rep = report if report is not None else ValidationReport(f"natural iso {eta.name}".strip())
    loc = label or eta.name
    f, g = eta.dom, eta.cod
    c, d = f.dom, f.cod
    for x in c.objects:
        k = eta.components.get(x)
        if k not in d.src:
            rep.add("component-missing", (x,), loc)
            continue
        if d.src[k] != f.obj_map[x] or d.tgt[k] != g.obj_map[x]:
            rep.add("component-typing", (x, k), loc)
            continue
        if d.inverse(k) is None:
            rep.add("invertibility", (x, k), loc)
    for a in c.arrows:
        kx = eta.components.get(c.src[a])
        ky = eta.components.get(c.tgt[a])
        if kx is None or ky is None:
            continue
        lhs = d.comp.get((f.arr_map[a], ky))
        rhs = d.comp.get((kx, g.arr_map[a]))
        if lhs is None or lhs != rhs:
            rep.add("naturality", (a,), loc)
    return rep


def terminal_category(obj="*") -> FinCategory:
    return FinCategory.build([obj], name="1")


def empty_category() -> FinCategory:
    return FinCategory((), (), {}, {}, {}, {}, "0")


def product(c1: FinCategory, c2: FinCategory) -> FinCategory:
    objects = tuple((x, y) for x in c1.objects for y in c2.objects)
    arrows = tuple((a, b) for a in c1.arrows for b in c2.arrows)
    src = {(a, b): (c1.src[a], c2.src[b]) for a, b in arrows}
    tgt = {(a, b): (c1.tgt[a], c2.tgt[b]) for a, b in arrows}
    identity = {(x, y): (c1.identity[x], c2.identity[y]) for x, y in objects}
    comp = {}
    for (a, a2), k in c1.comp.items():
        for (b, b2), m in c2.comp.items():
            comp[(a, b), (a2, b2)] = (k, m)
    name = f"{c1.name}x{c2.name}" if c1.name or c2.name else ""
    return FinCategory(objects, arrows, src, tgt, identity, comp, name)


def pullback_category(s: FinFunctor, t: FinFunctor):
    """Pullback of the cospan ``dom(t) --t--> C <--s-- dom(s)``.

    Objects are pairs ``(a, b)`` with ``t(a) == s(b)``.  Returns the
    category together with the projections onto ``dom(t)`` and ``dom(s)``.
    """
    if s.cod != t.cod:
        raise CodomainMismatch("pullback legs have different codomains")
    left, right = t.dom, s.dom
    by_s_obj = defaultdict(list)
    for b in right.objects:
        by_s_obj[s.obj_map[b]].append(b)
    by_s_arr = defaultdict(list)
    for g in right.arrows:
        by_s_arr[s.arr_map[g]].append(g)
    objects = tuple((a, b) for a in left.objects for b in by_s_obj[t.obj_map[a]])
    arrows = tuple((f, g) for f in left.arrows for g in by_s_arr[t.arr_map[f]])
    src = {(f, g): (left.src[f], right.src[g]) for f, g in arrows}
    tgt = {(f, g): (left.tgt[f], right.tgt[g]) for f, g in arrows}
    identity = {(a, b): (left.identity[a], right.identity[b]) for a, b in objects}
    comp = {}
    by_src = defaultdict(list)
    for p in arrows:
        by_src[src[p]].append(p)
    for p in arrows:
        for q in by_src[tgt[p]]:
            a = left.comp.get((p[0], q[0]))
            b = right.comp.get((p[1], q[1]))
            if a is not None and b is not None:
                comp[p, q] = (a, b)
    pb = FinCategory(objects, arrows, src, tgt, identity, comp, "pullback")
    p1 = FinFunctor(pb, left, {o: o[0] for o in objects}, {a: a[0] for a in arrows}, "pr1")
    p2 = FinFunctor(pb, right, {o: o[1] for o in objects}, {a: a[1] for a in arrows}, "pr2")
    return pb, p1, p2
