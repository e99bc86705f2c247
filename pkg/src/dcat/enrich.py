"""Internally (horizontally) enriched double categories and their law checker.

An enrichment assigns to each pair of objects ``(X, Y)`` of a finite
category ``V`` a base object ``E(X, Y)``, to each pair of arrows ``(f, g)``
a base horizontal ``E(f, g)``, and supplies the cells

* ``I[X, Y]``: ``U E(X,Y) => E(id_X, id_Y)``
* ``C[f, g, f2, g2]``: ``E(f,g) . E(f2,g2) => E(f;f2, g;g2)``
* ``unit_arr[f]``: ``U 1 => E(f, f)`` with sides ``unit_obj``
* ``comp_arr[f, g, h]``: ``E(f,g) (x) E(g,h) => E(f,h)`` with sides ``comp_obj``

with vertical arrows ``unit_obj[X]: 1 -> E(X,X)`` and
``comp_obj[X,Y,Z]: E(X,Y) (x) E(Y,Z) -> E(X,Z)``.
"""

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Mapping

from .base import BaseSquare, ComputableBase, Fn
from .errors import DcatError, FrameMismatch, InvalidInput
from .fincat import FinCategory, validate_category
from .report import ValidationReport

LAWS = ("E1", "E2", "E3", "E4", "T1", "T2", "T3", "D1")


@dataclass(frozen=True, eq=False)
class EnrichedDoubleCategory:
    base: ComputableBase
    V: FinCategory
    E_obj: Mapping
    E_arr: Mapping
    I_cell: Mapping
    C_cell: Mapping
    unit_obj: Mapping
    unit_arr: Mapping
    comp_obj: Mapping
    comp_arr: Mapping
    name: str = ""

    def __repr__(self):
        return f"<EnrichedDoubleCategory {self.name} over {self.base.name}: {len(self.V.objects)} objects>"

    def E(self, a, b):
        if a in self.V.objects and b in self.V.objects:
            return self.E_obj[a, b]
        return self.E_arr[a, b]

    def replace(self, **changes):
        fields = dict(self.__dict__)
        for k, v in changes.items():
            if k not in fields:
                raise TypeError(f"unknown field {k}")
            fields[k] = v
        return EnrichedDoubleCategory(**fields)

    def __eq__(self, other):
        if not isinstance(other, EnrichedDoubleCategory):
            return NotImplemented
        return type(self.base) is type(other.base) and self.V == other.V and all(
            dict(getattr(self, k)) == dict(getattr(other, k))
            for k in ("E_obj", "E_arr", "I_cell", "C_cell", "unit_obj", "unit_arr", "comp_obj", "comp_arr")
        )

    __hash__ = None


def arrow_pairs(V: FinCategory):
    return list(cartesian(V.arrows, repeat=2))


def composable_quads(V: FinCategory):
    """``(f, g, f2, g2)`` with ``f;f2`` and ``g;g2`` defined."""
    pairs = list(V.composable_pairs())
    return [(f, g, f2, g2) for (f, f2), (g, g2) in cartesian(pairs, repeat=2)]


def _expected_frames(e):
    """Yield ``(kind, key, expected_frame)`` for every cell of ``e``."""
    b, V = e.base, e.V
    one = b.unit_object()
    for X, Y in cartesian(V.objects, repeat=2):
        E = e.E_obj[X, Y]
        yield "I", (X, Y), (b.hunit(E), e.E_arr[V.identity[X], V.identity[Y]], b.vid(E), b.vid(E))
    for f, g, f2, g2 in composable_quads(V):
        X, Y = V.src[f], V.src[g]
        X2, Y2 = V.tgt[f2], V.tgt[g2]
        yield "C", (f, g, f2, g2), (
            b.hcomp(e.E_arr[f, g], e.E_arr[f2, g2]),
            e.E_arr[V.comp[f, f2], V.comp[g, g2]],
            b.vid(e.E_obj[X, Y]),
            b.vid(e.E_obj[X2, Y2]),
        )
    for f in V.arrows:
        yield "U", f, (b.hunit(one), e.E_arr[f, f], e.unit_obj[V.src[f]], e.unit_obj[V.tgt[f]])
    for f, g, h in cartesian(V.arrows, repeat=3):
        X, Y, Z = V.src[f], V.src[g], V.src[h]
        X2, Y2, Z2 = V.tgt[f], V.tgt[g], V.tgt[h]
        yield "comp", (f, g, h), (
            b.tensor_h(e.E_arr[f, g], e.E_arr[g, h]),
            e.E_arr[f, h],
            e.comp_obj[X, Y, Z],
            e.comp_obj[X2, Y2, Z2],
        )


_CELL_TABLE = {"I": "I_cell", "C": "C_cell", "U": "unit_arr", "comp": "comp_arr"}


def _check_typing(e, rep):
    b, V = e.base, e.V
    one = b.unit_object()
    ok = True
    for X, Y in cartesian(V.objects, repeat=2):
        if (X, Y) not in e.E_obj:
            rep.add("E-missing", (X, Y), "E_obj", group="frame")
            ok = False
    for f, g in arrow_pairs(V):
        u = e.E_arr.get((f, g))
        if u is None:
            rep.add("E-missing", (f, g), "E_arr", group="frame")
            ok = False
            continue
        if (V.src[f], V.src[g]) not in e.E_obj or (V.tgt[f], V.tgt[g]) not in e.E_obj:
            continue
        if b.h_dom(u) != e.E_obj[V.src[f], V.src[g]] or b.h_cod(u) != e.E_obj[V.tgt[f], V.tgt[g]]:
            rep.add("E-typing", (f, g), "E_arr", group="frame")
            ok = False
    for X in V.objects:
        m = e.unit_obj.get(X)
        if m is None or m.dom != one or m.cod != e.E_obj.get((X, X)) or not m.is_valid():
            rep.add("unit-obj-typing", (X,), "unit_obj", group="frame")
            ok = False
    for X, Y, Z in cartesian(V.objects, repeat=3):
        m = e.comp_obj.get((X, Y, Z))
        want_dom = b.tensor_obj(e.E_obj.get((X, Y)), e.E_obj.get((Y, Z))) if ok else None
        if m is None or (ok and (m.dom != want_dom or m.cod != e.E_obj[X, Z])) or (m is not None and not m.is_valid()):
            rep.add("comp-obj-typing", (X, Y, Z), "comp_obj", group="frame")
            ok = False
    if not ok:
        return False
    for kind, key, frame in _expected_frames(e):
        table = getattr(e, _CELL_TABLE[kind])
        sq = table.get(key)
        inst = key if isinstance(key, tuple) else (key,)
        if sq is None:
            rep.add(f"{kind}-missing", inst, _CELL_TABLE[kind], group="frame")
            continue
        if sq.frame() != frame:
            rep.add(f"{kind}-frame", inst, _CELL_TABLE[kind], group="frame")
        elif not b.is_valid_square(sq):
            rep.add(f"{kind}-invalid", inst, _CELL_TABLE[kind], group="frame", detail="no such square in the base")
    return True


class _Law:
    """Evaluate one equation, recording ill-typed sides as violations."""

    def __init__(self, rep, group):
        self.rep, self.group = rep, group
        self.checked = 0

    def __call__(self, axiom, instance, lhs, rhs, location=""):
        self.checked += 1
        try:
            left = lhs()
            right = rhs()
        except (DcatError, KeyError) as exc:
            self.rep.add(axiom, instance, location or axiom, group=self.group, detail=f"ill-typed side: {exc}")
            return
        if left != right:
            self.rep.add(axiom, instance, location or axiom, group=self.group)


def validate_enrichment(e: EnrichedDoubleCategory, coherence=True, max_checks=20000) -> ValidationReport:
    rep = ValidationReport(f"enrichment {e.name} over {e.base.name}".strip())
    validate_category(e.V, rep, "V")
    if not rep.ok:
        return rep
    if not _check_typing(e, rep):
        return rep
    b, V = e.base, e.V
    law = _Law(rep, "law")
    idv = V.identity
    one = b.unit_object()
    U1 = b.hunit(one)
    E, I, C, UA, UO, CO, CA = e.E_arr, e.I_cell, e.C_cell, e.unit_arr, e.unit_obj, e.comp_obj, e.comp_arr

    for X in V.objects:
        law("E1", (X,), lambda: UA[idv[X]], lambda: b.vpaste(b.hunit_sq(UO[X]), I[X, X]))

    for X, Y, Z in cartesian(V.objects, repeat=3):
        law(
            "E2",
            (X, Y, Z),
            lambda: b.vpaste(b.tensor_sq(I[X, Y], I[Y, Z]), CA[idv[X], idv[Y], idv[Z]]),
            lambda: b.vpaste(b.hunit_sq(CO[X, Y, Z]), I[X, Z]),
        )

    lam1 = b.lunitor(U1)
    for f, g in V.composable_pairs():
        law(
            "E3",
            (f, g),
            lambda: UA[V.comp[f, g]],
            lambda: b.vpaste(lam1, b.hpaste(UA[f], UA[g]), C[f, f, g, g]),
        )

    pairs = list(V.composable_pairs())
    n = 0
    for (f, f2), (g, g2), (h, h2) in cartesian(pairs, repeat=3):
        n += 1
        if n > max_checks:
            break
        ff, gg, hh = V.comp[f, f2], V.comp[g, g2], V.comp[h, h2]
        law(
            "E4",
            (f, g, h, f2, g2, h2),
            lambda: b.vpaste(
                b.interchanger(E[f, g], E[f2, g2], E[g, h], E[g2, h2]),
                b.tensor_sq(C[f, g, f2, g2], C[g, h, g2, h2]),
                CA[ff, gg, hh],
            ),
            lambda: b.vpaste(b.hpaste(CA[f, g, h], CA[f2, g2, h2]), C[f, h, f2, h2]),
        )

    for f, g in arrow_pairs(V):
        ident = b.vunit_sq(E[f, g])
        law("T1", (f, g), lambda: b.vpaste(b.tensor_sq(UA[f], ident), CA[f, f, g]), lambda: ident)
        law("T2", (f, g), lambda: b.vpaste(b.tensor_sq(ident, UA[g]), CA[f, g, g]), lambda: ident)

    n = 0
    for f, g, h, k in cartesian(V.arrows, repeat=4):
        n += 1
        if n > max_checks:
            break
        law(
            "T3",
            (f, g, h, k),
            lambda: b.vpaste(b.tensor_sq(CA[f, g, h], b.vunit_sq(E[h, k])), CA[f, h, k]),
            lambda: b.vpaste(b.tensor_sq(b.vunit_sq(E[f, g]), CA[g, h, k]), CA[f, g, k]),
        )

    _check_distribution(e, law, max_checks)
    if coherence:
        _check_lax_coherence(e, _Law(rep, "lax-coherence"), max_checks)

    rep.counts.update(
        objects=len(V.objects),
        arrows=len(V.arrows),
        law_instances=law.checked,
    )
    return rep


def _elements_square(e, f, g):
    """Base squares ``U 1 => E(f, g)`` of any sides: the points of ``E(f, g)``."""
    b, V = e.base, e.V
    one = b.unit_object()
    src, tgt = e.E_obj[V.src[f], V.src[g]], e.E_obj[V.tgt[f], V.tgt[g]]
    out = []
    for u in b.verticals(one, src):
        for v in b.verticals(one, tgt):
            out.extend(b.squares(b.hunit(one), e.E_arr[f, g], u, v))
    return out


def _check_distribution(e, law, max_checks):
    """Interchange of the square-level composition with ``comp_arr`` on points."""
    b, V = e.base, e.V
    U1 = b.hunit(b.unit_object())
    lam1 = b.lunitor(U1)
    C, CA = e.C_cell, e.comp_arr

    def vert(p, q, f, g, f2, g2):
        return b.vpaste(lam1, b.hpaste(p, q), C[f, g, f2, g2])

    def horiz(p, q, f, g, h):
        return b.vpaste(b.tensor_sq(p, q), CA[f, g, h])

    pts = {}

    def points(f, g):
        if (f, g) not in pts:
            pts[f, g] = _elements_square(e, f, g)
        return pts[f, g]

    n = 0
    pairs = list(V.composable_pairs())
    for (f, f2), (g, g2), (h, h2) in cartesian(pairs, repeat=3):
        for p, p2, q, q2 in cartesian(points(f, g), points(f2, g2), points(g, h), points(g2, h2)):
            if p.right != p2.left or q.right != q2.left:
                continue
            n += 1
            if n > max_checks:
                return
            law(
                "D1",
                (f, g, h, f2, g2, h2),
                lambda: horiz(vert(p, p2, f, g, f2, g2), vert(q, q2, g, h, g2, h2), V.comp[f, f2], V.comp[g, g2], V.comp[h, h2]),
                lambda: vert(horiz(p, q, f, g, h), horiz(p2, q2, f2, g2, h2), f, h, f2, h2),
            )


def _check_lax_coherence(e, law, max_checks):
    b, V = e.base, e.V
    E, I, C = e.E_arr, e.I_cell, e.C_cell
    idv = V.identity
    for f, g in arrow_pairs(V):
        u = E[f, g]
        X, Y, X2, Y2 = V.src[f], V.src[g], V.tgt[f], V.tgt[g]
        law(
            "lax-left-unit",
            (f, g),
            lambda: b.vpaste(b.lunitor(u), b.hpaste(I[X, Y], b.vunit_sq(u)), C[idv[X], idv[Y], f, g]),
            lambda: b.vunit_sq(u),
        )
        law(
            "lax-right-unit",
            (f, g),
            lambda: b.vpaste(b.runitor(u), b.hpaste(b.vunit_sq(u), I[X2, Y2]), C[f, g, idv[X2], idv[Y2]]),
            lambda: b.vunit_sq(u),
        )
    n = 0
    triples = [(a, c, d) for a, c in V.composable_pairs() for d in V.out_of(V.tgt[c])]
    for (f, f2, f3), (g, g2, g3) in cartesian(triples, repeat=2):
        n += 1
        if n > max_checks:
            break
        ff, gg = V.comp[f, f2], V.comp[g, g2]
        ff3, gg3 = V.comp[f2, f3], V.comp[g2, g3]
        law(
            "lax-associativity",
            (f, g, f2, g2, f3, g3),
            lambda: b.vpaste(b.hpaste(C[f, g, f2, g2], b.vunit_sq(E[f3, g3])), C[ff, gg, f3, g3]),
            lambda: b.vpaste(b.hpaste(b.vunit_sq(E[f, g]), C[f2, g2, f3, g3]), C[f, g, ff3, gg3]),
        )


@dataclass
class EnrichedHom:
    objects: tuple
    hom: dict
    unit: dict
    comp: dict
    report: ValidationReport = field(default_factory=lambda: ValidationReport("enriched hom"))


def enriched_hom(e: EnrichedDoubleCategory) -> EnrichedHom:
    """The enriched category ``H`` with ``H(X, Y) = E(X, Y)``; refuses invalid input."""
    rep = validate_enrichment(e)
    if not rep.ok:
        raise InvalidInput(f"enrichment {e.name} does not validate", rep)
    b, V = e.base, e.V
    out = ValidationReport(f"enriched hom of {e.name}".strip())
    for X, Y in cartesian(V.objects, repeat=2):
        ident = b.vid(e.E_obj[X, Y])
        left = b.vcomp(b.tensor_v(e.unit_obj[X], ident), e.comp_obj[X, X, Y])
        right = b.vcomp(b.tensor_v(ident, e.unit_obj[Y]), e.comp_obj[X, Y, Y])
        if left != ident:
            out.add("enriched-left-unit", (X, Y), "comp_obj")
        if right != ident:
            out.add("enriched-right-unit", (X, Y), "comp_obj")
    for X, Y, Z, W in cartesian(V.objects, repeat=4):
        lhs = b.vcomp(b.tensor_v(e.comp_obj[X, Y, Z], b.vid(e.E_obj[Z, W])), e.comp_obj[X, Z, W])
        rhs = b.vcomp(b.tensor_v(b.vid(e.E_obj[X, Y]), e.comp_obj[Y, Z, W]), e.comp_obj[X, Y, W])
        if lhs != rhs:
            out.add("enriched-associativity", (X, Y, Z, W), "comp_obj")
    out.raise_if_failed()
    return EnrichedHom(
        tuple(V.objects),
        {k: v for k, v in e.E_obj.items()},
        dict(e.unit_obj),
        dict(e.comp_obj),
        out,
    )


# -- builders ---------------------------------------------------------------


def thin_cells(base, V, E_obj, E_arr, unit_obj, comp_obj):
    """Cells of an enrichment over a thin base, each the square on its required frame."""
    shell = EnrichedDoubleCategory(base, V, E_obj, E_arr, {}, {}, unit_obj, {}, comp_obj, {})
    tables = {k: {} for k in _CELL_TABLE.values()}
    for kind, key, frame in _expected_frames(shell):
        tables[_CELL_TABLE[kind]][key] = BaseSquare(*frame)
    return tables


def thin_enrichment(base, V, E_obj, E_arr, unit_obj, comp_obj, name="") -> EnrichedDoubleCategory:
    if not base.thin:
        raise FrameMismatch(f"{base.name} is not thin; cells must be given explicitly")
    t = thin_cells(base, V, E_obj, E_arr, unit_obj, comp_obj)
    return EnrichedDoubleCategory(
        base, V, dict(E_obj), dict(E_arr), t["I_cell"], t["C_cell"], dict(unit_obj), t["unit_arr"], dict(comp_obj), t["comp_arr"], name
    )


def trivial_enrichment(base, label="h", name="trivial") -> EnrichedDoubleCategory:
    """One object, ``E(*, *) = {h}``, every horizontal the unit on it."""
    from .base import fset

    b = base
    V = FinCategory.build(["*"], name="1")
    H = fset([label])
    i = V.identity["*"]
    E_obj = {("*", "*"): H}
    E_arr = {(i, i): b.hunit(H)}
    HH = b.tensor_obj(H, H)
    unit_obj = {"*": Fn(b.unit_object(), H, ((label,),))}
    comp_obj = {("*", "*", "*"): Fn(HH, H, tuple((label,) for _ in HH.elems))}
    if b.thin:
        return thin_enrichment(b, V, E_obj, E_arr, unit_obj, comp_obj, name)
    u = b.hunit(H)
    return EnrichedDoubleCategory(
        b,
        V,
        E_obj,
        E_arr,
        {("*", "*"): b.vunit_sq(u)},
        {(i, i, i, i): b.lunitor_inv(u)},
        unit_obj,
        {i: b.hunit_sq(unit_obj["*"])},
        comp_obj,
        {(i, i, i): b.hunit_sq(comp_obj["*", "*", "*"])},
        name,
    )
