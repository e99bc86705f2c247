"""Finite double categories: data model, axiom checker and derived constructions.

A double category is stored as its vertical category ``V``, its arrow
category ``A`` (objects are horizontal arrows, arrows are squares), the
frame functors ``S, T : A -> V``, the unit ``U : V -> A``, horizontal
composition ``odot`` defined on the pullback of ``S`` and ``T``, and the
component families ``lam``, ``rho``, ``alpha``.  Strict instances carry
identity families; strictness is a predicate, not a separate type.
"""

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian
from typing import Hashable, Mapping, Optional

from .errors import DanglingId, NotStrict, SizeBoundExceeded
from .fincat import (
    FinCategory,
    FinFunctor,
    check_ids,
    pullback_category,
    validate_category,
    validate_functor,
)
from .iso import Structure, find_isomorphism
from .report import ValidationReport

DEFAULT_MAX_OBJECTS = 8


@dataclass(frozen=True)
class Square:
    cell: Hashable
    top: Hashable
    bottom: Hashable
    left: Hashable
    right: Hashable


@dataclass(frozen=True, eq=False)
class FinDoubleCategory:
    V: FinCategory
    A: FinCategory
    S: FinFunctor
    T: FinFunctor
    U: FinFunctor
    odot: FinFunctor
    lam: Mapping
    rho: Mapping
    alpha: Mapping
    name: str = ""

    def __eq__(self, other):
        if not isinstance(other, FinDoubleCategory):
            return NotImplemented
        return (
            self.V == other.V
            and self.A == other.A
            and dict(self.S.obj_map) == dict(other.S.obj_map)
            and dict(self.S.arr_map) == dict(other.S.arr_map)
            and dict(self.T.obj_map) == dict(other.T.obj_map)
            and dict(self.T.arr_map) == dict(other.T.arr_map)
            and dict(self.U.obj_map) == dict(other.U.obj_map)
            and dict(self.U.arr_map) == dict(other.U.arr_map)
            and dict(self.odot.obj_map) == dict(other.odot.obj_map)
            and dict(self.odot.arr_map) == dict(other.odot.arr_map)
            and dict(self.lam) == dict(other.lam)
            and dict(self.rho) == dict(other.rho)
            and dict(self.alpha) == dict(other.alpha)
        )

    __hash__ = None

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return (
            f"<FinDoubleCategory{label}: {len(self.V.objects)} objects, {len(self.V.arrows)} verticals, "
            f"{len(self.A.objects)} horizontals, {len(self.A.arrows)} squares>"
        )

    @property
    def horizontals(self):
        return self.A.objects

    @property
    def squares(self):
        return self.A.arrows

    def square(self, cell) -> Square:
        return Square(cell, self.A.src[cell], self.A.tgt[cell], self.S.arr_map[cell], self.T.arr_map[cell])

    def hcomp(self, u, v):
        return self.odot.obj_map.get((u, v))

    def hcomp_sq(self, p, q):
        return self.odot.arr_map.get((p, q))

    def vcomp_sq(self, p, q):
        return self.A.comp.get((p, q))

    def unit(self, x):
        return self.U.obj_map[x]

    def unit_sq(self, f):
        return self.U.arr_map[f]

    @cached_property
    def frames(self):
        index = defaultdict(list)
        for p in self.A.arrows:
            index[self.A.src[p], self.A.tgt[p], self.S.arr_map[p], self.T.arr_map[p]].append(p)
        return index

    def squares_over(self, top, bottom, left, right):
        return self.frames.get((top, bottom, left, right), [])

    def hom_h(self, x, y):
        return [u for u in self.A.objects if self.S.obj_map[u] == x and self.T.obj_map[u] == y]

    @cached_property
    def composable_h(self):
        return [k for k in self.odot.dom.objects]

    def is_strict(self) -> bool:
        ident = set(self.A.identity.values())
        return all(v in ident for fam in (self.lam, self.rho, self.alpha) for v in fam.values())


def make_double(V, A, S, T, U, odot_obj, odot_arr, lam=None, rho=None, alpha=None, name=""):
    """Assemble a double category from its tables.

    ``S``, ``T`` and ``U`` are ``(obj_map, arr_map)`` pairs; ``odot_obj`` and
    ``odot_arr`` are keyed by composable pairs.  Missing component families
    default to identity squares, i.e. a strict instance.
    """
    Sf = FinFunctor(A, V, dict(S[0]), dict(S[1]), "S")
    Tf = FinFunctor(A, V, dict(T[0]), dict(T[1]), "T")
    Uf = FinFunctor(V, A, dict(U[0]), dict(U[1]), "U")
    pb, _, _ = pullback_category(Sf, Tf)
    odot = FinFunctor(pb, A, dict(odot_obj), dict(odot_arr), "odot")
    ident = A.identity
    if lam is None:
        lam = {u: ident[u] for u in A.objects}
    if rho is None:
        rho = {u: ident[u] for u in A.objects}
    if alpha is None:
        alpha = {}
        for u, v in pb.objects:
            for w in _right_partners(Sf, Tf, A, v):
                alpha[u, v, w] = ident.get(odot.obj_map.get((u, odot.obj_map.get((v, w)))), ident[u])
    return FinDoubleCategory(V, A, Sf, Tf, Uf, odot, dict(lam), dict(rho), dict(alpha), name)


def _right_partners(S, T, A, v):
    y = T.obj_map[v]
    return [w for w in A.objects if S.obj_map[w] == y]


def _composable_triples(d):
    after = defaultdict(list)
    for u in d.A.objects:
        after[d.S.obj_map[u]].append(u)
    for u in d.A.objects:
        for v in after[d.T.obj_map[u]]:
            for w in after[d.T.obj_map[v]]:
                yield u, v, w


# -- validation -------------------------------------------------------------


def validate_double_category(d: FinDoubleCategory, check_coherence=True) -> ValidationReport:
    rep = ValidationReport(f"double category {d.name}".strip())
    check_ids(d.V)
    check_ids(d.A)
    _check_double_ids(d)
    validate_category(d.V, rep, "V")
    validate_category(d.A, rep, "A")
    if not rep.ok:
        return rep
    for f, label in ((d.S, "S"), (d.T, "T"), (d.U, "U")):
        validate_functor(f, rep, label)
    if not rep.ok:
        return rep

    V, A, S, T, U = d.V, d.A, d.S, d.T, d.U
    for x in V.objects:
        if S.obj_map[U.obj_map[x]] != x:
            rep.add("unit-source", (x,), "U")
        if T.obj_map[U.obj_map[x]] != x:
            rep.add("unit-target", (x,), "U")
    for f in V.arrows:
        if S.arr_map[U.arr_map[f]] != f:
            rep.add("unit-source", (f,), "U")
        if T.arr_map[U.arr_map[f]] != f:
            rep.add("unit-target", (f,), "U")

    pb, _, _ = pullback_category(S, T)
    if d.odot.dom != pb:
        rep.add("odot-domain", (), "odot", detail="domain is not the pullback of S and T")
        return rep
    sub = validate_functor(d.odot, ValidationReport("odot"), "odot")
    rename = {"functor-composition": "interchange", "functor-identity": "odot-identity"}
    for v in sub.violations:
        rep.add(rename.get(v.axiom, v.axiom), v.instance, "odot", detail=v.detail)
    if any(v.axiom == "functor-total" for v in sub.violations):
        return rep

    hc, hs = d.odot.obj_map, d.odot.arr_map
    for u, v in pb.objects:
        w = hc[u, v]
        if S.obj_map[w] != S.obj_map[u]:
            rep.add("odot-source", (u, v), "odot")
        if T.obj_map[w] != T.obj_map[v]:
            rep.add("odot-target", (u, v), "odot")
    for p, q in pb.arrows:
        r = hs[p, q]
        if S.arr_map[r] != S.arr_map[p]:
            rep.add("odot-source", (p, q), "odot")
        if T.arr_map[r] != T.arr_map[q]:
            rep.add("odot-target", (p, q), "odot")
    if not rep.ok or not check_coherence:
        return rep

    _check_unitors(d, rep)
    _check_associator(d, rep)
    if rep.ok:
        _check_triangle_pentagon(d, rep)
    rep.counts.update(
        objects=len(V.objects),
        verticals=len(V.arrows),
        horizontals=len(A.objects),
        squares=len(A.arrows),
    )
    return rep


def _check_double_ids(d):
    aobjs, aarrs = set(d.A.objects), set(d.A.arrows)
    for u in d.lam:
        if u not in aobjs:
            raise DanglingId(f"lambda indexed by undeclared horizontal {u!r}")
    for fam, label in ((d.lam, "lambda"), (d.rho, "rho"), (d.alpha, "alpha")):
        for k, p in fam.items():
            if p not in aarrs:
                raise DanglingId(f"{label} component {k!r} is undeclared square {p!r}")


def _is_vid(V, f):
    return V.is_identity(f)


def _check_iso_family(d, rep, name, comps, keys, dom_of, cod_of):
    A, S, T, V = d.A, d.S, d.T, d.V
    good = {}
    for k in keys:
        p = comps.get(k)
        if p is None:
            rep.add(f"{name}-missing", k if isinstance(k, tuple) else (k,), name)
            continue
        want_src, want_tgt = dom_of(k), cod_of(k)
        if A.src[p] != want_src or A.tgt[p] != want_tgt:
            rep.add(f"{name}-typing", (k, p), name)
            continue
        if not (_is_vid(V, S.arr_map[p]) and _is_vid(V, T.arr_map[p])):
            rep.add(f"{name}-frame", (k, p), name, detail="source/target are not identities")
        if A.inverse(p) is None:
            rep.add(f"{name}-invertible", (k, p), name)
        good[k] = p
    return good


def _check_unitors(d, rep):
    A, S, T, U = d.A, d.S, d.T, d.U
    hc, hs = d.odot.obj_map, d.odot.arr_map
    lam = _check_iso_family(
        d, rep, "lambda", d.lam, A.objects, lambda u: u, lambda u: hc.get((U.obj_map[S.obj_map[u]], u))
    )
    rho = _check_iso_family(
        d, rep, "rho", d.rho, A.objects, lambda u: u, lambda u: hc.get((u, U.obj_map[T.obj_map[u]])))
    for p in A.arrows:
        u, v = A.src[p], A.tgt[p]
        if u in lam and v in lam:
            left = A.comp.get((lam[u], hs.get((U.arr_map[S.arr_map[p]], p))))
            right = A.comp.get((p, lam[v]))
            if left is None or left != right:
                rep.add("lambda-naturality", (p,), "lambda")
        if u in rho and v in rho:
            left = A.comp.get((rho[u], hs.get((p, U.arr_map[T.arr_map[p]]))))
            right = A.comp.get((p, rho[v]))
            if left is None or left != right:
                rep.add("rho-naturality", (p,), "rho")


def _check_associator(d, rep):
    A, S, T = d.A, d.S, d.T
    hc, hs = d.odot.obj_map, d.odot.arr_map
    triples = list(_composable_triples(d))
    extra = set(d.alpha) - set(triples)
    for k in sorted(extra, key=repr):
        rep.add("alpha-spurious", k, "alpha")
    al = _check_iso_family(
        d,
        rep,
        "alpha",
        d.alpha,
        triples,
        lambda k: hc.get((k[0], hc.get((k[1], k[2])))),
        lambda k: hc.get((hc.get((k[0], k[1])), k[2])),
    )
    after = defaultdict(list)
    for p in A.arrows:
        after[S.arr_map[p]].append(p)
    for p in A.arrows:
        for q in after[T.arr_map[p]]:
            for r in after[T.arr_map[q]]:
                src = (A.src[p], A.src[q], A.src[r])
                tgt = (A.tgt[p], A.tgt[q], A.tgt[r])
                if src not in al or tgt not in al:
                    continue
                left = A.comp.get((al[src], hs.get((hs.get((p, q)), r))))
                right = A.comp.get((hs.get((p, hs.get((q, r)))), al[tgt]))
                if left is None or left != right:
                    rep.add("alpha-naturality", (p, q, r), "alpha")


def _check_triangle_pentagon(d, rep):
    A, S, T, U = d.A, d.S, d.T, d.U
    hc, hs = d.odot.obj_map, d.odot.arr_map
    ident = A.identity
    for u, v in d.odot.dom.objects:
        unit = U.obj_map[T.obj_map[u]]
        left = A.comp.get((hs.get((ident[u], d.lam[v])), d.alpha.get((u, unit, v))))
        right = hs.get((d.rho[u], ident[v]))
        if left is None or left != right:
            rep.add("triangle", (u, v), "coherence")
    for u, v, w in _composable_triples(d):
        for x in _right_partners(S, T, A, w):
            a1 = d.alpha.get((u, v, hc[w, x]))
            a2 = d.alpha.get((hc[u, v], w, x))
            lhs = A.comp.get((a1, a2))
            b1 = hs.get((ident[u], d.alpha.get((v, w, x))))
            b2 = d.alpha.get((u, hc[v, w], x))
            b3 = hs.get((d.alpha.get((u, v, w)), ident[x]))
            rhs = A.comp.get((A.comp.get((b1, b2)), b3))
            if lhs is None or lhs != rhs:
                rep.add("pentagon", (u, v, w, x), "coherence")


# -- constructions ----------------------------------------------------------


def squares_double_category(c: FinCategory, name=None) -> FinDoubleCategory:
    """Double category of commuting squares in ``c``.

    Horizontal and vertical arrows are both the arrows of ``c``; a square
    ``(u, f, g, v)`` has top ``u``, left ``f``, right ``g``, bottom ``v`` and
    exists iff ``f;v == u;g``.
    """
    comp, src, tgt = c.comp, c.src, c.tgt
    squares = []
    for u in c.arrows:
        for f in c.out_of(src[u]):
            for g in c.out_of(tgt[u]):
                ug = comp[u, g]
                for v in c.hom(tgt[f], tgt[g]):
                    if comp[f, v] == ug:
                        squares.append((u, f, g, v))
    A_src = {s: s[0] for s in squares}
    A_tgt = {s: s[3] for s in squares}
    A_id = {u: (u, c.identity[src[u]], c.identity[tgt[u]], u) for u in c.arrows}
    by_top = defaultdict(list)
    for s in squares:
        by_top[s[0]].append(s)
    A_comp = {}
    for s in squares:
        for t in by_top[s[3]]:
            A_comp[s, t] = (s[0], comp[s[1], t[1]], comp[s[2], t[2]], t[3])
    A = FinCategory(tuple(c.arrows), tuple(squares), A_src, A_tgt, A_id, A_comp, "A")
    S = ({u: src[u] for u in c.arrows}, {s: s[1] for s in squares})
    T = ({u: tgt[u] for u in c.arrows}, {s: s[2] for s in squares})
    U = (
        {x: c.identity[x] for x in c.objects},
        {f: (c.identity[src[f]], f, f, c.identity[tgt[f]]) for f in c.arrows},
    )
    odot_obj, odot_arr = {}, {}
    for u in c.arrows:
        for v in c.out_of(tgt[u]):
            odot_obj[u, v] = comp[u, v]
    by_left = defaultdict(list)
    for s in squares:
        by_left[s[1]].append(s)
    for s in squares:
        for t in by_left[s[2]]:
            odot_arr[s, t] = (comp[s[0], t[0]], s[1], t[2], comp[s[3], t[3]])
    return make_double(c, A, S, T, U, odot_obj, odot_arr, name=name or (f"Sq({c.name})" if c.name else "Sq"))


def units_double_category(c: FinCategory, name=None) -> FinDoubleCategory:
    """Double category whose only horizontals and squares are units."""
    A = c.relabel({x: ("U", x) for x in c.objects}, {f: ("U", f) for f in c.arrows}, "A")
    S = ({("U", x): x for x in c.objects}, {("U", f): f for f in c.arrows})
    U = ({x: ("U", x) for x in c.objects}, {f: ("U", f) for f in c.arrows})
    odot_obj = {(("U", x), ("U", x)): ("U", x) for x in c.objects}
    odot_arr = {(("U", f), ("U", f)): ("U", f) for f in c.arrows}
    return make_double(c, A, S, S, U, odot_obj, odot_arr, name=name or "Units")


def terminal_double_category(name="terminal") -> FinDoubleCategory:
    V = FinCategory.build(["*"], name="1")
    return units_double_category(V, name)


def _require_strict(d, what):
    if not d.is_strict():
        raise NotStrict(f"{what} needs a strict double category; {d.name or 'input'} has non-identity unitors/associator")


def horizontal_category(d: FinDoubleCategory) -> FinCategory:
    _require_strict(d, "horizontal_category")
    comp = dict(d.odot.obj_map)
    return FinCategory(
        tuple(d.V.objects),
        tuple(d.A.objects),
        dict(d.S.obj_map),
        dict(d.T.obj_map),
        dict(d.U.obj_map),
        comp,
        f"H({d.name})" if d.name else "H",
    )


def _companion_data(d, f):
    """All ``(u, phi, psi)`` exhibiting ``f`` in the diagonal category."""
    V, U = d.V, d.U
    x, y = V.src[f], V.tgt[f]
    ux, uy = U.obj_map[x], U.obj_map[y]
    idx, idy = V.identity[x], V.identity[y]
    out = []
    for u in d.hom_h(x, y):
        for phi in d.squares_over(ux, u, idx, f):
            for psi in d.squares_over(u, uy, f, idy):
                out.append((u, phi, psi))
    return out


def diagonal_category(d: FinDoubleCategory) -> FinCategory:
    """Category of tuples ``(f, u, phi, psi)`` with ``phi: U_X => u`` and ``psi: u => U_Y``.

    Composite of ``(f, u, phi, psi)`` and ``(g, v, phi2, psi2)`` is
    ``(f;g, u.v, phi . (U_f ; phi2), (psi ; U_g) . psi2)`` where ``.`` is
    horizontal composition and ``;`` vertical pasting.
    """
    _require_strict(d, "diagonal_category")
    V, A = d.V, d.A
    arrows, src, tgt = [], {}, {}
    for f in V.arrows:
        for u, phi, psi in _companion_data(d, f):
            a = (f, u, phi, psi)
            arrows.append(a)
            src[a], tgt[a] = V.src[f], V.tgt[f]
    identity = {}
    for x in V.objects:
        i = V.identity[x]
        ux = d.unit(x)
        identity[x] = (i, ux, d.unit_sq(i), d.unit_sq(i))
    out = defaultdict(list)
    for a in arrows:
        out[src[a]].append(a)
    comp = {}
    for a in arrows:
        f, u, phi, psi = a
        for b in out[tgt[a]]:
            g, v, phi2, psi2 = b
            new_phi = d.hcomp_sq(phi, A.comp.get((d.unit_sq(f), phi2)))
            new_psi = d.hcomp_sq(A.comp.get((psi, d.unit_sq(g))), psi2)
            comp[a, b] = (V.comp[f, g], d.hcomp(u, v), new_phi, new_psi)
    return FinCategory(tuple(V.objects), tuple(arrows), src, tgt, identity, comp, "diagonal")


@dataclass(frozen=True, eq=False)
class Fin2Category:
    base: FinCategory
    cells: tuple
    cell_src: Mapping
    cell_tgt: Mapping
    cell_id: Mapping
    vcomp: Mapping
    hcomp: Mapping
    name: str = ""

    def __repr__(self):
        return f"<Fin2Category {self.name}: {len(self.base.objects)} objects, {len(self.base.arrows)} 1-cells, {len(self.cells)} 2-cells>"


def validate_2category(c: Fin2Category) -> ValidationReport:
    rep = ValidationReport(f"2-category {c.name}".strip())
    B = c.base
    validate_category(B, rep, "1-cells")
    if not rep.ok:
        return rep
    cells = set(c.cells)
    for a in c.cells:
        s, t = c.cell_src.get(a), c.cell_tgt.get(a)
        if s not in B.src or t not in B.src or B.src[s] != B.src[t] or B.tgt[s] != B.tgt[t]:
            rep.add("cell-typing", (a,), "2-cells")
    for f in B.arrows:
        i = c.cell_id.get(f)
        if i not in cells or c.cell_src[i] != f or c.cell_tgt[i] != f:
            rep.add("cell-identity-typing", (f,), "2-cells")
    if not rep.ok:
        return rep
    out = defaultdict(list)
    for a in c.cells:
        out[c.cell_src[a]].append(a)
    for a in c.cells:
        for b in out[c.cell_tgt[a]]:
            k = c.vcomp.get((a, b))
            if k not in cells:
                rep.add("vertical-total", (a, b), "2-cells")
            elif c.cell_src[k] != c.cell_src[a] or c.cell_tgt[k] != c.cell_tgt[b]:
                rep.add("vertical-typing", (a, b), "2-cells")
    for a in c.cells:
        if c.vcomp.get((c.cell_id[c.cell_src[a]], a)) != a or c.vcomp.get((a, c.cell_id[c.cell_tgt[a]])) != a:
            rep.add("vertical-unit", (a,), "2-cells")
        for b in out[c.cell_tgt[a]]:
            ab = c.vcomp.get((a, b))
            for e in out[c.cell_tgt[b]]:
                if c.vcomp.get((ab, e)) != c.vcomp.get((a, c.vcomp.get((b, e)))):
                    rep.add("vertical-associativity", (a, b, e), "2-cells")
    after = defaultdict(list)
    for a in c.cells:
        after[B.src[c.cell_src[a]]].append(a)
    for a in c.cells:
        for b in after[B.tgt[c.cell_src[a]]]:
            k = c.hcomp.get((a, b))
            if k not in cells:
                rep.add("horizontal-total", (a, b), "2-cells")
                continue
            want_s = B.comp[c.cell_src[a], c.cell_src[b]]
            want_t = B.comp[c.cell_tgt[a], c.cell_tgt[b]]
            if c.cell_src[k] != want_s or c.cell_tgt[k] != want_t:
                rep.add("horizontal-typing", (a, b), "2-cells")
    if not rep.ok:
        return rep
    for a in c.cells:
        x, y = B.src[c.cell_src[a]], B.tgt[c.cell_src[a]]
        if c.hcomp[c.cell_id[B.identity[x]], a] != a or c.hcomp[a, c.cell_id[B.identity[y]]] != a:
            rep.add("horizontal-unit", (a,), "2-cells")
        for b in after[y]:
            ab = c.hcomp[a, b]
            for e in after[B.tgt[c.cell_src[b]]]:
                if c.hcomp[ab, e] != c.hcomp[a, c.hcomp[b, e]]:
                    rep.add("horizontal-associativity", (a, b, e), "2-cells")
    for f, g in B.composable_pairs():
        if c.hcomp[c.cell_id[f], c.cell_id[g]] != c.cell_id[B.comp[f, g]]:
            rep.add("identity-interchange", (f, g), "2-cells")
    for a in c.cells:
        for b in out[c.cell_tgt[a]]:
            ab = c.vcomp[a, b]
            for a2 in after[B.tgt[c.cell_src[a]]]:
                for b2 in out[c.cell_tgt[a2]]:
                    lhs = c.hcomp[ab, c.vcomp[a2, b2]]
                    rhs = c.vcomp.get((c.hcomp[a, a2], c.hcomp[b, b2]))
                    if lhs != rhs:
                        rep.add("interchange", (a, b, a2, b2), "2-cells")
    rep.counts.update(objects=len(B.objects), one_cells=len(B.arrows), two_cells=len(c.cells))
    return rep


def globular_horizontal(d: FinDoubleCategory) -> Fin2Category:
    _require_strict(d, "globular_horizontal")
    H = horizontal_category(d)
    V, A, S, T = d.V, d.A, d.S, d.T
    cells = tuple(
        p for p in A.arrows if V.is_identity(S.arr_map[p]) and V.is_identity(T.arr_map[p])
    )
    cs = set(cells)
    vcomp = {(p, q): r for (p, q), r in A.comp.items() if p in cs and q in cs}
    hcomp = {(p, q): r for (p, q), r in d.odot.arr_map.items() if p in cs and q in cs}
    return Fin2Category(H, cells, {p: A.src[p] for p in cells}, {p: A.tgt[p] for p in cells},
                        {u: A.identity[u] for u in A.objects}, vcomp, hcomp, "H2")


def globular_vertical(d: FinDoubleCategory) -> Fin2Category:
    """2-category with vertical 1-cells and squares ``U_X => U_Y`` as 2-cells.

    Vertical composition of 2-cells is horizontal composition of squares,
    conjugated by the left unitor of the unit horizontals so that weak
    instances are handled too.
    """
    V, A, S, T, U = d.V, d.A, d.S, d.T, d.U
    cells, c_src, c_tgt = [], {}, {}
    for p in A.arrows:
        top, bot = A.src[p], A.tgt[p]
        f, g = S.arr_map[p], T.arr_map[p]
        if V.src[f] != V.src[g] or V.tgt[f] != V.tgt[g]:
            continue
        if top == U.obj_map[V.src[f]] and bot == U.obj_map[V.tgt[f]]:
            cells.append(p)
            c_src[p], c_tgt[p] = f, g
    cs = set(cells)
    by_src = defaultdict(list)
    for p in cells:
        by_src[c_src[p]].append(p)
    vcomp = {}
    for p in cells:
        for q in by_src[c_tgt[p]]:
            x, y = V.src[c_src[p]], V.tgt[c_src[p]]
            lx, ly = d.lam[U.obj_map[x]], d.lam[U.obj_map[y]]
            mid = d.hcomp_sq(p, q)
            vcomp[p, q] = A.comp.get((A.comp.get((lx, mid)), A.inverse(ly)))
    hcomp = {(p, q): r for (p, q), r in A.comp.items() if p in cs and q in cs}
    cell_id = {f: U.arr_map[f] for f in V.arrows}
    return Fin2Category(V, tuple(cells), c_src, c_tgt, cell_id, vcomp, hcomp, "V2")


def transversal(d: FinDoubleCategory) -> FinDoubleCategory:
    """Exchange the roles of horizontal and vertical arrows."""
    _require_strict(d, "transversal")
    V, A, S, T, U = d.V, d.A, d.S, d.T, d.U
    H = horizontal_category(d)
    At_objs = tuple((V.src[f], V.tgt[f], f) for f in V.arrows)
    At_arrs = tuple((A.src[p], A.tgt[p], p) for p in A.arrows)
    src = {a: (S.obj_map[a[0]], S.obj_map[a[1]], S.arr_map[a[2]]) for a in At_arrs}
    tgt = {a: (T.obj_map[a[0]], T.obj_map[a[1]], T.arr_map[a[2]]) for a in At_arrs}
    ident = {o: (U.obj_map[o[0]], U.obj_map[o[1]], U.arr_map[o[2]]) for o in At_objs}
    out = defaultdict(list)
    for a in At_arrs:
        out[src[a]].append(a)
    comp = {}
    for a in At_arrs:
        for b in out[tgt[a]]:
            comp[a, b] = (d.hcomp(a[0], b[0]), d.hcomp(a[1], b[1]), d.hcomp_sq(a[2], b[2]))
    At = FinCategory(At_objs, At_arrs, src, tgt, ident, comp, "A^t")
    St = ({o: o[0] for o in At_objs}, {a: a[0] for a in At_arrs})
    Tt = ({o: o[1] for o in At_objs}, {a: a[1] for a in At_arrs})
    Ut = (
        {x: (x, x, V.identity[x]) for x in V.objects},
        {u: (u, u, A.identity[u]) for u in A.objects},
    )
    odot_obj, odot_arr = {}, {}
    for o in At_objs:
        for o2 in At_objs:
            if o[1] == o2[0]:
                odot_obj[o, o2] = (o[0], o2[1], V.comp[o[2], o2[2]])
    by_top = defaultdict(list)
    for a in At_arrs:
        by_top[a[0]].append(a)
    for a in At_arrs:
        for b in by_top[a[1]]:
            odot_arr[a, b] = (a[0], b[1], A.comp[a[2], b[2]])
    name = f"{d.name}^t" if d.name else "transversal"
    return make_double(H, At, St, Tt, Ut, odot_obj, odot_arr, name=name)


def vertical_opposite(d: FinDoubleCategory) -> FinDoubleCategory:
    """Take opposites of ``V`` and ``A``; frames keep their horizontal direction.

    Unitor and associator components are replaced by their inverses so
    that they still point from ``u`` to ``U . u`` etc.
    """
    V, A = d.V.op(), d.A.op()
    inv = d.A.inverse
    S = FinFunctor(A, V, dict(d.S.obj_map), dict(d.S.arr_map), "S")
    T = FinFunctor(A, V, dict(d.T.obj_map), dict(d.T.arr_map), "T")
    U = FinFunctor(V, A, dict(d.U.obj_map), dict(d.U.arr_map), "U")
    pb, _, _ = pullback_category(S, T)
    odot = FinFunctor(pb, A, dict(d.odot.obj_map), dict(d.odot.arr_map), "odot")

    def flip(fam):
        return {k: (inv(p) if inv(p) is not None else p) for k, p in fam.items()}

    name = d.name[:-4] if d.name.endswith("^vop") else (f"{d.name}^vop" if d.name else "")
    return FinDoubleCategory(V, A, S, T, U, odot, flip(d.lam), flip(d.rho), flip(d.alpha), name)


def is_thin(d: FinDoubleCategory) -> bool:
    return all(len(v) <= 1 for v in d.frames.values())


def is_inclusion(d: FinDoubleCategory) -> bool:
    _require_strict(d, "is_inclusion")
    return all(_companion_data(d, f) for f in d.V.arrows)


def is_framed(d: FinDoubleCategory) -> bool:
    return is_inclusion(d) and is_inclusion(vertical_opposite(d))


def companions(d: FinDoubleCategory, f):
    """Horizontals ``u`` admitting diagonal data over the vertical ``f``."""
    return sorted({u for u, _, _ in _companion_data(d, f)}, key=repr)


def conjoints(d: FinDoubleCategory, f):
    return companions(vertical_opposite(d), f)


# -- isomorphism ------------------------------------------------------------


@dataclass
class DoubleIso:
    V_obj: dict
    V_arr: dict
    A_obj: dict
    A_arr: dict

    def to_dict(self):
        def enc(m):
            return [[repr(k), repr(v)] for k, v in sorted(m.items(), key=lambda kv: repr(kv[0]))]

        return {"V_obj": enc(self.V_obj), "V_arr": enc(self.V_arr), "A_obj": enc(self.A_obj), "A_arr": enc(self.A_arr)}


def _structure(d: FinDoubleCategory) -> Structure:
    V, A = d.V, d.A
    s = Structure({"Vo": list(V.objects), "Va": list(V.arrows), "Ao": list(A.objects), "Aa": list(A.arrows)})
    for C, o, a in ((V, "Vo", "Va"), (A, "Ao", "Aa")):
        s.add_op(f"{o}.src", [a], o, {(k,): v for k, v in C.src.items()})
        s.add_op(f"{o}.tgt", [a], o, {(k,): v for k, v in C.tgt.items()})
        s.add_op(f"{o}.id", [o], a, {(k,): v for k, v in C.identity.items()})
        s.add_op(f"{o}.comp", [a, a], a, dict(C.comp))
    for F, name, io, ia, oo, oa in (
        (d.S, "S", "Ao", "Aa", "Vo", "Va"),
        (d.T, "T", "Ao", "Aa", "Vo", "Va"),
        (d.U, "U", "Vo", "Va", "Ao", "Aa"),
    ):
        s.add_op(f"{name}.o", [io], oo, {(k,): v for k, v in F.obj_map.items()})
        s.add_op(f"{name}.a", [ia], oa, {(k,): v for k, v in F.arr_map.items()})
    s.add_op("odot.o", ["Ao", "Ao"], "Ao", dict(d.odot.obj_map))
    s.add_op("odot.a", ["Aa", "Aa"], "Aa", dict(d.odot.arr_map))
    s.add_op("lam", ["Ao"], "Aa", {(k,): v for k, v in d.lam.items()})
    s.add_op("rho", ["Ao"], "Aa", {(k,): v for k, v in d.rho.items()})
    s.add_op("alpha", ["Ao", "Ao", "Ao"], "Aa", dict(d.alpha))
    return s


def iso_search(d1: FinDoubleCategory, d2: FinDoubleCategory, max_objects: int = DEFAULT_MAX_OBJECTS) -> Optional[DoubleIso]:
    """Search for a double isomorphism ``d1 -> d2``.

    Complete for inputs whose arrow categories have at most ``max_objects``
    objects (horizontal arrows); larger inputs raise SizeBoundExceeded.
    """
    for d in (d1, d2):
        if len(d.A.objects) > max_objects:
            raise SizeBoundExceeded(f"horizontal arrows of {d.name or 'input'}", len(d.A.objects), max_objects)
    m = find_isomorphism(_structure(d1), _structure(d2), order=["Vo", "Ao", "Va", "Aa"])
    if m is None:
        return None
    return DoubleIso(m["Vo"], m["Va"], m["Ao"], m["Aa"])


def category_iso(c1: FinCategory, c2: FinCategory):
    s = []
    for C in (c1, c2):
        st = Structure({"o": list(C.objects), "a": list(C.arrows)})
        st.add_op("src", ["a"], "o", {(k,): v for k, v in C.src.items()})
        st.add_op("tgt", ["a"], "o", {(k,): v for k, v in C.tgt.items()})
        st.add_op("id", ["o"], "a", {(k,): v for k, v in C.identity.items()})
        st.add_op("comp", ["a", "a"], "a", dict(C.comp))
        s.append(st)
    return find_isomorphism(*s)


def double_label_maps(d: FinDoubleCategory, prefix=("x", "f", "u", "s")):
    """The renaming used by :func:`relabel_double`, as four dicts."""

    def names(items, p):
        return {k: f"{p}{i}" for i, k in enumerate(sorted(items, key=repr))}

    vo, va, ao, aa = (names(x, p) for x, p in zip((d.V.objects, d.V.arrows, d.A.objects, d.A.arrows), prefix))
    for x in d.V.objects:
        va[d.V.identity[x]] = f"id_{vo[x]}"
    for u in d.A.objects:
        aa[d.A.identity[u]] = f"id_{ao[u]}"
    return vo, va, ao, aa


def relabel_double(d: FinDoubleCategory, prefix=("x", "f", "u", "s"), name=None) -> FinDoubleCategory:
    """Rename every id to a short string, deterministically by repr order."""
    vo, va, ao, aa = double_label_maps(d, prefix)
    V = d.V.relabel(vo, va, "V")
    A = d.A.relabel(ao, aa, "A")
    S = ({ao[k]: vo[v] for k, v in d.S.obj_map.items()}, {aa[k]: va[v] for k, v in d.S.arr_map.items()})
    T = ({ao[k]: vo[v] for k, v in d.T.obj_map.items()}, {aa[k]: va[v] for k, v in d.T.arr_map.items()})
    U = ({vo[k]: ao[v] for k, v in d.U.obj_map.items()}, {va[k]: aa[v] for k, v in d.U.arr_map.items()})
    oo = {(ao[a], ao[b]): ao[c] for (a, b), c in d.odot.obj_map.items()}
    oa = {(aa[a], aa[b]): aa[c] for (a, b), c in d.odot.arr_map.items()}
    lam = {ao[k]: aa[v] for k, v in d.lam.items()}
    rho = {ao[k]: aa[v] for k, v in d.rho.items()}
    alpha = {tuple(ao[x] for x in k): aa[v] for k, v in d.alpha.items()}
    return make_double(V, A, S, T, U, oo, oa, lam, rho, alpha, name=name if name is not None else d.name)


# -- monoidal structure -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class MonoidalFinDoubleCategory:
    carrier: FinDoubleCategory
    tensorV_obj: Mapping
    tensorV_arr: Mapping
    tensorA_obj: Mapping
    tensorA_arr: Mapping
    unitV: Hashable
    unitA: Hashable
    name: str = ""

    def __eq__(self, other):
        if not isinstance(other, MonoidalFinDoubleCategory):
            return NotImplemented
        return (
            self.carrier == other.carrier
            and (self.unitV, self.unitA) == (other.unitV, other.unitA)
            and all(
                dict(getattr(self, k)) == dict(getattr(other, k))
                for k in ("tensorV_obj", "tensorV_arr", "tensorA_obj", "tensorA_arr")
            )
        )

    __hash__ = None


def _check_tensor(C: FinCategory, t_obj, t_arr, unit, rep, loc):
    ok = True
    for x, y in cartesian(C.objects, C.objects):
        if t_obj.get((x, y)) not in C.identity:
            rep.add("tensor-total", (x, y), loc)
            ok = False
    for a, b in cartesian(C.arrows, C.arrows):
        if t_arr.get((a, b)) not in C.src:
            rep.add("tensor-total", (a, b), loc)
            ok = False
    if unit not in C.identity:
        rep.add("unit-preservation", (unit,), loc, detail="unit is not an object")
        return False
    if not ok:
        return False
    for a, b in cartesian(C.arrows, C.arrows):
        k = t_arr[a, b]
        if C.src[k] != t_obj[C.src[a], C.src[b]] or C.tgt[k] != t_obj[C.tgt[a], C.tgt[b]]:
            rep.add("tensor-typing", (a, b), loc)
    for x, y in cartesian(C.objects, C.objects):
        if t_arr[C.identity[x], C.identity[y]] != C.identity[t_obj[x, y]]:
            rep.add("tensor-functoriality", (x, y), loc)
    pairs = list(C.composable_pairs())
    for (a, a2), (b, b2) in cartesian(pairs, pairs):
        if t_arr[C.comp[a, a2], C.comp[b, b2]] != C.comp.get((t_arr[a, b], t_arr[a2, b2])):
            rep.add("tensor-functoriality", (a, a2, b, b2), loc)
    for x, y, z in cartesian(C.objects, repeat=3):
        if t_obj[t_obj[x, y], z] != t_obj[x, t_obj[y, z]]:
            rep.add("tensor-associativity", (x, y, z), loc)
    for a, b, c in cartesian(C.arrows, repeat=3):
        if t_arr[t_arr[a, b], c] != t_arr[a, t_arr[b, c]]:
            rep.add("tensor-associativity", (a, b, c), loc)
    iu = C.identity[unit]
    for x in C.objects:
        if t_obj[unit, x] != x or t_obj[x, unit] != x:
            rep.add("tensor-unit", (x,), loc)
    for a in C.arrows:
        if t_arr[iu, a] != a or t_arr[a, iu] != a:
            rep.add("tensor-unit", (a,), loc)
    return True


def validate_monoidal(m: MonoidalFinDoubleCategory) -> ValidationReport:
    rep = ValidationReport(f"monoidal double category {m.name}".strip())
    d = m.carrier
    okv = _check_tensor(d.V, m.tensorV_obj, m.tensorV_arr, m.unitV, rep, "tensorV")
    oka = _check_tensor(d.A, m.tensorA_obj, m.tensorA_arr, m.unitA, rep, "tensorA")
    if not (okv and oka):
        return rep
    tvo, tva, tao, taa = m.tensorV_obj, m.tensorV_arr, m.tensorA_obj, m.tensorA_arr
    for F, label in ((d.S, "S"), (d.T, "T")):
        if F.obj_map[m.unitA] != m.unitV:
            rep.add("unit-preservation", (m.unitA,), label)
        for u, v in cartesian(d.A.objects, repeat=2):
            if F.obj_map[tao[u, v]] != tvo[F.obj_map[u], F.obj_map[v]]:
                rep.add("strict-monoidal", (u, v), label)
        for p, q in cartesian(d.A.arrows, repeat=2):
            if F.arr_map[taa[p, q]] != tva[F.arr_map[p], F.arr_map[q]]:
                rep.add("strict-monoidal", (p, q), label)
    if d.U.obj_map[m.unitV] != m.unitA:
        rep.add("unit-preservation", (m.unitV,), "U")
    for x, y in cartesian(d.V.objects, repeat=2):
        if d.U.obj_map[tvo[x, y]] != tao[d.U.obj_map[x], d.U.obj_map[y]]:
            rep.add("strict-monoidal", (x, y), "U")
    for f, g in cartesian(d.V.arrows, repeat=2):
        if d.U.arr_map[tva[f, g]] != taa[d.U.arr_map[f], d.U.arr_map[g]]:
            rep.add("strict-monoidal", (f, g), "U")
    pb = d.odot.dom
    if d.odot.obj_map.get((m.unitA, m.unitA)) != m.unitA:
        rep.add("unit-preservation", (m.unitA, m.unitA), "odot")
    for (u, v), (u2, v2) in cartesian(pb.objects, repeat=2):
        lhs = d.odot.obj_map.get((tao[u, u2], tao[v, v2]))
        rhs = tao[d.odot.obj_map[u, v], d.odot.obj_map[u2, v2]]
        if lhs != rhs:
            rep.add("strict-monoidal", ((u, v), (u2, v2)), "odot")
    for (p, q), (p2, q2) in cartesian(pb.arrows, repeat=2):
        lhs = d.odot.arr_map.get((taa[p, p2], taa[q, q2]))
        rhs = taa[d.odot.arr_map[p, q], d.odot.arr_map[p2, q2]]
        if lhs != rhs:
            rep.add("strict-monoidal", ((p, q), (p2, q2)), "odot")
    return rep


def monoid_category(elements, mult, unit, name="M") -> FinCategory:
    """One-object category of a finite monoid; arrows are the elements."""
    elements = tuple(elements)
    return FinCategory(
        ("*",),
        elements,
        {e: "*" for e in elements},
        {e: "*" for e in elements},
        {"*": unit},
        {(a, b): mult(a, b) for a in elements for b in elements},
        name,
    )


def squares_monoidal(c: FinCategory, name=None) -> MonoidalFinDoubleCategory:
    """``Sq(c)`` for a one-object category of a commutative monoid, tensored by the monoid."""
    d = squares_double_category(c)
    (obj,) = c.objects
    tvo = {(obj, obj): obj}
    tva = {(a, b): c.comp[a, b] for a in c.arrows for b in c.arrows}
    tao = dict(tva)
    taa = {
        (p, q): tuple(c.comp[x, y] for x, y in zip(p, q)) for p in d.A.arrows for q in d.A.arrows
    }
    unit = c.identity[obj]
    return MonoidalFinDoubleCategory(d, tvo, tva, tao, taa, obj, unit, name or f"Sq({c.name})")
