"""Single-entry corruptions of double categories and enrichments.

Each generator yields ``(description, mutated value)``.  A corruption
replaces one table entry with a different id of the same sort (an object
of ``A`` by another object of ``A``, and so on), so that detection has to
come from the axioms rather than from dangling references.
"""

from dataclasses import replace
from itertools import product as cartesian

from .doublecat import FinDoubleCategory
from .enrich import EnrichedDoubleCategory, thin_cells
from .fincat import FinCategory, FinFunctor, pullback_category


def _with_A(d: FinDoubleCategory, A: FinCategory) -> FinDoubleCategory:
    S = replace(d.S, dom=A)
    T = replace(d.T, dom=A)
    U = replace(d.U, cod=A)
    pb, _, _ = pullback_category(S, T)
    odot = FinFunctor(pb, A, dict(d.odot.obj_map), dict(d.odot.arr_map), "odot")
    return replace(d, A=A, S=S, T=T, U=U, odot=odot)


def _with_V(d: FinDoubleCategory, V: FinCategory) -> FinDoubleCategory:
    return replace(d, V=V, S=replace(d.S, cod=V), T=replace(d.T, cod=V), U=replace(d.U, dom=V))


def _redirect(table, sort):
    for key, val in sorted(table.items(), key=repr):
        for other in sort:
            if other != val:
                new = dict(table)
                new[key] = other
                yield key, other, new


DOUBLE_TABLES = ("U.obj", "U.arr", "odot.obj", "odot.arr", "A.comp", "V.comp")


def double_mutations(d: FinDoubleCategory, tables=DOUBLE_TABLES):
    """Every sort-preserving single-entry corruption of the chosen tables."""
    V, A = d.V, d.A
    if "U.obj" in tables:
        for key, val, new in _redirect(d.U.obj_map, A.objects):
            yield f"U.obj[{key!r}] -> {val!r}", replace(d, U=replace(d.U, obj_map=new))
    if "U.arr" in tables:
        for key, val, new in _redirect(d.U.arr_map, A.arrows):
            yield f"U.arr[{key!r}] -> {val!r}", replace(d, U=replace(d.U, arr_map=new))
    if "odot.obj" in tables:
        for key, val, new in _redirect(d.odot.obj_map, A.objects):
            yield f"odot.obj[{key!r}] -> {val!r}", replace(d, odot=replace(d.odot, obj_map=new))
    if "odot.arr" in tables:
        for key, val, new in _redirect(d.odot.arr_map, A.arrows):
            yield f"odot.arr[{key!r}] -> {val!r}", replace(d, odot=replace(d.odot, arr_map=new))
    if "A.comp" in tables:
        for key, val, new in _redirect(A.comp, A.arrows):
            yield f"A.comp[{key!r}] -> {val!r}", _with_A(d, replace(A, comp=new))
    if "V.comp" in tables:
        for key, val, new in _redirect(V.comp, V.arrows):
            yield f"V.comp[{key!r}] -> {val!r}", _with_V(d, replace(V, comp=new))
    if "S" in tables:
        for key, val, new in _redirect(d.S.arr_map, V.arrows):
            yield f"S.arr[{key!r}] -> {val!r}", replace(d, S=replace(d.S, arr_map=new))
    if "T" in tables:
        for key, val, new in _redirect(d.T.arr_map, V.arrows):
            yield f"T.arr[{key!r}] -> {val!r}", replace(d, T=replace(d.T, arr_map=new))
    if "coherence" in tables:
        for name in ("lam", "rho", "alpha"):
            for key, val, new in _redirect(getattr(d, name), A.arrows):
                yield f"{name}[{key!r}] -> {val!r}", replace(d, **{name: new})


def _horizontals_like(base, u, pool):
    return [v for v in pool if base.h_dom(v) == base.h_dom(u) and base.h_cod(v) == base.h_cod(u) and v != u]


def _horizontal_pool(e):
    b = e.base
    pool = set(e.E_arr.values())
    sets = {x for x in e.E_obj.values()}
    sets |= {b.tensor_obj(x, y) for x in e.E_obj.values() for y in e.E_obj.values()}
    small = [x for x in sets if len(x) <= 3]
    for x, y in cartesian(small, repeat=2):
        try:
            pool.update(b.horizontals(x, y) if b.thin else b.horizontals(x, y, max_fiber=1))
        except Exception:
            continue
    return pool


def enrichment_mutations(e: EnrichedDoubleCategory, max_per_entry=3):
    """Corrupt one cell, one object-level map, or one ``E(f, g)`` at a time.

    Cells are replaced by squares differing in their top or bottom horizontal.
    Object-level maps are replaced by other functions of the same type with
    every cell re-framed to match, so only law checks can catch them.
    ``E(f, g)`` replacements likewise re-frame the cells when the base is thin.
    """
    b = e.base
    pool = _horizontal_pool(e)
    for field in ("I_cell", "C_cell", "unit_arr", "comp_arr"):
        table = getattr(e, field)
        for key, sq in sorted(table.items(), key=repr):
            for side in ("bottom", "top"):
                others = _horizontals_like(b, getattr(sq, side), pool)
                for other in sorted(others, key=repr)[:max_per_entry]:
                    new = dict(table)
                    new[key] = replace(sq, **{side: other})
                    yield f"{field}[{key!r}].{side} -> {other!r}", e.replace(**{field: new})
    for field in ("unit_obj", "comp_obj"):
        table = getattr(e, field)
        for key, m in sorted(table.items(), key=repr):
            for other in b.verticals(m.dom, m.cod)[: max_per_entry + 1]:
                if other == m:
                    continue
                new = dict(table)
                new[key] = other
                yield f"{field}[{key!r}] -> {other.images!r}", _reframe(e, **{field: new})
    for key, u in sorted(e.E_arr.items(), key=repr):
        for other in sorted(_horizontals_like(b, u, pool), key=repr)[:max_per_entry]:
            new = dict(e.E_arr)
            new[key] = other
            yield f"E_arr[{key!r}] -> {other!r}", _reframe(e, E_arr=new)


def _reframe(e, **changes):
    e2 = e.replace(**changes)
    if not e.base.thin:
        return e2
    t = thin_cells(e.base, e2.V, e2.E_obj, e2.E_arr, e2.unit_obj, e2.comp_obj)
    return e2.replace(**t)
