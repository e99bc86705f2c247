"""Hypothesis strategies for small finite structures."""

from itertools import product as cartesian

from hypothesis import strategies as st

from dcat.base import FinSet
from dcat.fincat import FinCategory


@st.composite
def posets(draw, max_size=4):
    """A random finite poset as a thin category (order generated by a DAG on 0..n-1)."""
    n = draw(st.integers(1, max_size))
    edges = {(i, j) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())}
    # transitive closure
    le = {(i, i) for i in range(n)} | edges
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in cartesian(list(le), repeat=2):
            if b == c and (a, d) not in le:
                le.add((a, d))
                changed = True
    objects = [f"p{i}" for i in range(n)]
    arrows = {f"le{i}_{j}": (f"p{i}", f"p{j}") for i, j in le if i != j}
    comp = {}
    for (a, (s, t)), (b, (s2, t2)) in cartesian(arrows.items(), repeat=2):
        if t == s2:
            comp[a, b] = f"le{s[1:]}_{t2[1:]}"
    return FinCategory.build(objects, arrows, comp, name=f"P{n}")


@st.composite
def finite_monoids(draw):
    """Cyclic groups and small max/min monoids as one-object categories."""
    kind = draw(st.sampled_from(["cyclic", "max", "min"]))
    n = draw(st.integers(1, 3))
    els = list(range(n))
    if kind == "cyclic":
        return els, (lambda a, b: (a + b) % n), 0
    if kind == "max":
        return els, max, 0
    return els, min, n - 1


def fin_sets(max_size=3, alphabet="abcd"):
    return st.sets(st.sampled_from(alphabet[:max_size + 1]), max_size=max_size).map(
        lambda s: FinSet(tuple((x,) for x in sorted(s)), 1)
    )


@st.composite
def relations(draw, dom, cod):
    pairs = [(x, y) for x in dom.elems for y in cod.elems]
    return frozenset(p for p in pairs if draw(st.booleans()))
