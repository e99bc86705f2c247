"""Backtracking isomorphism search between finite many-sorted structures.

A structure is a set of sorted elements plus named partial operations
given as tables.  Candidates are pruned by joint colour refinement and
every table entry is checked as soon as all of its participants are
assigned; an entry whose inputs are all assigned also forces its output.
"""

from collections import Counter, defaultdict
from dataclasses import dataclass, field


@dataclass
class Structure:
    sorts: dict  # sort name -> list of elements
    ops: dict = field(default_factory=dict)  # op name -> (in sorts, out sort, {inputs tuple: output})

    def add_op(self, name, in_sorts, out_sort, table):
        self.ops[name] = (tuple(in_sorts), out_sort, dict(table))


def _refine(s1: Structure, s2: Structure, rounds=12):
    palette = {}

    def canon(key):
        return palette.setdefault(key, len(palette))

    colors = []
    for s in (s1, s2):
        colors.append({(sort, e): canon(("sort", sort)) for sort, elems in s.sorts.items() for e in elems})

    n_classes = len(set(colors[0].values()) | set(colors[1].values()))
    for _ in range(rounds):
        new = []
        for s, col in zip((s1, s2), colors):
            sig = defaultdict(list)
            for name, (ins, out, table) in s.ops.items():
                for key, val in table.items():
                    cin = tuple(col[(srt, k)] for srt, k in zip(ins, key))
                    cout = col[(out, val)]
                    for i, (srt, k) in enumerate(zip(ins, key)):
                        sig[(srt, k)].append((name, i, cin, cout))
                    sig[(out, val)].append((name, -1, cin, -1))
            new.append({e: canon((c, tuple(sorted(sig[e])))) for e, c in col.items()})
        colors = new
        count = len(set(colors[0].values()) | set(colors[1].values()))
        if count == n_classes:
            break
        n_classes = count
    return colors


def find_isomorphism(s1: Structure, s2: Structure, order=None):
    """Return ``{sort: {elem1: elem2}}`` or None when no isomorphism exists."""
    if set(s1.sorts) != set(s2.sorts) or set(s1.ops) != set(s2.ops):
        return None
    for sort in s1.sorts:
        if len(s1.sorts[sort]) != len(s2.sorts[sort]):
            return None
        if len(set(s1.sorts[sort])) != len(set(s2.sorts[sort])):
            return None
    for name in s1.ops:
        a, b = s1.ops[name], s2.ops[name]
        if a[:2] != b[:2] or len(a[2]) != len(b[2]):
            return None

    c1, c2 = _refine(s1, s2)
    if Counter(c1.values()) != Counter(c2.values()):
        return None
    by_color = defaultdict(list)
    for e, c in c2.items():
        by_color[c].append(e)
    class_size = Counter(c1.values())

    order = list(order or s1.sorts)
    seq = []
    for sort in order:
        elems = sorted(set(s1.sorts[sort]), key=lambda e: (class_size[c1[(sort, e)]], repr(e)))
        seq.extend((sort, e) for e in elems)

    entries = defaultdict(list)
    for name, (ins, out, table) in s1.ops.items():
        for key, val in table.items():
            parts = [(srt, k) for srt, k in zip(ins, key)]
            rec = (name, tuple(parts), (out, val))
            for p in set(parts) | {(out, val)}:
                entries[p].append(rec)

    fwd = {}
    used = set()

    def consistent(elem):
        for name, parts, out in entries[elem]:
            if not all(p in fwd for p in parts):
                continue
            table2 = s2.ops[name][2]
            key2 = tuple(fwd[p][1] for p in parts)
            if key2 not in table2:
                return False
            target = (out[0], table2[key2])
            if out in fwd:
                if fwd[out] != target:
                    return False
            elif target in used or c2[target] != c1[out]:
                return False
        return True

    def search(i):
        if i == len(seq):
            return True
        elem = seq[i]
        for img in by_color[c1[elem]]:
            if img in used:
                continue
            fwd[elem] = img
            used.add(img)
            if consistent(elem) and search(i + 1):
                return True
            del fwd[elem]
            used.discard(img)
        return False

    if not search(0):
        return None
    result = {sort: {} for sort in s1.sorts}
    for (sort, e), (_, e2) in fwd.items():
        result[sort][e] = e2
    return result
