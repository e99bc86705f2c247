"""The ``.dcat`` definition language: parser and canonical printer.

A document is a sequence of blocks::

    category Two {
      objects: a, b;
      arrows: t : a -> b;
    }

    double Sq {
      vertical: Two;
      horizontals: u : a -|> b;
      squares: s : u => u [id_a, id_b];
      unit: a = ua, b = ub, t = ut;
      hcompose: ua * u = u;
      vcompose: s . s = s;
    }

Identity arrows are implicit and named ``id_<x>``; identity squares are
``id_<u>``.  Composites with identities, units of identity arrows and
horizontal composites with units default to the strict choice unless
listed.  Unitor and associator components (``lunit``, ``runit``,
``assoc``) default to identity squares.

Enrichments (``enriched NAME over RelSet|SpanSet|SetSet``) list their hom
sets, hom horizontals, unit points and composition maps; over SpanSet
they may also list cells.  Monoidal structures (``monoidal NAME on D``)
list tensor tables.  ``FORMAT.md`` documents every rule.
"""

import re
from dataclasses import dataclass, field
from itertools import product as cartesian

from .base import BaseSquare, FinSet, Fn, Rel, get_base, multi
from .doublecat import FinDoubleCategory, MonoidalFinDoubleCategory, make_double, double_label_maps, relabel_double
from .enrich import EnrichedDoubleCategory, _expected_frames, thin_enrichment
from .errors import DcatError, DslError, DslSyntaxError, DuplicateId, UnknownReference
from .fincat import FinCategory

WORD = re.compile(r"[A-Za-z0-9_]+\Z")
_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n\f\v]+)|(?P<comment>#[^\n]*)|(?P<sym>-\|>|->|=>|[{}()\[\]:;,=.*|])|(?P<word>[A-Za-z0-9_]+)"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "word", "sym" or "eof"
    text: str
    line: int
    col: int


def tokenize(text):
    tokens = []
    pos, line, col = 0, 1, 1
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslSyntaxError(line, col, {"token"}, text[pos])
        kind = m.lastgroup
        chunk = m.group()
        if kind in ("word", "sym"):
            tokens.append(Token(kind, chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass
class Document:
    decls: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.decls[name]

    def __contains__(self, name):
        return name in self.decls

    def __iter__(self):
        return iter(self.decls.items())

    def __len__(self):
        return len(self.decls)

    def __eq__(self, other):
        if not isinstance(other, Document):
            return NotImplemented
        return list(self.decls) == list(other.decls) and all(self.decls[k] == other.decls[k] for k in self.decls)

    def add(self, name, value):
        self.decls[name] = value


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0
        self.doc = Document()

    # -- token helpers --
    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, expected):
        t = self.tok
        raise DslSyntaxError(t.line, t.col, expected, t.text or "end of input")

    def at(self, text):
        return self.tok.kind == "sym" and self.tok.text == text

    def at_word(self, text=None):
        return self.tok.kind == "word" and (text is None or self.tok.text == text)

    def sym(self, text):
        if not self.at(text):
            self.fail({text})
        t = self.tok
        self.i += 1
        return t

    def word(self, what="identifier"):
        if self.tok.kind != "word":
            self.fail({what})
        t = self.tok
        self.i += 1
        return t

    def keyword(self, *options):
        if self.tok.kind != "word" or self.tok.text not in options:
            self.fail(set(options))
        t = self.tok
        self.i += 1
        return t

    def sep_list(self, item, end=";"):
        """``item (, item)* end`` with an empty list allowed."""
        out = []
        if self.at(end):
            self.i += 1
            return out
        out.append(item())
        while self.at(","):
            self.i += 1
            out.append(item())
        self.sym(end)
        return out

    def label_tuple(self):
        """Space-separated labels, or ``()`` for the empty tuple."""
        if self.at("("):
            self.i += 1
            self.sym(")")
            return ()
        labels = [self.word("label").text]
        while self.tok.kind == "word":
            labels.append(self.word().text)
        return tuple(labels)

    # -- document --
    def parse(self):
        while self.tok.kind != "eof":
            kw = self.keyword("category", "double", "enriched", "monoidal")
            name = self.word("name")
            if name.text in self.doc.decls:
                raise DuplicateId(f"declaration {name.text!r} already defined", name.line, name.col)
            handler = getattr(self, f"_{kw.text}")
            try:
                value = handler(name)
            except DslError:
                raise
            except (DcatError, KeyError, ValueError, TypeError) as exc:
                raise DslError(f"in {kw.text} {name.text}: {exc}", kw.line, kw.col) from None
            self.doc.add(name.text, value)
        return self.doc

    def _sections(self, allowed):
        self.sym("{")
        seen = {}
        while not self.at("}"):
            t = self.keyword(*allowed)
            if t.text in seen:
                raise DuplicateId(f"section {t.text!r} repeated", t.line, t.col)
            self.sym(":")
            seen[t.text] = t
            yield t
        self.sym("}")

    # -- category --
    def _category(self, name):
        objects, arrows, comp, idents = [], {}, {}, {}
        ids = {}

        def declare(t, kind):
            if t.text in ids:
                raise DuplicateId(f"{t.text!r} already declared as {ids[t.text]}", t.line, t.col)
            ids[t.text] = kind

        def obj_ref(t):
            if ids.get(t.text) != "object":
                raise UnknownReference(f"unknown object {t.text!r}", t.line, t.col)
            return t.text

        def arrow_ref(t):
            if ids.get(t.text) != "arrow":
                raise UnknownReference(f"unknown arrow {t.text!r}", t.line, t.col)
            return t.text

        for sec in self._sections(("objects", "identities", "arrows", "compose")):
            if sec.text == "objects":
                for t in self.sep_list(self.word):
                    declare(t, "object")
                    objects.append(t.text)
            elif sec.text == "identities":
                def ident():
                    x = self.word()
                    self.sym("=")
                    return x, self.word()

                for x, a in self.sep_list(ident):
                    obj_ref(x)
                    declare(a, "arrow")
                    idents[x.text] = a.text
            elif sec.text == "arrows":
                def arrow():
                    a = self.word()
                    self.sym(":")
                    s = self.word()
                    self.sym("->")
                    return a, s, self.word()

                for a, s, t in self.sep_list(arrow):
                    declare(a, "arrow")
                    arrows[a.text] = (obj_ref(s), obj_ref(t))
            else:
                def entry():
                    a = self.word()
                    self.sym(".")
                    b = self.word()
                    self.sym("=")
                    return a, b, self.word()

                pending = self.sep_list(entry)
                for a, b, c in pending:
                    key = (a.text, b.text)
                    if key in comp:
                        raise DuplicateId(f"composite {a.text}.{b.text} listed twice", a.line, a.col)
                    comp[key] = c
        for x in objects:
            if x not in idents:
                i = f"id_{x}"
                if i in ids:
                    raise DuplicateId(f"implicit identity {i!r} clashes with a declared id", name.line, name.col)
                ids[i] = "arrow"
                idents[x] = i
        for (a, b), c in list(comp.items()):
            arrow_ref(c)
            for n in (a, b):
                if ids.get(n) != "arrow":
                    raise UnknownReference(f"unknown arrow {n!r}", c.line, c.col)
            comp[a, b] = c.text
        return FinCategory.build(objects, arrows, comp, name.text, identity_name=idents.__getitem__)

    def _ref_decl(self, t, kind):
        v = self.doc.decls.get(t.text)
        if not isinstance(v, kind):
            raise UnknownReference(f"unknown {kind.__name__} {t.text!r}", t.line, t.col)
        return v

    # -- double --
    def _double(self, name):
        V = None
        hor, sq = {}, {}
        unit_o, unit_a = {}, {}
        hc_o, hc_a, vc = {}, {}, {}
        lam, rho, alpha = {}, {}, {}
        ids = {}
        deferred = []

        def need_V(t):
            if V is None:
                raise DslSyntaxError(t.line, t.col, {"vertical"}, t.text)

        def declare(t, kind):
            if t.text in ids:
                raise DuplicateId(f"{t.text!r} already declared as {ids[t.text]}", t.line, t.col)
            ids[t.text] = kind

        def triple(op):
            def item():
                a = self.word()
                self.sym(op)
                b = self.word()
                self.sym("=")
                return a, b, self.word()

            return item

        for sec in self._sections(("vertical", "horizontals", "squares", "unit", "hcompose", "vcompose", "lunit", "runit", "assoc")):
            s = sec.text
            if s == "vertical":
                t = self.word("category name")
                self.sym(";")
                V = self._ref_decl(t, FinCategory)
                continue
            need_V(sec)
            vobj, varr = set(V.objects), set(V.arrows)
            if s == "horizontals":
                def h():
                    u = self.word()
                    self.sym(":")
                    a = self.word()
                    self.sym("-|>")
                    return u, a, self.word()

                for u, a, b in self.sep_list(h):
                    declare(u, "horizontal")
                    for x in (a, b):
                        if x.text not in vobj:
                            raise UnknownReference(f"unknown object {x.text!r}", x.line, x.col)
                    hor[u.text] = (a.text, b.text)
            elif s == "squares":
                def q():
                    p = self.word()
                    self.sym(":")
                    u = self.word()
                    self.sym("=>")
                    v = self.word()
                    self.sym("[")
                    f = self.word()
                    self.sym(",")
                    g = self.word()
                    self.sym("]")
                    return p, u, v, f, g

                for p, u, v, f, g in self.sep_list(q):
                    declare(p, "square")
                    for x in (u, v):
                        if ids.get(x.text) != "horizontal":
                            raise UnknownReference(f"unknown horizontal {x.text!r}", x.line, x.col)
                    for x in (f, g):
                        if x.text not in varr:
                            raise UnknownReference(f"unknown vertical arrow {x.text!r}", x.line, x.col)
                    sq[p.text] = (u.text, v.text, f.text, g.text)
            elif s == "unit":
                def un():
                    x = self.word()
                    self.sym("=")
                    return x, self.word()

                deferred.append(("unit", self.sep_list(un)))
            elif s == "hcompose":
                deferred.append(("hcompose", self.sep_list(triple("*"))))
            elif s == "vcompose":
                deferred.append(("vcompose", self.sep_list(triple("."))))
            elif s in ("lunit", "runit"):
                def un():
                    x = self.word()
                    self.sym("=")
                    return x, self.word()

                deferred.append((s, self.sep_list(un)))
            else:
                def tri():
                    a = self.word()
                    self.sym("*")
                    b = self.word()
                    self.sym("*")
                    c = self.word()
                    self.sym("=")
                    return a, b, c, self.word()

                deferred.append(("assoc", self.sep_list(tri)))
        if V is None:
            t = self.toks[self.i - 1]
            raise DslSyntaxError(t.line, t.col, {"vertical"}, "}")

        # implicit identity squares
        ident = {}
        for u in hor:
            i = f"id_{u}"
            if i in ids:
                raise DuplicateId(f"implicit identity square {i!r} clashes with a declared id", name.line, name.col)
            ids[i] = "square"
            ident[u] = i
        for u, (a, b) in hor.items():
            sq[ident[u]] = (u, u, V.identity[a], V.identity[b])

        def ref(t, kind):
            if ids.get(t.text) != kind:
                raise UnknownReference(f"unknown {kind} {t.text!r}", t.line, t.col)
            return t.text

        def put(table, key, val, t):
            if key in table:
                raise DuplicateId(f"entry for {key!r} listed twice", t.line, t.col)
            table[key] = val

        for kind, items in deferred:
            if kind == "unit":
                for x, y in items:
                    if x.text in V.objects:
                        put(unit_o, x.text, ref(y, "horizontal"), x)
                    elif x.text in V.src:
                        put(unit_a, x.text, ref(y, "square"), x)
                    else:
                        raise UnknownReference(f"unknown vertical id {x.text!r}", x.line, x.col)
            elif kind == "hcompose":
                for a, b, c in items:
                    k = ids.get(a.text)
                    if k not in ("horizontal", "square"):
                        raise UnknownReference(f"unknown horizontal or square {a.text!r}", a.line, a.col)
                    table = hc_o if k == "horizontal" else hc_a
                    put(table, (a.text, ref(b, k)), ref(c, k), a)
            elif kind == "vcompose":
                for a, b, c in items:
                    put(vc, (ref(a, "square"), ref(b, "square")), ref(c, "square"), a)
            elif kind in ("lunit", "runit"):
                table = lam if kind == "lunit" else rho
                for u, p in items:
                    put(table, ref(u, "horizontal"), ref(p, "square"), u)
            else:
                for a, b, c, p in items:
                    put(alpha, (ref(a, "horizontal"), ref(b, "horizontal"), ref(c, "horizontal")), ref(p, "square"), a)

        for x in V.objects:
            if x not in unit_o:
                raise UnknownReference(f"no unit given for object {x!r}", name.line, name.col)
        for x in V.objects:
            unit_a.setdefault(V.identity[x], ident[unit_o[x]])
        return _assemble_double(V, hor, sq, ident, unit_o, unit_a, hc_o, hc_a, vc, lam, rho, alpha, name.text)

    # -- enriched --
    def _enriched(self, name):
        self.keyword("over")
        bt = self.keyword("RelSet", "SpanSet", "SetSet")
        b = get_base(bt.text)
        V = None
        sets, homs, units, comps, cells = {}, {}, {}, {}, {}
        ordered = []
        self.sym("{")
        while not self.at("}"):
            t = self.keyword("vertical", "set", "hom", "unit", "comp", "cell")
            if t.text == "vertical":
                self.sym(":")
                if V is not None:
                    raise DuplicateId("vertical given twice", t.line, t.col)
                V = self._ref_decl(self.word("category name"), FinCategory)
                self.sym(";")
                continue
            if V is None:
                raise DslSyntaxError(t.line, t.col, {"vertical"}, t.text)
            ordered.append((t, self._enriched_stmt(t, V, b, sets, homs, units, comps, cells)))
        self.sym("}")
        if V is None:
            t = self.toks[self.i - 1]
            raise DslSyntaxError(t.line, t.col, {"vertical"}, "}")
        return _assemble_enriched(b, V, sets, homs, units, comps, cells, name)

    def _args(self, n):
        self.sym("(")
        out = [self.word()]
        while self.at(","):
            self.i += 1
            out.append(self.word())
        self.sym(")")
        if len(out) != n:
            t = out[-1]
            raise DslError(f"expected {n} arguments, got {len(out)}", t.line, t.col)
        return out

    def _enriched_stmt(self, t, V, b, sets, homs, units, comps, cells):
        def obj(x):
            if x.text not in V.objects:
                raise UnknownReference(f"unknown object {x.text!r}", x.line, x.col)
            return x.text

        def arr(x):
            if x.text not in V.src:
                raise UnknownReference(f"unknown arrow {x.text!r}", x.line, x.col)
            return x.text

        def once(table, key, val):
            if key in table:
                raise DuplicateId(f"{t.text} {key!r} given twice", t.line, t.col)
            table[key] = val

        kind = t.text
        if kind == "set":
            self.keyword("E")
            X, Y = (obj(a) for a in self._args(2))
            self.sym("=")
            self.sym("{")
            labels = self.sep_list(lambda: self.word("label"), end="}")
            self.sym(";")
            seen = set()
            for lt in labels:
                if lt.text in seen:
                    raise DuplicateId(f"element {lt.text!r} repeated", lt.line, lt.col)
                seen.add(lt.text)
            once(sets, (X, Y), labels)
        elif kind == "hom":
            self.keyword("E")
            f, g = (arr(a) for a in self._args(2))
            arity = 1
            if self.at_word("arity"):
                self.i += 1
                at = self.word("arity")
                if not at.text.isdigit() or len(at.text) > 3:
                    raise DslError(f"arity must be a small number, got {at.text!r}", at.line, at.col)
                arity = int(at.text)
            self.sym("=")
            self.sym("{")

            def entry():
                x = self.word("label")
                self.sym("->")
                y = self.word("label")
                ws = []
                if self.at(":"):
                    self.i += 1
                    ws.append((self.tok, self.label_tuple()))
                    while self.at("|"):
                        self.i += 1
                        ws.append((self.tok, self.label_tuple()))
                return x, y, ws

            once(homs, (f, g), (t, arity, self.sep_list(entry, end="}")))
            self.sym(";")
        elif kind == "unit":
            (X,) = (obj(a) for a in self._args(1))
            self.sym("=")
            once(units, X, self.word("label"))
            self.sym(";")
        elif kind == "comp":
            X, Y, Z = (obj(a) for a in self._args(3))
            self.sym("=")
            self.sym("{")

            def entry():
                x = self.label_tuple()
                self.sym("->")
                return x, self.word("label")

            once(comps, (X, Y, Z), (t, self.sep_list(entry, end="}")))
            self.sym(";")
        else:
            ck = self.keyword("I", "C", "U", "comp")
            arity = {"I": 2, "C": 4, "U": 1, "comp": 3}[ck.text]
            args = self._args(arity)
            key = tuple(obj(a) for a in args) if ck.text == "I" else tuple(arr(a) for a in args)
            if ck.text == "U":
                key = key[0]
            self.sym("=")
            self.sym("{")

            def entry():
                x = self.label_tuple()
                self.sym("|")
                y = self.label_tuple()
                self.sym("|")
                w = self.label_tuple()
                self.sym("->")
                return x, y, w, self.label_tuple()

            once(cells, (ck.text, key), (ck, self.sep_list(entry, end="}")))
            self.sym(";")

    # -- monoidal --
    def _monoidal(self, name):
        self.keyword("on")
        d = self._ref_decl(self.word("double category name"), FinDoubleCategory)
        tv_o, tv_a, ta_o, ta_a = {}, {}, {}, {}
        unitV = unitA = None
        V, A = d.V, d.A

        def triple():
            a = self.word()
            self.sym("*")
            b = self.word()
            self.sym("=")
            return a, b, self.word()

        for sec in self._sections(("unitV", "unitA", "tensorV", "tensorA")):
            if sec.text == "unitV":
                t = self.word()
                self.sym(";")
                if t.text not in V.objects:
                    raise UnknownReference(f"unknown object {t.text!r}", t.line, t.col)
                unitV = t.text
            elif sec.text == "unitA":
                t = self.word()
                self.sym(";")
                if t.text not in A.objects:
                    raise UnknownReference(f"unknown horizontal {t.text!r}", t.line, t.col)
                unitA = t.text
            else:
                C = V if sec.text == "tensorV" else A
                to, ta = (tv_o, tv_a) if sec.text == "tensorV" else (ta_o, ta_a)
                for a, b, c in self.sep_list(triple):
                    if a.text in C.objects:
                        table, pool = to, C.objects
                    elif a.text in C.src:
                        table, pool = ta, C.src
                    else:
                        raise UnknownReference(f"unknown id {a.text!r}", a.line, a.col)
                    for x in (b, c):
                        if x.text not in pool:
                            raise UnknownReference(f"unknown id {x.text!r}", x.line, x.col)
                    if (a.text, b.text) in table:
                        raise DuplicateId(f"tensor {a.text} * {b.text} listed twice", a.line, a.col)
                    table[a.text, b.text] = c.text
        if unitV is None or unitA is None:
            raise DslSyntaxError(name.line, name.col, {"unitV", "unitA"}, name.text)
        _monoidal_defaults(V, tv_o, tv_a, unitV)
        _monoidal_defaults(A, ta_o, ta_a, unitA)
        return MonoidalFinDoubleCategory(d, tv_o, tv_a, ta_o, ta_a, unitV, unitA, name.text)


def _monoidal_defaults(C, t_obj, t_arr, unit):
    for x in C.objects:
        t_obj.setdefault((unit, x), x)
        t_obj.setdefault((x, unit), x)
    iu = C.identity[unit]
    for a in C.arrows:
        t_arr.setdefault((iu, a), a)
        t_arr.setdefault((a, iu), a)
    for x, y in cartesian(C.objects, repeat=2):
        z = t_obj.get((x, y))
        if z in C.identity:
            t_arr.setdefault((C.identity[x], C.identity[y]), C.identity[z])


def _double_defaults(V, hor, sq, ident, unit_o, unit_a, hc_o, hc_a, vc):
    """Fill the implicit entries of a double block, in place."""
    S_o = {u: a for u, (a, _) in hor.items()}
    T_o = {u: b for u, (_, b) in hor.items()}
    for u in hor:
        hc_o.setdefault((unit_o[S_o[u]], u), u)
        hc_o.setdefault((u, unit_o[T_o[u]]), u)
    for (u, v), w in list(hc_o.items()):
        hc_a.setdefault((ident[u], ident[v]), ident.get(w))
    for p, (u, v, f, g) in sq.items():
        if f in unit_a:
            hc_a.setdefault((unit_a[f], p), p)
        if g in unit_a:
            hc_a.setdefault((p, unit_a[g]), p)
    for p, (u, v, f, g) in sq.items():
        vc.setdefault((ident[u], p), p)
        vc.setdefault((p, ident[v]), p)


def _assemble_double(V, hor, sq, ident, unit_o, unit_a, hc_o, hc_a, vc, lam, rho, alpha, name):
    _double_defaults(V, hor, sq, ident, unit_o, unit_a, hc_o, hc_a, vc)
    A = FinCategory(
        tuple(hor),
        tuple(sq),
        {p: s[0] for p, s in sq.items()},
        {p: s[1] for p, s in sq.items()},
        dict(ident),
        dict(vc),
        "A",
    )
    S = ({u: a for u, (a, _) in hor.items()}, {p: s[2] for p, s in sq.items()})
    T = ({u: b for u, (_, b) in hor.items()}, {p: s[3] for p, s in sq.items()})
    d0 = make_double(V, A, S, T, (unit_o, unit_a), hc_o, hc_a, name=name)
    lam_full = dict(d0.lam)
    lam_full.update(lam)
    rho_full = dict(d0.rho)
    rho_full.update(rho)
    alpha_full = dict(d0.alpha)
    alpha_full.update(alpha)
    return FinDoubleCategory(d0.V, d0.A, d0.S, d0.T, d0.U, d0.odot, lam_full, rho_full, alpha_full, name)


def _assemble_enriched(b, V, sets, homs, units, comps, cells, name):
    E_obj = {}
    for X, Y in cartesian(V.objects, repeat=2):
        labels = sorted((t.text for t in sets.get((X, Y), [])), key=repr)
        E_obj[X, Y] = FinSet(tuple((x,) for x in labels), 1)
    E_arr = {}
    for f, g in cartesian(V.arrows, repeat=2):
        dom, cod = E_obj[V.src[f], V.src[g]], E_obj[V.tgt[f], V.tgt[g]]
        t, arity, entries = homs.get((f, g), (None, 1, []))
        if b.name != "SpanSet":
            for x, y, ws in entries:
                if ws:
                    raise DslError(f"witnesses are only allowed over SpanSet", ws[0][0].line, ws[0][0].col)
            if arity != 1:
                raise DslError("arity is only allowed over SpanSet", t.line, t.col)
        for x, y, _ in entries:
            for e, s in ((x, dom), (y, cod)):
                if (e.text,) not in s:
                    raise UnknownReference(f"{e.text!r} is not an element of {s!r}", e.line, e.col)
        if b.name == "RelSet":
            E_arr[f, g] = Rel(dom, cod, frozenset(((x.text,), (y.text,)) for x, y, _ in entries))
        elif b.name == "SetSet":
            table = {}
            for x, y, _ in entries:
                if (x.text,) in table:
                    raise DuplicateId(f"{x.text!r} mapped twice", x.line, x.col)
                table[x.text,] = (y.text,)
            missing = [e for e in dom.elems if e not in table]
            if missing:
                line, col = (t.line, t.col) if t else (name.line, name.col)
                raise DslError(f"E({f}, {g}) has no image for {missing[0][0]!r}", line, col)
            E_arr[f, g] = Fn(dom, cod, tuple(table[e] for e in dom.elems))
        else:
            fibers = {}
            for x, y, ws in entries:
                key = ((x.text,), (y.text,))
                if key in fibers:
                    raise DuplicateId(f"fiber {x.text} -> {y.text} listed twice", x.line, x.col)
                if not ws:
                    raise DslError(f"fiber {x.text} -> {y.text} needs at least one witness", x.line, x.col)
                fiber = set()
                for wt, w in ws:
                    if len(w) != arity:
                        raise DslError(f"witness of length {len(w)} in a hom of arity {arity}", wt.line, wt.col)
                    if w in fiber:
                        raise DuplicateId(f"witness {_tuple_text(w)} repeated", wt.line, wt.col)
                    fiber.add(w)
                fibers[key] = fiber
            E_arr[f, g] = multi(dom, cod, arity, fibers)
    one = b.unit_object()
    unit_obj = {}
    for X in V.objects:
        if X not in units:
            raise UnknownReference(f"no unit given for object {X!r}", name.line, name.col)
        lt = units[X]
        if (lt.text,) not in E_obj[X, X]:
            raise UnknownReference(f"{lt.text!r} is not an element of E({X}, {X})", lt.line, lt.col)
        unit_obj[X] = Fn(one, E_obj[X, X], ((lt.text,),))
    comp_obj = {}
    for X, Y, Z in cartesian(V.objects, repeat=3):
        dom = b.tensor_obj(E_obj[X, Y], E_obj[Y, Z])
        t, entries = comps.get((X, Y, Z), (None, []))
        table = {}
        for x, y in entries:
            if x not in dom or (y.text,) not in E_obj[X, Z]:
                raise UnknownReference(f"comp({X}, {Y}, {Z}) entry {' '.join(x)} -> {y.text} is out of range", y.line, y.col)
            if x in table:
                raise DuplicateId(f"comp({X}, {Y}, {Z}) maps {' '.join(x)} twice", y.line, y.col)
            table[x] = (y.text,)
        missing = [e for e in dom.elems if e not in table]
        if missing:
            line, col = (t.line, t.col) if t else (name.line, name.col)
            raise DslError(f"comp({X}, {Y}, {Z}) has no image for {' '.join(missing[0])}", line, col)
        comp_obj[X, Y, Z] = Fn(dom, E_obj[X, Z], tuple(table[e] for e in dom.elems))
    if b.thin:
        if cells:
            (ck, _), (t, _) = next(iter(cells.items()))
            raise DslError(f"cells are implicit over {b.name}", t.line, t.col)
        return thin_enrichment(b, V, E_obj, E_arr, unit_obj, comp_obj, name.text)

    tables = {"I": {}, "C": {}, "U": {}, "comp": {}}
    shell = EnrichedDoubleCategory(b, V, E_obj, E_arr, {}, {}, unit_obj, {}, comp_obj, {})
    for kind, key, frame in _expected_frames(shell):
        given = cells.get((kind, key))
        if given is None:
            default = b.thin_square(*frame)
            if default is not None:
                tables[kind][key] = default
            continue
        t, entries = given
        payload = {}
        for x, y, w, out in entries:
            if (x, y, w) in payload:
                raise DuplicateId(f"cell entry {x} | {y} | {w} repeated", t.line, t.col)
            payload[x, y, w] = out
        tables[kind][key] = BaseSquare(*frame, frozenset(payload.items()))
    for (kind, key), (t, _) in cells.items():
        if key not in tables[kind]:
            raise UnknownReference(f"cell {kind}{key!r} is not part of the enrichment", t.line, t.col)
    return EnrichedDoubleCategory(
        b, V, E_obj, E_arr, tables["I"], tables["C"], unit_obj, tables["U"], comp_obj, tables["comp"], name.text
    )


def parse(text) -> Document:
    """Parse ``.dcat`` source (str, or UTF-8 bytes) into a Document."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            prefix = bytes(text[: exc.start]).decode("utf-8", errors="replace")
            line = prefix.count("\n") + 1
            col = len(prefix) - (prefix.rfind("\n") + 1) + 1
            raise DslSyntaxError(line, col, {"UTF-8 text"}, repr(bytes(text[exc.start:exc.start + 1]))) from None
    try:
        return _Parser(text).parse()
    except RecursionError:
        raise DslError("input nests too deeply", 1, 1) from None


def parse_file(path) -> Document:
    with open(path, "rb") as fh:
        return parse(fh.read())


# -- printer ------------------------------------------------------------------


def _sorted(xs):
    return sorted(xs, key=lambda x: str(x))


def _check_word(x, what):
    if not isinstance(x, str) or not WORD.match(x):
        raise ValueError(f"{what} {x!r} is not a DSL identifier; relabel before printing")
    return x


def _join(items):
    return ", ".join(items)


def render_category(c: FinCategory, name: str) -> str:
    for x in c.objects:
        _check_word(x, "object")
    for a in c.arrows:
        _check_word(a, "arrow")
    idents = set(c.identity.values())
    lines = [f"category {name} {{", f"  objects: {_join(_sorted(c.objects))};"]
    odd = {x: a for x, a in c.identity.items() if a != f"id_{x}"}
    if odd:
        lines.append(f"  identities: {_join(f'{x} = {odd[x]}' for x in _sorted(odd))};")
    gens = [a for a in _sorted(c.arrows) if a not in idents]
    if gens:
        lines.append(f"  arrows: {_join(f'{a} : {c.src[a]} -> {c.tgt[a]}' for a in gens)};")
    comp = []
    for (a, b), r in sorted(c.comp.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
        if (a in idents and c.src[a] == c.src.get(b) and r == b) or (b in idents and c.tgt[a] == c.src[b] and r == a):
            continue
        comp.append(f"{a}.{b} = {r}")
    if comp:
        lines.append(f"  compose: {_join(comp)};")
    lines.append("}")
    return "\n".join(lines)


def render_double(d: FinDoubleCategory, name: str, vname: str) -> str:
    V, A = d.V, d.A
    for u in A.objects:
        _check_word(u, "horizontal")
    for p in A.arrows:
        _check_word(p, "square")
    ident = dict(A.identity)
    if any(ident[u] != f"id_{u}" for u in A.objects):
        raise ValueError("identity squares must be named id_<horizontal> to print")
    idsq = set(ident.values())
    lines = [f"double {name} {{", f"  vertical: {vname};"]
    hs = _sorted(A.objects)
    if hs:
        lines.append(f"  horizontals: {_join(f'{u} : {d.S.obj_map[u]} -|> {d.T.obj_map[u]}' for u in hs)};")
    sqs = [p for p in _sorted(A.arrows) if p not in idsq]
    if sqs:
        lines.append(
            "  squares: "
            + _join(f"{p} : {A.src[p]} => {A.tgt[p]} [{d.S.arr_map[p]}, {d.T.arr_map[p]}]" for p in sqs)
            + ";"
        )
    units = [f"{x} = {d.U.obj_map[x]}" for x in _sorted(V.objects)]
    for f in _sorted(V.arrows):
        if V.is_identity(f) and d.U.arr_map.get(f) == ident.get(d.U.obj_map.get(V.src[f])):
            continue
        units.append(f"{f} = {d.U.arr_map[f]}")
    lines.append(f"  unit: {_join(units)};")

    # recompute defaults to decide what is implicit
    hor = {u: (d.S.obj_map[u], d.T.obj_map[u]) for u in A.objects}
    sq = {p: (A.src[p], A.tgt[p], d.S.arr_map[p], d.T.arr_map[p]) for p in A.arrows}
    unit_o = dict(d.U.obj_map)
    unit_a = {V.identity[x]: ident[unit_o[x]] for x in V.objects}
    unit_a.update({f: p for f, p in d.U.arr_map.items()})
    dflt_o, dflt_a, dflt_v = {}, {}, {}
    explicit_o = {}
    for k, v in d.odot.obj_map.items():
        explicit_o[k] = v
    # horizontal defaults only apply where not given; emulate parser: explicit first
    S_o = {u: a for u, (a, _) in hor.items()}
    T_o = {u: b for u, (_, b) in hor.items()}
    for u in hor:
        dflt_o.setdefault((unit_o[S_o[u]], u), u)
        dflt_o.setdefault((u, unit_o[T_o[u]]), u)
    hc = []
    for k in sorted(d.odot.obj_map, key=lambda k: (str(k[0]), str(k[1]))):
        v = d.odot.obj_map[k]
        if dflt_o.get(k) == v:
            continue
        hc.append((k, v))
    # square defaults depend on the final horizontal table, which equals d's
    for (u, v), w in d.odot.obj_map.items():
        dflt_a.setdefault((ident[u], ident[v]), ident.get(w))
    for p, (u, v, f, g) in sq.items():
        if f in unit_a:
            dflt_a.setdefault((unit_a[f], p), p)
        if g in unit_a:
            dflt_a.setdefault((p, unit_a[g]), p)
    for k in sorted(d.odot.arr_map, key=lambda k: (str(k[0]), str(k[1]))):
        v = d.odot.arr_map[k]
        if dflt_a.get(k) == v:
            continue
        hc.append((k, v))
    if hc:
        lines.append(f"  hcompose: {_join(f'{a} * {b} = {c}' for (a, b), c in hc)};")
    for p, (u, v, f, g) in sq.items():
        dflt_v.setdefault((ident[u], p), p)
        dflt_v.setdefault((p, ident[v]), p)
    vc = [
        (k, r)
        for k, r in sorted(A.comp.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))
        if dflt_v.get(k) != r
    ]
    if vc:
        lines.append(f"  vcompose: {_join(f'{a} . {b} = {c}' for (a, b), c in vc)};")
    # component families: omit exactly the entries make_double would fill in
    for label, fam in (("lunit", d.lam), ("runit", d.rho)):
        ent = [(u, p) for u, p in sorted(fam.items(), key=lambda kv: str(kv[0])) if p != ident[u]]
        if ent:
            lines.append(f"  {label}: {_join(f'{u} = {p}' for u, p in ent)};")
    hc = d.odot.obj_map

    def alpha_default(u, v, w):
        return ident.get(hc.get((u, hc.get((v, w)))), ident[u])

    ent = [
        (k, p)
        for k, p in sorted(d.alpha.items(), key=lambda kv: tuple(map(str, kv[0])))
        if p != alpha_default(*k)
    ]
    if ent:
        lines.append(f"  assoc: {_join(f'{a} * {b} * {c} = {p}' for (a, b, c), p in ent)};")
    lines.append("}")
    return "\n".join(lines)


def _tuple_text(t):
    return " ".join(t) if t else "()"


def render_enriched(e: EnrichedDoubleCategory, name: str, vname: str) -> str:
    b, V = e.base, e.V
    lines = [f"enriched {name} over {b.name} {{", f"  vertical: {vname};"]
    for X, Y in sorted(e.E_obj, key=lambda k: tuple(map(str, k))):
        s = e.E_obj[X, Y]
        if s.rank != 1:
            raise ValueError("hom sets must have rank 1 to print")
        for x in s.elems:
            _check_word(x[0], "element")
        if s.elems:
            lines.append(f"  set E({X}, {Y}) = {{{_join(x[0] for x in s.elems)}}};")
    for f, g in sorted(e.E_arr, key=lambda k: tuple(map(str, k))):
        u = e.E_arr[f, g]
        if b.name == "RelSet":
            ents = [f"{x[0]} -> {y[0]}" for x, y in sorted(u.pairs)]
        elif b.name == "SetSet":
            ents = [f"{x[0]} -> {y[0]}" for x, y in zip(u.dom.elems, u.images)]
        else:
            ents = []
            for (x, y), ws in sorted(u.fibers, key=lambda kv: kv[0]):
                for w in ws:
                    for a in w:
                        _check_word(a, "witness")
                ents.append(f"{x[0]} -> {y[0]} : {' | '.join(_tuple_text(w) for w in sorted(ws))}")
        arity = f" arity {u.arity}" if b.name == "SpanSet" and u.arity != 1 else ""
        if ents or arity or b.name == "SetSet" and u.dom.elems:
            lines.append(f"  hom E({f}, {g}){arity} = {{{_join(ents)}}};")
    for X in _sorted(V.objects):
        lines.append(f"  unit({X}) = {e.unit_obj[X].images[0][0]};")
    for key in sorted(e.comp_obj, key=lambda k: tuple(map(str, k))):
        m = e.comp_obj[key]
        if not m.dom.elems:
            continue
        ents = [f"{_tuple_text(x)} -> {y[0]}" for x, y in zip(m.dom.elems, m.images)]
        lines.append(f"  comp({_join(key)}) = {{{_join(ents)}}};")
    if not b.thin:
        shell = e
        for kind, key, frame in _expected_frames(shell):
            table = {"I": e.I_cell, "C": e.C_cell, "U": e.unit_arr, "comp": e.comp_arr}[kind]
            sq = table.get(key)
            if sq is None:
                continue
            if sq == b.thin_square(*frame):
                continue
            args = _join(key) if isinstance(key, tuple) else key
            ents = [
                f"{_tuple_text(x)} | {_tuple_text(y)} | {_tuple_text(w)} -> {_tuple_text(o)}"
                for (x, y, w), o in sorted(sq.payload)
            ]
            lines.append(f"  cell {kind}({args}) = {{{_join(ents)}}};")
    lines.append("}")
    return "\n".join(lines)


def render_monoidal(m: MonoidalFinDoubleCategory, name: str, dname: str) -> str:
    d = m.carrier
    lines = [f"monoidal {name} on {dname} {{", f"  unitV: {m.unitV};", f"  unitA: {m.unitA};"]
    for label, C, to, ta, unit in (
        ("tensorV", d.V, m.tensorV_obj, m.tensorV_arr, m.unitV),
        ("tensorA", d.A, m.tensorA_obj, m.tensorA_arr, m.unitA),
    ):
        # the parser fills object defaults first, then arrow defaults from the full object table
        dflt_o, dflt_a = dict(to), {}
        unit_only = {}
        for x in C.objects:
            unit_only.setdefault((unit, x), x)
            unit_only.setdefault((x, unit), x)
        _monoidal_defaults(C, dflt_o, dflt_a, unit)
        ents = [(k, to[k]) for k in sorted(to, key=lambda k: (str(k[0]), str(k[1]))) if unit_only.get(k) != to[k]]
        ents += [(k, ta[k]) for k in sorted(ta, key=lambda k: (str(k[0]), str(k[1]))) if dflt_a.get(k) != ta[k]]
        if ents:
            lines.append(f"  {label}: {_join(f'{a} * {b} = {c}' for (a, b), c in ents)};")
    lines.append("}")
    return "\n".join(lines)


def render(doc: Document) -> str:
    """Canonical text for a document; categories needed by later blocks are emitted first."""
    out = []
    names = {}
    emitted = []

    def cat_name(c, hint):
        for n, v in emitted:
            if isinstance(v, FinCategory) and v == c:
                return n
        n = hint
        while n in doc.decls or any(n == m for m, _ in emitted):
            n += "_"
        out.append(render_category(c, n))
        emitted.append((n, c))
        return n

    for name, value in doc:
        if isinstance(value, FinCategory):
            out.append(render_category(value, name))
            emitted.append((name, value))
        elif isinstance(value, FinDoubleCategory):
            vn = cat_name(value.V, f"{name}_V")
            out.append(render_double(value, name, vn))
            emitted.append((name, value))
        elif isinstance(value, EnrichedDoubleCategory):
            vn = cat_name(value.V, f"{name}_V")
            out.append(render_enriched(value, name, vn))
            emitted.append((name, value))
        elif isinstance(value, MonoidalFinDoubleCategory):
            dn = None
            for n, v in emitted:
                if isinstance(v, FinDoubleCategory) and v == value.carrier:
                    dn = n
            if dn is None:
                vn = cat_name(value.carrier.V, f"{name}_V")
                dn = f"{name}_D"
                out.append(render_double(value.carrier, dn, vn))
                emitted.append((dn, value.carrier))
            out.append(render_monoidal(value, name, dn))
            emitted.append((name, value))
        else:
            raise TypeError(f"cannot print {type(value).__name__}")
        names[name] = True
    return "\n\n".join(out) + "\n"


def document(**decls) -> Document:
    return Document(dict(decls))


# -- relabelling for printing -------------------------------------------------


def _fresh_names(items, prefix, taken=()):
    """Keep ids that are already DSL words; give the rest fresh ``prefix<i>`` names."""
    out, used = {}, set(taken)
    for x in items:
        if isinstance(x, str) and WORD.match(x):
            out[x] = x
            used.add(x)
    i = 0
    for x in sorted((x for x in items if x not in out), key=repr):
        while f"{prefix}{i}" in used:
            i += 1
        out[x] = f"{prefix}{i}"
        used.add(out[x])
    return out


def _printable_category(c: FinCategory):
    if all(isinstance(x, str) and WORD.match(x) for x in (*c.objects, *c.arrows)):
        return c
    vo = _fresh_names(c.objects, "x")
    idents = set(c.identity.values())
    va = _fresh_names([a for a in c.arrows if a not in idents], "f", [f"id_{vo[x]}" for x in c.objects])
    for x in c.objects:
        va[c.identity[x]] = f"id_{vo[x]}"
    return c.relabel(vo, va, c.name)


def relabel_enrichment(e: EnrichedDoubleCategory) -> EnrichedDoubleCategory:
    """An isomorphic copy of ``e`` whose ids, elements and witnesses are all DSL words."""
    b = e.base
    V = e.V
    V2 = _printable_category(V)
    vo = dict(zip(V.objects, V2.objects)) if V2 is not V else {x: x for x in V.objects}
    if V2 is not V:
        vo = _fresh_names(V.objects, "x")
        idents = set(V.identity.values())
        va = _fresh_names([a for a in V.arrows if a not in idents], "f", [f"id_{vo[x]}" for x in V.objects])
        for x in V.objects:
            va[V.identity[x]] = f"id_{vo[x]}"
    else:
        va = {a: a for a in V.arrows}
    atoms = set()
    for s in e.E_obj.values():
        atoms.update(x[0] for x in s.elems)
    for u in e.E_arr.values():
        if hasattr(u, "fibers"):
            for _, ws in u.fibers:
                for w in ws:
                    atoms.update(w)
    am = _fresh_names(atoms, "e")

    def m(t):
        return tuple(am[a] for a in t)

    E_obj = {(vo[X], vo[Y]): FinSet(tuple(sorted((m(x) for x in s.elems), key=repr)), 1) for (X, Y), s in e.E_obj.items()}

    def set_of(s_old, *keys):
        if len(keys) == 1:
            return E_obj[keys[0]]
        return b.tensor_obj(E_obj[keys[0]], E_obj[keys[1]])

    def fn_(f, dom, cod):
        table = {m(x): m(y) for x, y in zip(f.dom.elems, f.images)}
        return Fn(dom, cod, tuple(table[x] for x in dom.elems))

    E_arr = {}
    for (f, g), u in e.E_arr.items():
        dom = E_obj[vo[V.src[f]], vo[V.src[g]]]
        cod = E_obj[vo[V.tgt[f]], vo[V.tgt[g]]]
        if isinstance(u, Rel):
            new = Rel(dom, cod, frozenset((m(x), m(y)) for x, y in u.pairs))
        elif isinstance(u, Fn):
            new = fn_(u, dom, cod)
        else:
            new = multi(dom, cod, u.arity, {(m(x), m(y)): {m(w) for w in ws} for (x, y), ws in u.fibers})
        E_arr[va[f], va[g]] = new
    one = b.unit_object()
    unit_obj = {vo[X]: Fn(one, E_obj[vo[X], vo[X]], (m(p.images[0]),)) for X, p in e.unit_obj.items()}
    comp_obj = {}
    for (X, Y, Z), p in e.comp_obj.items():
        dom = b.tensor_obj(E_obj[vo[X], vo[Y]], E_obj[vo[Y], vo[Z]])
        comp_obj[vo[X], vo[Y], vo[Z]] = fn_(p, dom, E_obj[vo[X], vo[Z]])
    if b.thin:
        return thin_enrichment(b, V2, E_obj, E_arr, unit_obj, comp_obj, e.name)
    old = {"I": e.I_cell, "C": e.C_cell, "U": e.unit_arr, "comp": e.comp_arr}
    inv_o = {v: k for k, v in vo.items()}
    inv_a = {v: k for k, v in va.items()}
    tables = {k: {} for k in old}
    shell = EnrichedDoubleCategory(b, V2, E_obj, E_arr, {}, {}, unit_obj, {}, comp_obj, {})
    for kind, key, frame in _expected_frames(shell):
        if kind == "I":
            okey = tuple(inv_o[k] for k in key)
        elif kind == "U":
            okey = inv_a[key]
        else:
            okey = tuple(inv_a[k] for k in key)
        sq = old[kind].get(okey)
        if sq is None:
            continue
        payload = frozenset(((m(x), m(y), m(w)), m(o)) for (x, y, w), o in (sq.payload or ()))
        tables[kind][key] = BaseSquare(*frame, payload)
    return EnrichedDoubleCategory(
        b, V2, E_obj, E_arr, tables["I"], tables["C"], unit_obj, tables["U"], comp_obj, tables["comp"], e.name
    )


def _is_word(x):
    return isinstance(x, str) and WORD.match(x) is not None


def printable(value):
    """An isomorphic copy of ``value`` that the printer accepts."""
    if isinstance(value, FinCategory):
        return _printable_category(value)
    if isinstance(value, FinDoubleCategory):
        ok = all(_is_word(x) for x in (*value.V.objects, *value.V.arrows, *value.A.objects, *value.A.arrows))
        ok = ok and all(value.A.identity[u] == f"id_{u}" for u in value.A.objects)
        return value if ok else relabel_double(value, name=value.name)
    if isinstance(value, MonoidalFinDoubleCategory):
        d = value.carrier
        if printable(d) is d:
            return value
        vo, va, ao, aa = double_label_maps(d)

        def tr(table, m):
            return {(m[a], m[b]): m[c] for (a, b), c in table.items()}

        return MonoidalFinDoubleCategory(
            relabel_double(d, name=d.name),
            tr(value.tensorV_obj, vo),
            tr(value.tensorV_arr, va),
            tr(value.tensorA_obj, ao),
            tr(value.tensorA_arr, aa),
            vo[value.unitV],
            ao[value.unitA],
            value.name,
        )
    if isinstance(value, EnrichedDoubleCategory):
        return relabel_enrichment(value)
    return value


def to_dsl(value, name="X") -> str:
    """Print a single value, relabelling ids when needed."""
    return render(Document({name: printable(value)}))
