"""Command line front end.

Every subcommand reads one ``.dcat`` file and prints either text or a JSON
object with the keys ``status``, ``violations``, ``counts`` and ``witness``
(plus ``result``, ``output`` or ``error`` where relevant).  Exit status is
0 on success, 1 when a law check or requested property fails, and 2 on
usage or parse errors.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from .doublecat import (
    DEFAULT_MAX_OBJECTS,
    FinDoubleCategory,
    MonoidalFinDoubleCategory,
    diagonal_category,
    globular_horizontal,
    globular_vertical,
    horizontal_category,
    is_framed,
    is_inclusion,
    is_thin,
    iso_search,
    transversal,
    validate_2category,
    validate_double_category,
    validate_monoidal,
    vertical_opposite,
)
from .dsl import Document, parse_file, printable, render
from .enrich import EnrichedDoubleCategory, validate_enrichment
from .errors import DcatError, DslError, SizeBoundExceeded
from .fincat import FinCategory, validate_category
from .groth import groth_census, grothendieck
from .report import ValidationReport
from .translate import double_to_span, framed_to_set, round_trip, thin_to_rel

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_MAX_SET = 4
EXAMPLES_DIR = Path(__file__).parent / "examples"


class UsageError(Exception):
    pass


def _env_max_objects():
    raw = os.environ.get("DCAT_MAX_OBJECTS")
    if raw is None:
        return DEFAULT_MAX_OBJECTS
    try:
        return int(raw)
    except ValueError:
        return DEFAULT_MAX_OBJECTS


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument(
        "--max-objects",
        type=int,
        default=_env_max_objects(),
        help="bound on horizontal arrows for isomorphism search (env DCAT_MAX_OBJECTS)",
    )
    common.add_argument("--max-set", type=int, default=DEFAULT_MAX_SET, help="bound on enriched hom-set size")

    p = argparse.ArgumentParser(prog="dcat", description="Finite double categories and their enrichments.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="validate every declaration in a file")
    s.add_argument("file")
    s.add_argument("names", nargs="*", help="restrict to these declarations")

    s = sub.add_parser("derive", parents=[common], help="build a derived structure and validate it")
    s.add_argument("--what", required=True, choices=("horizontal", "diagonal", "transversal", "vop", "glob-h", "glob-v"))
    s.add_argument("--emit", action="store_true", help="print the derived structure as .dcat text")
    s.add_argument("file")
    s.add_argument("name")

    s = sub.add_parser("predicate", parents=[common], help="test a property of a double category")
    s.add_argument("--which", required=True, choices=("thin", "inclusion", "framed"))
    s.add_argument("file")
    s.add_argument("name")

    s = sub.add_parser("groth", parents=[common], help="underlying double category of an enrichment")
    s.add_argument("--emit", action="store_true")
    s.add_argument("file")
    s.add_argument("name")

    s = sub.add_parser("translate", parents=[common], help="turn a double category into an enrichment")
    s.add_argument("--to", required=True, choices=("rel", "span", "set"))
    s.add_argument("--emit", action="store_true")
    s.add_argument("file")
    s.add_argument("name")

    s = sub.add_parser("roundtrip", parents=[common], help="translate, take the Grothendieck construction, compare")
    s.add_argument("--via", required=True, choices=("rel", "span", "set"))
    s.add_argument("file")
    s.add_argument("name")

    s = sub.add_parser("iso", parents=[common], help="search for an isomorphism of double categories")
    s.add_argument("file")
    s.add_argument("name1")
    s.add_argument("name2")

    s = sub.add_parser("census", parents=[common], help="sizes of every declaration, or of the built-in corpus")
    s.add_argument("files", nargs="*")
    return p


# -- helpers ------------------------------------------------------------------


def _resolve(path):
    p = Path(path)
    if p.exists():
        return p
    # fall back to the examples shipped with the package
    if p.parts and p.parts[0] == "examples":
        alt = EXAMPLES_DIR.joinpath(*p.parts[1:])
        if alt.exists():
            return alt
    raise UsageError(f"no such file: {path}")


def _load(path) -> Document:
    return parse_file(_resolve(path))


def _get(doc, name, kind=None):
    if name not in doc:
        raise UsageError(f"no declaration named {name!r}")
    value = doc[name]
    if kind is not None and not isinstance(value, kind):
        raise UsageError(f"{name!r} is a {_kind(value)}, expected a {_KIND_NAMES[kind]}")
    return value


_KIND_NAMES = {
    FinCategory: "category",
    FinDoubleCategory: "double category",
    EnrichedDoubleCategory: "enrichment",
    MonoidalFinDoubleCategory: "monoidal double category",
}


def _kind(value):
    return _KIND_NAMES.get(type(value), type(value).__name__)


def _validate(value) -> ValidationReport:
    if isinstance(value, FinCategory):
        return validate_category(value)
    if isinstance(value, FinDoubleCategory):
        return validate_double_category(value)
    if isinstance(value, EnrichedDoubleCategory):
        return validate_enrichment(value)
    if isinstance(value, MonoidalFinDoubleCategory):
        return validate_monoidal(value)
    raise TypeError(type(value).__name__)


def _size(value) -> dict:
    if isinstance(value, FinCategory):
        return {"objects": len(value.objects), "arrows": len(value.arrows)}
    if isinstance(value, FinDoubleCategory):
        return {"objects": len(value.V.objects), "verticals": len(value.V.arrows), "horizontals": len(value.A.objects), "squares": len(value.A.arrows)}
    if isinstance(value, EnrichedDoubleCategory):
        return {
            "objects": len(value.V.objects),
            "arrows": len(value.V.arrows),
            "max_hom_set": max((len(s) for s in value.E_obj.values()), default=0),
        }
    if isinstance(value, MonoidalFinDoubleCategory):
        return _size(value.carrier)
    return {}


def _check_sets(e: EnrichedDoubleCategory, max_set):
    big = max((len(s) for s in e.E_obj.values()), default=0)
    if big > max_set:
        raise SizeBoundExceeded(f"hom sets of {e.name or 'enrichment'}", big, max_set)


def _result(status="ok", violations=(), counts=None, witness=None, **extra):
    out = {
        "status": status,
        "violations": [{"axiom": v["axiom"], "instance": v["instance"], "location": v["location"]} for v in violations],
        "counts": counts or {},
        "witness": witness,
    }
    out.update(extra)
    return out


def _from_report(rep: ValidationReport, counts=None, **extra):
    viol = [v.to_dict() for v in rep.violations]
    c = {"violations": len(viol)}
    c.update(counts or {})
    witness = viol[0] if viol else None
    return _result(rep.status, viol, c, witness, **extra)


# -- subcommands --------------------------------------------------------------


def cmd_check(args):
    doc = _load(args.file)
    names = args.names or [n for n, _ in doc]
    total = ValidationReport(str(args.file))
    per = {}
    for n in names:
        rep = _validate(_get(doc, n))
        per[n] = rep.status
        total.extend(rep, prefix=f"{n}:")
    counts = {"declarations": len(names), "failed": sum(s != "ok" for s in per.values())}
    return _from_report(total, counts, result=per), str(total) if not total.ok else "\n".join(f"{n}: {s}" for n, s in per.items())


def cmd_derive(args):
    doc = _load(args.file)
    d = _get(doc, args.name, FinDoubleCategory)
    what = args.what
    if what == "horizontal":
        out = horizontal_category(d)
        rep = validate_category(out)
    elif what == "diagonal":
        out = diagonal_category(d)
        rep = validate_category(out)
    elif what == "transversal":
        out = transversal(d)
        rep = validate_double_category(out)
    elif what == "vop":
        out = vertical_opposite(d)
        rep = validate_double_category(out)
    else:
        out = globular_horizontal(d) if what == "glob-h" else globular_vertical(d)
        rep = validate_2category(out)
    extra = {"result": repr(out)}
    text = str(rep)
    if args.emit:
        if isinstance(out, (FinCategory, FinDoubleCategory)):
            extra["output"] = render(Document({f"{args.name}_{what.replace('-', '_')}": printable(out)}))
            text += "\n\n" + extra["output"].rstrip()
        else:
            raise UsageError("2-categories have no .dcat form; drop --emit")
    return _from_report(rep, _size(out) if not hasattr(out, "cells") else {"cells": len(out.cells)}, **extra), text


def cmd_predicate(args):
    doc = _load(args.file)
    d = _get(doc, args.name, FinDoubleCategory)
    fn = {"thin": is_thin, "inclusion": is_inclusion, "framed": is_framed}[args.which]
    value = bool(fn(d))
    return _result("ok", counts=_size(d), result=value), f"{args.which}: {str(value).lower()}"


def cmd_groth(args):
    doc = _load(args.file)
    e = _get(doc, args.name, EnrichedDoubleCategory)
    _check_sets(e, args.max_set)
    d = grothendieck(e)
    rep = validate_double_category(d)
    counts = groth_census(e)
    extra = {"result": repr(d)}
    text = f"{d!r}\n{rep}"
    if args.emit:
        extra["output"] = render(Document({f"{args.name}_groth": printable(d)}))
        text += "\n\n" + extra["output"].rstrip()
    return _from_report(rep, counts, **extra), text


def cmd_translate(args):
    doc = _load(args.file)
    d = _get(doc, args.name, FinDoubleCategory)
    to = {"rel": thin_to_rel, "span": double_to_span, "set": framed_to_set}[args.to]
    e = to(d)
    rep = validate_enrichment(e)
    extra = {"result": repr(e)}
    text = str(rep)
    if args.emit:
        extra["output"] = render(Document({f"{args.name}_{args.to}": printable(e)}))
        text += "\n\n" + extra["output"].rstrip()
    return _from_report(rep, _size(e), **extra), text


def cmd_roundtrip(args):
    doc = _load(args.file)
    d = _get(doc, args.name, FinDoubleCategory)
    e, back, iso = round_trip(d, args.via, max_objects=args.max_objects)
    counts = {"original": _size(d), "returned": _size(back)}
    if iso is None:
        v = {"axiom": "round-trip-iso", "instance": [args.name, args.via], "location": "iso_search"}
        return _result("fail", [v], counts), f"{args.name}: no isomorphism after round trip via {args.via}"
    return _result("ok", counts=counts, witness=iso.to_dict()), f"{args.name}: round trip via {args.via} is isomorphic"


def cmd_iso(args):
    doc = _load(args.file)
    d1 = _get(doc, args.name1, FinDoubleCategory)
    d2 = _get(doc, args.name2, FinDoubleCategory)
    iso = iso_search(d1, d2, max_objects=args.max_objects)
    counts = {args.name1: _size(d1), args.name2: _size(d2)}
    if iso is None:
        v = {"axiom": "isomorphic", "instance": [args.name1, args.name2], "location": "iso_search"}
        return _result("fail", [v], counts, result=False), f"{args.name1} and {args.name2} are not isomorphic"
    return _result("ok", counts=counts, witness=iso.to_dict(), result=True), f"{args.name1} and {args.name2} are isomorphic"


def cmd_census(args):
    rows = {}
    if args.files:
        for f in args.files:
            for n, v in _load(f):
                rows[f"{f}:{n}"] = dict(kind=_kind(v), **_size(v))
    else:
        from .corpus import enrichment_corpus, strict_double_corpus

        for d in strict_double_corpus():
            rows[d.name] = dict(kind=_kind(d), **_size(d))
        for e in enrichment_corpus():
            if max((len(s) for s in e.E_obj.values()), default=0) <= args.max_set:
                rows[e.name] = dict(kind=_kind(e), base=e.base.name, **groth_census(e))
    lines = [f"{k}: " + ", ".join(f"{a}={b}" for a, b in v.items()) for k, v in rows.items()]
    return _result("ok", counts={"entries": len(rows)}, result=rows), "\n".join(lines)


COMMANDS = {
    "check": cmd_check,
    "derive": cmd_derive,
    "predicate": cmd_predicate,
    "groth": cmd_groth,
    "translate": cmd_translate,
    "roundtrip": cmd_roundtrip,
    "iso": cmd_iso,
    "census": cmd_census,
}


def _emit(args, payload, text, stream):
    if getattr(args, "format", "text") == "json":
        stream.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        stream.write(text.rstrip() + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        payload, text = COMMANDS[args.command](args)
    except (UsageError, DslError) as exc:
        err = exc.to_dict() if isinstance(exc, DcatError) else {"error": "UsageError", "message": str(exc)}
        _emit(args, _result("error", error=err), f"error: {exc}", stderr if args.format == "text" else stdout)
        return EXIT_USAGE
    except DcatError as exc:
        _emit(args, _result("error", error=exc.to_dict()), f"error: {exc.code}: {exc}", stderr if args.format == "text" else stdout)
        return EXIT_FAIL
    _emit(args, payload, text, stdout)
    return EXIT_OK if payload["status"] == "ok" else EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
