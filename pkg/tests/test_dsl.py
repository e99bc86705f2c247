import random
from importlib import resources

import pytest
from hypothesis import given, strategies as st

from dcat.corpus import enrichment_corpus, shipped_examples, strict_double_corpus, weak_example
from dcat.doublecat import FinDoubleCategory, validate_double_category
from dcat.dsl import Document, parse, parse_file, printable, render, to_dsl, tokenize
from dcat.enrich import validate_enrichment
from dcat.errors import DslError, DslSyntaxError, DuplicateId, UnknownReference
from dcat.fincat import FinCategory, terminal_category

EXAMPLES = resources.files("dcat") / "examples"
EXAMPLE_FILES = sorted(p.name for p in EXAMPLES.iterdir() if p.name.endswith(".dcat"))

ONE = "category One { objects: x; }\n"


def test_examples_present():
    assert set(EXAMPLE_FILES) == set(shipped_examples())


@pytest.mark.parametrize("name", EXAMPLE_FILES)
def test_example_round_trip(name):
    text = (EXAMPLES / name).read_text()
    doc = parse(text)
    assert render(doc) == text
    assert parse(render(doc)) == doc


@pytest.mark.parametrize("name", EXAMPLE_FILES)
def test_examples_match_generator(name):
    doc = shipped_examples()[name]
    assert render(doc) == (EXAMPLES / name).read_text()


def test_terminal_category_from_source():
    doc = parse(ONE)
    assert doc["One"] == terminal_category("x")


def test_category_with_composites():
    doc = parse("category C { objects: a, b, c; arrows: f : a -> b, g : b -> c, h : a -> c; compose: f.g = h; }")
    c = doc["C"]
    assert c.comp["f", "g"] == "h"
    assert c.comp["id_a", "f"] == "f"


def test_unknown_horizontal_in_square():
    src = ONE + "double D { vertical: One; horizontals: w : x -|> x; squares: s : u => w [id_x, id_x]; unit: x = w; }"
    with pytest.raises(UnknownReference) as exc:
        parse(src)
    assert (exc.value.line, exc.value.col) == (2, 66)


def test_duplicate_ids():
    with pytest.raises(DuplicateId):
        parse("category A { objects: x, x; }")
    with pytest.raises(DuplicateId):
        parse(ONE + ONE)
    with pytest.raises(DuplicateId):
        parse("category A { objects: x; arrows: x : x -> x; }")


def test_syntax_error_position_and_expected_set():
    with pytest.raises(DslSyntaxError) as exc:
        parse("category A {\n  objects x; }")
    e = exc.value
    assert (e.line, e.col) == (2, 11)
    assert e.expected == {":"}
    assert e.to_dict()["expected"] == [":"]


def test_invalid_utf8_is_positioned():
    with pytest.raises(DslSyntaxError) as exc:
        parse(b"category A {\n \xff }")
    assert (exc.value.line, exc.value.col) == (2, 2)


def test_comments_and_newlines_ignored():
    a = parse("# header\ncategory One {\r\n objects: x; # trailing\n}\n")
    assert a == parse(ONE)


def test_tokenizer_positions():
    toks = tokenize("a ->\n  b")
    assert [(t.text, t.line, t.col) for t in toks] == [("a", 1, 1), ("->", 1, 3), ("b", 2, 3), ("", 2, 4)]


def test_double_defaults_are_strict():
    src = ONE + "double D { vertical: One; horizontals: u : x -|> x; unit: x = u; }"
    d = parse(src)["D"]
    assert validate_double_category(d).ok
    assert d.is_strict()


@pytest.mark.parametrize("d", strict_double_corpus() + [weak_example()], ids=lambda d: d.name)
def test_double_round_trip(d):
    p = printable(d)
    text = render(Document({"D": p}))
    back = parse(text)
    assert back["D"] == p
    assert render(back) == text


def test_enrichment_round_trips():
    for e in enrichment_corpus():
        p = printable(e)
        text = render(Document({"E": p}))
        back = parse(text)
        assert back["E"] == p, e.name


def test_to_dsl_relabels():
    text = to_dsl(weak_example(), "W")
    assert isinstance(parse(text)["W"], FinDoubleCategory)


def test_enrichment_errors():
    base = ONE + "enriched E over RelSet { vertical: One; set E(x, x) = {a}; unit(x) = a; "
    with pytest.raises(DslError):
        parse(base + "}")  # composition missing
    with pytest.raises(UnknownReference):
        parse(base + "comp(x, x, x) = {a a -> b}; }")
    ok = parse(base + "hom E(id_x, id_x) = {a -> a}; comp(x, x, x) = {a a -> a}; }")
    assert validate_enrichment(ok["E"]).ok


def _mutate(text, rng):
    words = text.split(" ")
    pool = ["{", "}", ";", ":", ",", "->", "-|>", "=>", "*", ".", "|", "(", ")", "[", "]", "=", "x", "E", "arity", "()", "cell", "hom"]
    for _ in range(rng.randrange(1, 4)):
        k = rng.randrange(len(words))
        op = rng.randrange(3)
        if op == 0:
            words[k] = rng.choice(pool)
        elif op == 1 and len(words) > 1:
            del words[k]
        else:
            words.insert(k, rng.choice(pool))
    return " ".join(words)


def test_mutated_sources_never_crash():
    rng = random.Random(7)
    texts = [(EXAMPLES / n).read_text() for n in EXAMPLE_FILES if n not in ("monoidal.dcat", "framed.dcat")]
    for _ in range(1500):
        src = _mutate(rng.choice(texts), rng)
        try:
            parse(src)
        except DslError as e:
            assert e.line >= 1 and e.col >= 1


@given(st.binary(max_size=200))
def test_random_bytes_never_crash(data):
    try:
        parse(data)
    except DslError as e:
        assert e.line >= 1 and e.col >= 1


@given(st.text(alphabet="categorydubleobjs{}:;,->|=.*()[]# \nxyzE_01", max_size=120))
def test_random_token_soup_never_crashes(text):
    try:
        parse(text)
    except DslError as e:
        assert e.line >= 1 and e.col >= 1
