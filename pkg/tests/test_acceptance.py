"""Acceptance criteria, one test per criterion.

Run ``pytest tests/test_acceptance.py -v`` for one PASSED/FAILED line per
criterion.  Each test also enforces the stated runtime budget where one
is given.
"""

import random
import time
from importlib import resources

from dcat.corpus import (
    chain3,
    enrichment_corpus,
    framed_corpus,
    rel_corpus,
    set_corpus,
    strict_double_corpus,
    thin_corpus,
    walking_arrow,
    weak_example,
)
from dcat.doublecat import (
    diagonal_category,
    globular_horizontal,
    globular_vertical,
    is_framed,
    is_thin,
    iso_search,
    squares_double_category,
    terminal_double_category,
    transversal,
    validate_2category,
    validate_double_category,
    vertical_opposite,
)
from dcat.base import rel_set
from dcat.dsl import parse, render
from dcat.enrich import LAWS, trivial_enrichment, validate_enrichment
from dcat.errors import DslError
from dcat.fincat import terminal_category, validate_category
from dcat.groth import grothendieck
from dcat.mutate import DOUBLE_TABLES, double_mutations, enrichment_mutations
from dcat.translate import double_to_span, framed_to_set, rel_to_thin, thin_to_rel

# iso_search is complete up to this many horizontal arrows; corpus instances stay below it
ISO_BOUND = 200


def test_criterion_1_axiom_verifier_soundness():
    t0 = time.perf_counter()
    for d in (
        terminal_double_category(),
        squares_double_category(terminal_category()),
        squares_double_category(walking_arrow()),
        squares_double_category(chain3()),
    ):
        assert validate_double_category(d).ok, d.name
    sq2 = squares_double_category(walking_arrow())
    missed, total = [], 0
    # U, horizontal composite and both composition tables, plus S, T and the coherence families
    for desc, m in double_mutations(sq2, DOUBLE_TABLES + ("S", "T", "coherence")):
        total += 1
        rep = validate_double_category(m)
        if rep.ok or not rep.violations[0].axiom or not rep.violations[0].instance:
            missed.append(desc)
    elapsed = time.perf_counter() - t0
    assert total == 214
    assert missed == [], missed
    assert elapsed < 10, elapsed


def test_criterion_2_grothendieck_outputs_validate():
    t0 = time.perf_counter()
    corpus = enrichment_corpus()
    assert len(corpus) >= 50
    assert {e.base.name for e in corpus} == {"RelSet", "SpanSet", "SetSet"}
    for e in corpus:
        assert len(e.V.objects) <= 3 and max(len(s) for s in e.E_obj.values()) <= 3, e.name
    failures = []
    for e in corpus:
        if not validate_enrichment(e).ok:
            failures.append(("input", e.name))
            continue
        if not validate_double_category(grothendieck(e, validate=False)).ok:
            failures.append(("output", e.name))
    elapsed = time.perf_counter() - t0
    assert failures == []
    assert elapsed < 60, elapsed


def test_criterion_3_rel_enrichments_are_thin_double_categories():
    failures = []
    for e in rel_corpus():
        g = grothendieck(e)
        if not is_thin(g):
            failures.append(("thin", e.name))
        if iso_search(rel_to_thin(e), g, ISO_BOUND) is None:
            failures.append(("rel_to_thin ~ grothendieck", e.name))
        d = rel_to_thin(e)
        if iso_search(rel_to_thin(thin_to_rel(d)), d, ISO_BOUND) is None:
            failures.append(("thin_to_rel . rel_to_thin", e.name))
    for d in thin_corpus():
        if iso_search(d, rel_to_thin(thin_to_rel(d)), ISO_BOUND) is None:
            failures.append(("rel_to_thin . thin_to_rel", d.name))
    assert failures == []


def test_criterion_4_span_round_trip():
    cases = [d for d in strict_double_corpus() if len(d.A.arrows) <= 8]
    assert len(cases) >= 5
    failures = [d.name for d in cases if iso_search(d, grothendieck(double_to_span(d)), ISO_BOUND) is None]
    assert failures == []


def test_criterion_5_set_enrichments_are_framed():
    failures = [e.name for e in set_corpus() if not is_framed(grothendieck(e))]
    for d in framed_corpus():
        if iso_search(d, grothendieck(framed_to_set(d)), ISO_BOUND) is None:
            failures.append(d.name)
    assert failures == []


def test_criterion_6_derived_constructions():
    failures = []
    every = strict_double_corpus() + thin_corpus() + [weak_example()]
    for d in every:
        if vertical_opposite(vertical_opposite(d)) != d:
            failures.append(("vop involution", d.name))
        if not validate_2category(globular_vertical(d)).ok:
            failures.append(("globular vertical", d.name))
        if not d.is_strict():
            continue
        if iso_search(d, transversal(transversal(d)), ISO_BOUND) is None:
            failures.append(("transversal involution", d.name))
        if not validate_category(diagonal_category(d)).ok:
            failures.append(("diagonal", d.name))
        if not validate_2category(globular_horizontal(d)).ok:
            failures.append(("globular horizontal", d.name))
    assert failures == []


def _fuzz_inputs(n, rng, texts):
    alphabet = b"categorydubleenrichmonoidalspvtxyzE_0123456789{}:;,->|=.*()[]# \n\t"
    for i in range(n):
        k = i % 10
        if k < 6:
            yield rng.randbytes(rng.randrange(0, 80))
        elif k < 9:
            yield bytes(rng.choice(alphabet) for _ in range(rng.randrange(0, 120)))
        else:
            src = bytearray(rng.choice(texts))
            for _ in range(rng.randrange(1, 4)):
                src[rng.randrange(len(src))] = rng.randrange(256)
            yield bytes(src)


def test_criterion_7_dsl_round_trip_and_fuzz():
    folder = resources.files("dcat") / "examples"
    files = [p for p in folder.iterdir() if p.name.endswith(".dcat")]
    assert files
    texts = []
    for p in files:
        text = p.read_text()
        doc = parse(text)
        assert render(doc) == text, p.name
        assert parse(render(doc)) == doc, p.name
        texts.append(text.encode())
    rng = random.Random(20261016)
    crashes = []
    for data in _fuzz_inputs(100_000, rng, texts):
        try:
            parse(data)
        except DslError as e:
            if not (e.line >= 1 and e.col >= 1):
                crashes.append(("unpositioned", data))
        except Exception as e:  # any other exception is a crash
            crashes.append((type(e).__name__, data))
    assert crashes == [], crashes[:3]


def test_criterion_8_enrichment_law_independence():
    missing = {}
    for e in (trivial_enrichment(rel_set()), thin_to_rel(squares_double_category(walking_arrow()))):
        named = set()
        for _, m in enrichment_mutations(e):
            named |= validate_enrichment(m).axioms & set(LAWS)
        missing[e.name] = sorted(set(LAWS) - named)
    assert all(not v for v in missing.values()), missing
