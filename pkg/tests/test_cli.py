import io
import json
import subprocess
import sys

import pytest

from dcat.cli import EXAMPLES_DIR, run

SQ2 = str(EXAMPLES_DIR / "sq2.dcat")
KEYS = {"status", "violations", "counts", "witness"}


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv, "--format", "json")
    payload = json.loads(out)
    assert KEYS <= set(payload)
    for v in payload["violations"]:
        assert set(v) == {"axiom", "instance", "location"}
    return code, payload


def test_check_terminal():
    code, out, _ = call("check", "examples/terminal.dcat")
    assert code == 0
    assert "Terminal: ok" in out


def test_roundtrip_rel_sq2_has_witness():
    code, payload = call_json("roundtrip", "--via", "rel", "examples/sq2.dcat", "Sq2")
    assert code == 0
    assert payload["status"] == "ok"
    assert payload["witness"]["A_arr"]


def test_predicate_thin():
    code, payload = call_json("predicate", "--which", "thin", SQ2, "Sq2")
    assert code == 0
    assert payload["status"] == "ok" and payload["result"] is True


def test_predicate_framed_false_still_exit_zero():
    code, payload = call_json("predicate", "--which", "framed", SQ2, "Sq2")
    assert code == 0 and payload["result"] is False


@pytest.mark.parametrize("name", ["terminal", "categories", "sq2", "sq3", "framed", "weak", "enriched", "monoidal"])
def test_check_every_example(name):
    code, payload = call_json("check", f"examples/{name}.dcat")
    assert code == 0, payload
    assert payload["counts"]["failed"] == 0


@pytest.mark.parametrize("what", ["horizontal", "diagonal", "transversal", "vop", "glob-h", "glob-v"])
def test_derive(what):
    code, payload = call_json("derive", "--what", what, SQ2, "Sq2")
    assert code == 0 and payload["status"] == "ok"


def test_derive_emit_reparses():
    from dcat.dsl import parse

    code, payload = call_json("derive", "--what", "transversal", "--emit", SQ2, "Sq2")
    assert code == 0
    assert "Sq2_transversal" in parse(payload["output"])


def test_derive_weak_not_strict():
    code, payload = call_json("derive", "--what", "horizontal", "examples/weak.dcat", "Weak")
    assert code == 1
    assert payload["status"] == "error" and payload["error"]["error"] == "NotStrict"


def test_groth_and_translate():
    code, payload = call_json("groth", "examples/enriched.dcat", "RelSq2")
    assert code == 0 and payload["counts"]["squares"] == 6
    code, payload = call_json("translate", "--to", "span", SQ2, "Sq2")
    assert code == 0
    code, payload = call_json("translate", "--to", "set", SQ2, "Sq2")
    assert code == 1 and payload["error"]["error"] == "NotFramed"


def test_groth_max_set():
    code, payload = call_json("groth", "--max-set", "1", "examples/enriched.dcat", "ConstZ2")
    assert code == 1 and payload["error"]["error"] == "SizeBoundExceeded"


def test_iso():
    code, payload = call_json("iso", "examples/framed.dcat", "SqIso", "SqIso")
    assert code == 0 and payload["witness"]
    code, payload = call_json("iso", "examples/framed.dcat", "SqIso", "SqZ2")
    assert code == 1 and payload["result"] is False


def test_max_objects_flag_and_env(monkeypatch):
    code, payload = call_json("iso", "--max-objects", "1", "examples/sq3.dcat", "Sq3", "Sq3")
    assert code == 1 and payload["error"]["error"] == "SizeBoundExceeded"
    monkeypatch.setenv("DCAT_MAX_OBJECTS", "1")
    code, payload = call_json("roundtrip", "--via", "rel", SQ2, "Sq2")
    assert code == 1 and payload["error"]["error"] == "SizeBoundExceeded"


def test_failing_check_exit_one(tmp_path):
    f = tmp_path / "bad.dcat"
    f.write_text("category C { objects: a, b; arrows: f : a -> b, g : a -> b; compose: f.id_b = g; }\n")
    code, payload = call_json("check", str(f))
    assert code == 1 and payload["status"] == "fail"
    assert "right-unit" in {v["axiom"] for v in payload["violations"]}


def test_parse_error_exit_two(tmp_path):
    f = tmp_path / "bad.dcat"
    f.write_text("category C { objects a; }")
    code, payload = call_json("check", str(f))
    assert code == 2
    assert payload["error"]["line"] == 1 and payload["error"]["column"] == 22


def test_usage_errors():
    assert call("bogus")[0] == 2
    assert call("check")[0] == 2
    assert call("check", "no/such/file.dcat")[0] == 2
    assert call("predicate", "--which", "thin", SQ2, "Missing")[0] == 2
    assert call("predicate", "--which", "thin", str(EXAMPLES_DIR / "categories.dcat"), "Two")[0] == 2


def test_census_files():
    code, payload = call_json("census", SQ2)
    assert code == 0
    assert payload["result"][f"{SQ2}:Sq2"]["squares"] == 6


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "dcat", "check", SQ2], capture_output=True, text=True)
    assert r.returncode == 0 and "Sq2: ok" in r.stdout
