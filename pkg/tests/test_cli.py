import io
import json
import subprocess
import sys

import pytest

from causalcat.cli import main

from .conftest import EXAMPLES, GOLDEN


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


@pytest.mark.parametrize("name", ["idE", "zero", "f"])
def test_support_golden(name):
    code, text = run("support", str(EXAMPLES / "category.json"), name)
    assert code == 0
    assert text == (GOLDEN / f"support_{name}.txt").read_text()


def test_support_json():
    code, text = run("support", str(EXAMPLES / "category.json"), "f", "--format", "json")
    doc = json.loads(text)
    assert doc["support"] == ["b"] and doc["supported_in"]["U_b"] is True


def test_support_unknown_morphism(capsys):
    code, _ = run("support", str(EXAMPLES / "category.json"), "nope")
    assert code == 2
    assert "unknown morphism" in capsys.readouterr().err


def test_teleport_golden():
    code, text = run("teleport", str(EXAMPLES / "diamond_scenario.json"))
    assert code == 0
    assert text == (GOLDEN / "teleport_diamond.txt").read_text()


def test_teleport_normalized():
    code, text = run("teleport", str(EXAMPLES / "diamond_normalized.json"), "--format", "json")
    doc = json.loads(text)
    assert code == 0 and doc["deviation"] <= 1e-12 and doc["support"] == ["q"]


def test_teleport_self_loop(capsys):
    code, _ = run("teleport", str(EXAMPLES / "self_loop_scenario.json"))
    assert code == 2
    assert "chron irreflexive" in capsys.readouterr().err


def test_teleport_disjoint():
    code, text = run("teleport", str(EXAMPLES / "disjoint_scenario.json"))
    assert code == 0
    assert "support carrier: {}" in text and "empty intersection" in text


def test_teleport_missing_file(tmp_path, capsys):
    code, _ = run("teleport", str(tmp_path / "none.json"))
    assert code == 2 and "cannot read" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run("teleport", str(bad))[0] == 2


def test_closure_failure_witness():
    code, text = run("closure", str(EXAMPLES / "closure.json"))
    assert code == 1
    assert "inflationary" in text and "{a}" in text


def test_site_strict():
    assert run("site", str(EXAMPLES / "diamond_site.json"), "--strict")[0] == 0


def test_laws_unknown_suite(capsys):
    assert run("laws", "bogus")[0] == 2
    assert "unknown suite" in capsys.readouterr().err


def test_laws_sample_count():
    code, text = run("laws", "graded-monad", "--samples", "10", "--format", "json")
    doc = json.loads(text)
    assert code == 0 and doc["suites"][0]["cases"] == 10


def test_laws_all_default_seed():
    code, text = run("laws", "all", "--seed", "0")
    assert code == 0
    assert text.rstrip().endswith("PASS: 10/10 suites")


def test_laws_deterministic():
    argv = ("laws", "support", "coreflection", "closure", "--seed", "3", "--samples", "20", "--format", "json")
    assert run(*argv)[1] == run(*argv)[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "causalcat", "support", str(EXAMPLES / "category.json"), "idE"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == (GOLDEN / "support_idE.txt").read_text()
