from __future__ import annotations

import json
from pathlib import Path

import pytest

from pathlock.cli import cli_main
from pathlock.deviceio import load_device, serialize_device
from pathlock.facts import device_facts
from pathlock.harness import check_equivalence, space_time_diagram
from pathlock.translations import reduce_access

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
CM = str(CORPUS / "running-cm.json")
DA = str(CORPUS / "running-da.json")


def test_simulate_with_diagram(capsys):
    assert cli_main(["simulate", "--device", CM, "--word", "aaabbc", "--diagram"]) == 0
    out = capsys.readouterr().out
    assert out == space_time_diagram(load_device(CM), tuple("aaabbc")) + "\nAccept\n"


def test_simulate_rejection_exits_one(capsys):
    assert cli_main(["simulate", "--device", DA, "--word", "abacac"]) == 1
    assert capsys.readouterr().out.strip() == "RejectStable"


def test_classify_reports_facts(capsys):
    assert cli_main(["classify", "--device", DA]) == 0
    out = capsys.readouterr().out
    assert "quasi-acyclic: false" in out.splitlines()


def test_equiv(capsys):
    assert cli_main(["equiv", "--a", CM, "--b", DA, "--max-len", "6"]) == 0
    assert capsys.readouterr().out.startswith("Equivalent")


def test_inequivalence_exits_one(capsys):
    code = cli_main(["equiv", "-a", "random-cm", "-b", "random-cm", "--seed", "4", "--max-len", "3"])
    assert code == 0
    other = CORPUS / "one-loop-da.json"
    assert cli_main(["equiv", "-a", str(other), "-b", "random-da", "--seed", "2"]) == 1
    assert capsys.readouterr().out.splitlines()[-1].startswith("Counterexample")


def test_translate_writes_canonical_output(tmp_path, capsys):
    target = tmp_path / "out.json"
    src = str(CORPUS / "access3-cm.json")
    assert cli_main(["translate", "--pass", "reduce-access", "--device", src, "-o", str(target)]) == 0
    expected, _ = reduce_access(load_device(src))
    assert target.read_text(encoding="utf-8") == serialize_device(expected)
    assert "claim: access == 1 [ok]" in capsys.readouterr().err


def test_translate_to_stdout(capsys):
    assert cli_main(["translate", "--pass", "cm-to-da", "--device", CM]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "distributed-automaton"


def test_translate_chain_on_small_machine(tmp_path):
    target = tmp_path / "chain.json"
    src = str(CORPUS / "one-counter-cm.json")
    assert cli_main(["translate", "--pass", "chain", "--device", src, "-o", str(target)]) == 0
    out = load_device(target)
    assert device_facts(out).copyless
    assert check_equivalence(load_device(src), out, out.alphabet, 5).equivalent


def test_translate_wrong_kind_is_usage_error(capsys):
    assert cli_main(["translate", "--pass", "da-to-cm", "--device", CM]) == 2
    assert "distributed automaton" in capsys.readouterr().err


def test_diagram(capsys):
    assert cli_main(["diagram", "--device", DA, "--word", "aabbac"]) == 0
    assert capsys.readouterr().out.strip().endswith("stable from round 6")


@pytest.mark.parametrize("argv", [
    [],
    ["simulate", "--device", CM],
    ["translate", "--pass", "bogus", "--device", CM],
    ["simulate", "--device", "/nonexistent.json", "--word", "a"],
    ["simulate", "--device", CM, "--word", "xyz"],
])
def test_usage_errors_exit_two(argv, capsys):
    assert cli_main(argv) == 2


def test_parse_error_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json", encoding="utf-8")
    assert cli_main(["classify", "--device", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err
