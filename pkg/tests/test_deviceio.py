from __future__ import annotations

import json
import subprocess
import sys

import pytest

from pathlock.corpus import access3_cm, corpus_devices, one_loop_da
from pathlock.counter import machine_accepts
from pathlock.deviceio import parse_device, serialize_device
from pathlock.errors import DeviceFormatError
from pathlock.facts import device_facts
from pathlock.harness import random_quasi_acyclic_da
from pathlock.translations import copyless_to_sumless


@pytest.mark.parametrize("name", sorted(corpus_devices()))
def test_corpus_round_trip(name):
    device = corpus_devices()[name]
    text = serialize_device(device)
    again = parse_device(text)
    assert serialize_device(again) == text
    assert device_facts(again) == device_facts(device)


def test_parsed_machine_behaves_like_fixture(running_cm):
    m = parse_device(serialize_device(running_cm))
    assert machine_accepts(m, "aaabbc") and not machine_accepts(m, "abacac")


def test_translated_machine_round_trips(running_cm):
    out, _ = copyless_to_sumless(running_cm)
    again = parse_device(serialize_device(out))
    assert device_facts(again) == device_facts(out)


def test_canonical_form_is_sorted_and_stable(running_cm):
    text = serialize_device(running_cm)
    doc = json.loads(text)
    assert list(doc) == sorted(doc)
    assert doc["states"] == ["s", "r"] and doc["counters"] == ["x", "y"]
    assert text.endswith("}\n")
    assert serialize_device(running_cm) == text


def test_serialization_does_not_depend_on_hash_seed():
    script = ("import hashlib;"
              "from pathlock.corpus import example_cm;"
              "from pathlock.translations import sumless_to_da;"
              "from pathlock.deviceio import serialize_device;"
              "a, _ = sumless_to_da(example_cm());"
              "print(hashlib.sha256(serialize_device(a).encode()).hexdigest())")
    outputs = set()
    for seed in ("1", "2"):
        env = {"PYTHONHASHSEED": seed, "PATH": ""}
        out = subprocess.run([sys.executable, "-c", script], capture_output=True, text=True, env=env)
        assert out.returncode == 0, out.stderr
        outputs.add(out.stdout)
    assert len(outputs) == 1


def test_automaton_default_is_preserved(running_da):
    doc = json.loads(serialize_device(running_da))
    assert doc["default"] == {"to": "⊥"}
    assert parse_device(serialize_device(running_da)).default == "⊥"


def test_reordered_transitions_parse_to_the_same_canonical_text():
    text = serialize_device(access3_cm())
    doc = json.loads(text)
    doc["transitions"].reverse()
    assert serialize_device(parse_device(json.dumps(doc))) == text


def test_syntax_error_has_position():
    with pytest.raises(DeviceFormatError) as info:
        parse_device('{\n  "kind": "counter-machine",\n  oops\n}')
    assert info.value.line == 3 and info.value.column == 3


def test_unknown_kind_is_named():
    doc = json.loads(serialize_device(one_loop_da()))
    doc["kind"] = "turing-machine"
    with pytest.raises(DeviceFormatError, match="turing-machine"):
        parse_device(json.dumps(doc))


def test_out_of_range_constant_is_diagnosed(running_cm):
    doc = json.loads(serialize_device(running_cm))
    doc["transitions"][0]["update"]["x"]["const"] = 5
    with pytest.raises(DeviceFormatError, match="out of range") as info:
        parse_device(json.dumps(doc))
    assert info.value.diagnostics


def test_gaps_are_rejected():
    doc = json.loads(serialize_device(random_quasi_acyclic_da(1, 2, "ab")))
    doc["transitions"] = doc["transitions"][1:]
    with pytest.raises(DeviceFormatError, match="no transition"):
        parse_device(json.dumps(doc))


def test_floats_are_rejected(running_cm):
    doc = json.loads(serialize_device(running_cm))
    doc["access"] = 1.0
    with pytest.raises(DeviceFormatError):
        parse_device(json.dumps(doc))
