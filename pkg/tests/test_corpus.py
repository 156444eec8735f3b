from __future__ import annotations

from pathlib import Path

import pytest

from pathlock.corpus import corpus_devices, one_loop_da
from pathlock.deviceio import load_device, serialize_device
from pathlock.harness import accepts, language_oracle_L
from pathlock.translations import da_to_copyless, reduce_access
from pathlock.words import enumerate_words

from conftest import disagreements

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.mark.parametrize("name", sorted(corpus_devices()))
def test_shipped_file_matches_fixture(name):
    path = CORPUS / f"{name}.json"
    assert path.read_text(encoding="utf-8") == serialize_device(corpus_devices()[name])
    assert serialize_device(load_device(path)) == path.read_text(encoding="utf-8")


def test_no_stray_corpus_files():
    assert {p.stem for p in CORPUS.glob("*.json")} == set(corpus_devices())


def test_running_examples_on_the_illustrative_words(running_cm, running_da):
    for device in (running_cm, running_da):
        assert accepts(device, "aaabbc") and accepts(device, "aabbac")
        assert not accepts(device, "abacac")


def test_running_examples_agree_up_to_six(running_cm, running_da):
    assert disagreements(running_cm, running_da, "abc", 6) == []
    assert all(accepts(running_cm, w) == language_oracle_L(w) for w in enumerate_words("abc", 6))


def test_access3_fixture_reduces_to_access_one():
    m = corpus_devices()["access3-cm"]
    out, _ = reduce_access(m)
    assert m.access == 3 and out.access == 1
    assert disagreements(m, out, m.alphabet, 6) == []


def test_one_loop_fixture_gives_finite_state_machine():
    m, _ = da_to_copyless(one_loop_da())
    assert len(m.counters) == 0
