from __future__ import annotations

from hypothesis import given, settings, strategies as st

from pathlock.corpus import one_counter_cm, one_loop_da
from pathlock.distributed import is_quasi_acyclic, make_automaton, max_trace_length
from pathlock.harness import (accepts, check_equivalence, language_oracle_L, random_quasi_acyclic_da,
                              random_sumless_cm, space_time_diagram)
from pathlock.deviceio import serialize_device
from pathlock.counter import validate_machine


def test_running_devices_are_equivalent(running_cm, running_da):
    verdict = check_equivalence(running_cm, running_da, "abc", 6)
    assert verdict.equivalent and verdict.words_checked == 1092
    assert str(verdict).startswith("Equivalent")


def test_counterexample_is_length_lex_least(running_cm):
    reject_all = make_automaton(alphabet="abc", states=("n",), init=dict.fromkeys("abc", "n"),
                                accepting=(), transitions=[("*", "*", "n")])
    verdict = check_equivalence(running_cm, reject_all, "abc", 4)
    assert not verdict.equivalent
    assert verdict.counterexample == ("a",)
    assert verdict.accepts_a and not verdict.accepts_b


def test_parallel_check_reports_the_same_counterexample(running_cm):
    odd = random_sumless_cm(3, 2, 2, 1, "abc")
    serial = check_equivalence(running_cm, odd, "abc", 5)
    parallel = check_equivalence(running_cm, odd, "abc", 5, workers=4)
    assert serial == parallel


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 1000), st.integers(0, 1000))
def test_equivalence_is_symmetric(s1, s2):
    a = random_quasi_acyclic_da(s1, 3, "ab")
    b = random_quasi_acyclic_da(s2, 3, "ab")
    ab, ba = check_equivalence(a, b, "ab", 4), check_equivalence(b, a, "ab", 4)
    assert ab.equivalent == ba.equivalent
    assert ab.counterexample == ba.counterexample
    if not ab.equivalent:
        w = ab.counterexample
        assert accepts(a, w) != accepts(b, w)


def test_language_oracle():
    assert language_oracle_L("aabbac") and language_oracle_L("a")
    assert not language_oracle_L("abacac") and not language_oracle_L("b")


@given(st.integers(0, 10_000))
def test_generators_are_pure_functions_of_the_seed(seed):
    assert serialize_device(random_quasi_acyclic_da(seed, 4, "ab")) == \
        serialize_device(random_quasi_acyclic_da(seed, 4, "ab"))
    assert serialize_device(random_sumless_cm(seed, 3, 2, 2, "ab")) == \
        serialize_device(random_sumless_cm(seed, 3, 2, 2, "ab"))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 5))
def test_random_automata_are_quasi_acyclic(seed, n):
    a = random_quasi_acyclic_da(seed, n, "ab")
    assert is_quasi_acyclic(a) and max_trace_length(a) <= n


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_random_machines_are_valid(seed):
    assert validate_machine(random_sumless_cm(seed, 3, 2, 2, "ab")) == []


def test_machine_diagram(running_cm):
    text = space_time_diagram(running_cm, "aaabbc")
    lines = text.splitlines()
    assert lines[0].split() == ["t", "read", "state", "x", "y"]
    assert [tuple(map(int, row.split()[-2:])) for row in lines[1:]] == \
        [(0, 0), (1, 0), (2, 0), (3, 0), (2, 1), (1, 2), (1, 1)]


def test_automaton_diagram(running_da):
    lines = space_time_diagram(running_da, "aabbac").splitlines()
    assert lines[2].split("|")[1].split() == ["-a", "-a", "ab", "ab", "-a", "b-"]
    assert lines[8].split("|")[1].split() == ["⊤"] * 6
    assert lines[-1] == "stable from round 6"


def test_single_state_diagram_is_stable_at_once():
    a = make_automaton(alphabet="ab", states=("q",), init={"a": "q", "b": "q"}, accepting=(),
                       transitions=[("*", "*", "q")])
    lines = space_time_diagram(a, "abab").splitlines()
    assert lines[-1] == "stable from round 0"


def test_diagram_is_deterministic():
    assert space_time_diagram(one_loop_da(), "abba") == space_time_diagram(one_loop_da(), "abba")
    assert space_time_diagram(one_counter_cm(), "ab", rounds=1).count("\n") == 2
