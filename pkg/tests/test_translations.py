from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from pathlock.corpus import access3_cm, copyless_sum_cm, one_counter_cm, one_loop_da
from pathlock.counter import CounterMachine, Expr, evaluate_expression, is_copyless, is_sumless, machine_run
from pathlock.distributed import da_run, is_quasi_acyclic, max_loops_per_trace, max_trace_length
from pathlock.errors import PreconditionError, ResourceError
from pathlock.harness import random_quasi_acyclic_da, random_sumless_cm
from pathlock.translations import (copyless_to_sumless, da_to_copyless, make_nonnegative, mod_add,
                                   mod_encode, reduce_access, sumless_to_da, translate_expression_mod)
from pathlock.translations.modular import reconstruct_guard
from pathlock.words import cutoff, enumerate_words

from conftest import disagreements


# -- modular encoding ------------------------------------------------------------------

@given(st.integers(-200, 200), st.integers(1, 8))
def test_encoding_splits_evenly(n, r):
    enc = mod_encode(n, r)
    assert sum(enc.components) == n
    assert enc.remainder == n % r
    assert max(enc.components) - min(enc.components) <= 1
    assert list(enc.components) == sorted(enc.components, reverse=True)


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 6))
def test_addition_is_a_homomorphism(a, b, r):
    assert mod_add(mod_encode(a, r), mod_encode(b, r)) == mod_encode(a + b, r)


@given(st.integers(-30, 30), st.integers(1, 5))
def test_guard_reconstruction_from_two_components(n, r):
    enc = mod_encode(n, r)
    top = cutoff(-1, 1, enc.components[-1])
    bottom = cutoff(-1, 1, enc.components[0])
    assert reconstruct_guard(top, bottom, enc.remainder, r) == cutoff(-r, r, n)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-3, 3), st.integers(1, 4))
def test_symbolic_expression_encoding_evaluates_correctly(x, y, c, r):
    expr = Expr(("x", "y"), c)
    enc = translate_expression_mod({"x": x % r, "y": y % r}, expr, r)
    valuation = {f"{v}_{i}": comp for v, n in (("x", x), ("y", y))
                 for i, comp in enumerate(mod_encode(n, r).components)}
    values = tuple(evaluate_expression(valuation, e) for e in enc.components)
    assert (values, enc.remainder) == (mod_encode(x + y + c, r).components, (x + y + c) % r)


# -- machine-to-machine passes ---------------------------------------------------------

def test_powerset_pass_on_running_machine(running_cm):
    out, cert = copyless_to_sumless(running_cm)
    assert len(out.counters) == 4 and out.access == 2 and is_sumless(out)
    assert cert.check(out) == []
    assert disagreements(running_cm, out, "abc", 5) == []


def test_powerset_pass_on_summing_fixture():
    m = copyless_sum_cm()
    out, cert = copyless_to_sumless(m)
    assert is_sumless(out) and len(out.counters) == 2 ** len(m.counters)
    assert out.access == len(m.counters) * m.access
    assert cert.check() == []
    assert disagreements(m, out, m.alphabet, 6) == []


def test_powerset_pass_needs_copyless():
    m = CounterMachine.build(alphabet="a", states=("p",), counters=("x", "y"), initial="p", access=1,
                             accepting=(), transitions=[("p", {}, "a", "p", {"x": "x", "y": "x"})])
    with pytest.raises(PreconditionError):
        copyless_to_sumless(m)


@pytest.mark.parametrize("path", ["general", "sumless"])
def test_access_reduction_on_access3(path):
    m = access3_cm()
    out, cert = reduce_access(m, path=path)
    assert out.access == 1 and cert.check(out) == []
    assert len(out.counters) == (len(m.counters) * 3 if path == "general" else len(m.counters))
    assert disagreements(m, out, m.alphabet, 6) == []


def test_access_reduction_general_path_on_summing_fixture():
    m = copyless_sum_cm()
    out, cert = reduce_access(m)
    assert out.access == 1 and is_copyless(out) and cert.check() == []
    assert disagreements(m, out, m.alphabet, 5) == []


def test_sumless_path_refuses_sums():
    with pytest.raises(PreconditionError):
        reduce_access(copyless_sum_cm(), path="sumless")


def test_nonnegative_pass_on_fixtures(running_cm):
    for m in (running_cm, one_counter_cm(), access3_cm()):
        out, cert = make_nonnegative(m)
        assert cert.check() == []
        assert disagreements(m, out, m.alphabet, 5) == []
        for w in enumerate_words(m.alphabet, 5):
            assert all(v >= 0 for c in machine_run(out, w).configurations for v in c.values)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_nonnegative_pass_on_random_machines(seed):
    m = random_sumless_cm(seed, 2, 2, 2, "ab")
    out, _ = make_nonnegative(m)
    assert disagreements(m, out, "ab", 5) == []


# -- machine to automaton ------------------------------------------------------------

@pytest.fixture(scope="module")
def running_tracks():
    from pathlock.corpus import example_cm
    return sumless_to_da(example_cm())


def test_track_automaton_is_quasi_acyclic_and_equivalent(running_cm, running_tracks):
    a, cert = running_tracks
    assert is_quasi_acyclic(a) and max_loops_per_trace(a) <= 4
    assert cert.check(a) == []
    assert disagreements(running_cm, a, "abc", 6) == []


def test_counter_track_encodes_value_after_delay(running_tracks):
    """Node 3 on aaabbc holds x = 3 and y = 0, delayed by 2 * 3 rounds."""
    a, _ = running_tracks
    run = da_run(a, "aaabbc", 100)
    assert run.stabilized
    column = [c[2] for c in run.configurations]
    x_track = "".join(s.split("|")[0][0] for s in column)
    y_track = "".join(s.split("|")[0][1] for s in column)
    assert x_track.startswith("⊤" * 6 + "111" + "0" + "⊥")
    assert set(x_track[11:]) == {"♯"}
    assert y_track.startswith("⊤" * 6 + "0" + "⊥")


def test_track_translation_of_one_counter_machine():
    m = one_counter_cm()
    a, cert = sumless_to_da(m)
    assert max_loops_per_trace(a) <= len(m.counters) + 2 and cert.check() == []
    assert disagreements(m, a, m.alphabet, 6) == []


def test_track_translation_preconditions():
    with pytest.raises(PreconditionError):
        sumless_to_da(copyless_sum_cm())
    with pytest.raises(PreconditionError):
        sumless_to_da(access3_cm())


def test_state_cap_is_enforced(monkeypatch, running_cm):
    monkeypatch.setenv("PATHLOCK_STATE_CAP", "10")
    with pytest.raises(ResourceError) as info:
        sumless_to_da(running_cm)
    assert info.value.diagnostics["cap"] == 10


# -- automaton to machine --------------------------------------------------------------

def test_single_loop_automaton_needs_no_counters():
    a = one_loop_da()
    m, cert = da_to_copyless(a)
    assert m.counters == () and cert.check() == []
    assert disagreements(a, m, a.alphabet, 6) == []


def test_skeleton_machine_of_running_tracks(running_cm, running_tracks):
    a, _ = running_tracks
    m, cert = da_to_copyless(a)
    assert is_copyless(m) and cert.check(m) == []
    assert len(m.counters) == max_loops_per_trace(a) - 1
    assert m.access <= max_trace_length(a)
    assert disagreements(running_cm, m, "abc", 5) == []


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 5))
def test_skeleton_machine_of_random_automata(seed, n):
    a = random_quasi_acyclic_da(seed, n, "ab")
    m, cert = da_to_copyless(a)
    assert is_copyless(m) and cert.check() == []
    assert disagreements(a, m, "ab", 5) == []


def test_skeleton_machine_needs_quasi_acyclic(running_da):
    with pytest.raises(PreconditionError):
        da_to_copyless(running_da)
