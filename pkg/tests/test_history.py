from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from pathlock.corpus import one_loop_da
from pathlock.distributed import da_run, max_trace_length
from pathlock.errors import PreconditionError
from pathlock.harness import random_quasi_acyclic_da
from pathlock.history import (INF, CompressedSequence, SymbolicCount, compress, expand,
                              history_transition_oracle, naive_history, skeleton_violations,
                              symbolic_history_transition, verify_lemma_structure)

states = st.sampled_from(["p", "q", "r"])


@st.composite
def canonical(draw):
    """A prefix/tail pair together with its expected run-length form."""
    blocks = draw(st.lists(st.tuples(states, st.integers(1, 4)), max_size=5))
    tail = draw(states)
    entries = []
    for s, c in blocks:
        if entries and entries[-1][0] == s:
            entries[-1][1] += c
        else:
            entries.append([s, c])
    prefix = [s for s, c in blocks for _ in range(c)]
    return prefix, tail, entries


@given(canonical())
def test_compress_is_canonical(case):
    prefix, tail, _ = case
    xi = compress(prefix, tail)
    assert xi.entries[-1] == (tail, INF)
    assert all(a[0] != b[0] for a, b in zip(xi.entries, xi.entries[1:]))
    assert xi.finite_length() <= len(prefix)


@given(canonical(), st.integers(0, 30))
def test_expand_inverts_compress(case, extra):
    prefix, tail, _ = case
    xi = compress(prefix, tail)
    horizon = len(prefix) + extra
    assert expand(xi, horizon) == prefix + [tail] * extra
    assert compress(expand(xi, xi.finite_length() + 1), tail) == xi


def test_compressed_sequence_invariants():
    with pytest.raises(ValueError):
        CompressedSequence.of(("p", 2))
    with pytest.raises(ValueError):
        CompressedSequence.of(("p", 1), ("p", INF))
    with pytest.raises(ValueError):
        CompressedSequence.of(("p", 0), ("q", INF))
    assert str(CompressedSequence.of((None, INF))) == "#none^∞"


def test_oracle_on_left_end_follows_the_trace():
    a = random_quasi_acyclic_da(7, 5, "ab")
    q = a.init["a"]
    trace = [q]
    while a.delta(None, trace[-1]) != trace[-1]:
        trace.append(a.delta(None, trace[-1]))
    expected = CompressedSequence(tuple((s, 1) for s in trace[:-1]) + ((trace[-1], INF),))
    assert history_transition_oracle(a, CompressedSequence.of((None, INF)), q) == expected


def test_oracle_needs_quasi_acyclic(running_da):
    with pytest.raises(PreconditionError):
        history_transition_oracle(running_da, CompressedSequence.of((None, INF)), "-a")


def random_input(rng: random.Random, a, blocks: int, max_count: int) -> CompressedSequence:
    pool = [None, *a.states]
    entries = []
    for _ in range(blocks):
        s = rng.choice([x for x in pool if not entries or x != entries[-1][0]])
        entries.append((s, rng.randint(1, max_count)))
    last = rng.choice([x for x in pool if not entries or x != entries[-1][0]])
    return CompressedSequence(tuple(entries) + ((last, INF),))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 5), st.integers(0, 3))
def test_oracle_matches_naive_unrolling(seed, n, blocks):
    rng = random.Random(seed)
    a = random_quasi_acyclic_da(seed, n, "ab")
    xi = random_input(rng, a, blocks, 4)
    q = rng.choice(a.states)
    out = history_transition_oracle(a, xi, q)
    assert expand(out, 50) == naive_history(a, expand(xi, 49), q)


def node_histories(a, word):
    """Compressed history of every node on ``word`` (the run is stable by the end)."""
    run = da_run(a, word, len(a.states) * len(word) + 1)
    assert run.stabilized
    cols = list(zip(*run.configurations))
    return [compress(col[:-1], col[-1]) for col in cols]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 5), st.text("ab", min_size=1, max_size=5))
def test_symbolic_transition_instantiates_to_oracle(seed, n, word):
    a = random_quasi_acyclic_da(seed, n, "ab")
    z = max_trace_length(a)
    histories = node_histories(a, word)
    inputs = [CompressedSequence.of((None, INF))] + histories[:-1]
    for xi, sigma, actual in zip(inputs, word, histories):
        assert history_transition_oracle(a, xi, a.init[sigma]) == actual
        values = [min(c, z) for c in xi.counts[:-1]]
        skeleton = symbolic_history_transition(a, xi.states, a.init[sigma], values)
        assert skeleton_violations(skeleton, z) == []
        assert skeleton.instantiate(list(xi.counts[:-1])) == history_transition_oracle(a, xi, a.init[sigma])
        assert verify_lemma_structure(a, xi, a.init[sigma])


def test_history_of_node_follows_from_predecessor():
    a = one_loop_da()
    histories = node_histories(a, "abba")
    for prev, cur, sigma in zip(histories, histories[1:], "bba"):
        assert history_transition_oracle(a, prev, a.init[sigma]) == cur


def test_symbolic_count_rendering_and_evaluation():
    c = SymbolicCount("linear", 0, 1, -2)
    assert c.evaluate([3, 4]) == 5
    assert str(c) == "m0+m1-2"
    with pytest.raises(ValueError):
        SymbolicCount("sometimes")
