"""Equivalence checking, language oracles, random devices and space–time diagrams."""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .counter import CounterMachine, Expr, Rule, Update, machine_accepts, machine_run
from .distributed import DistributedAutomaton, Verdict, da_accepts, da_run
from .errors import PathlockError
from .words import Alphabet, Word, enumerate_words, format_word


def accepts(device, word: Sequence[str]) -> bool:
    if isinstance(device, CounterMachine):
        return machine_accepts(device, word)
    if isinstance(device, DistributedAutomaton):
        return da_accepts(device, word) is Verdict.ACCEPT
    raise TypeError(f"not a device: {type(device).__name__}")


class EvaluationError(PathlockError):
    """A device failed on a particular word."""

    def __init__(self, word: Word, cause: Exception):
        super().__init__(f"evaluation failed on {format_word(word)!r}: {cause}")
        self.word = word
        self.cause = cause


@dataclass(frozen=True)
class EquivalenceVerdict:
    equivalent: bool
    words_checked: int
    max_len: int
    counterexample: Word | None = None
    accepts_a: bool | None = None
    accepts_b: bool | None = None

    def __str__(self) -> str:
        if self.equivalent:
            return f"Equivalent ({self.words_checked} words up to length {self.max_len})"
        return (f"Counterexample {format_word(self.counterexample)!r}: "
                f"a {'accepts' if self.accepts_a else 'rejects'}, "
                f"b {'accepts' if self.accepts_b else 'rejects'}")


def _disagreement(a, b, word: Word) -> tuple[bool, bool] | None:
    try:
        x, y = accepts(a, word), accepts(b, word)
    except PathlockError as exc:
        raise EvaluationError(word, exc) from exc
    return None if x == y else (x, y)


def check_equivalence(a, b, alphabet: Alphabet | Sequence[str], max_len: int = 6,
                      workers: int = 1) -> EquivalenceVerdict:
    """Compare acceptance on every word up to ``max_len``; report the shortest, lexicographically least disagreement."""
    words = enumerate_words(alphabet, max_len)
    if workers <= 1:
        for n, w in enumerate(words, 1):
            diff = _disagreement(a, b, w)
            if diff is not None:
                return EquivalenceVerdict(False, n, max_len, w, *diff)
        return EquivalenceVerdict(True, n, max_len)
    words = list(words)
    chunk = max(1, len(words) // (workers * 8))
    batches = [words[i:i + chunk] for i in range(0, len(words), chunk)]

    def scan(batch: list[Word]):
        for w in batch:
            diff = _disagreement(a, b, w)
            if diff is not None:
                return w, diff
        return None

    with ThreadPoolExecutor(max_workers=workers) as pool:
        found = [hit for hit in pool.map(scan, batches) if hit is not None]
    if not found:
        return EquivalenceVerdict(True, len(words), max_len)
    index = {w: i for i, w in enumerate(words)}
    w, diff = min(found, key=lambda hit: index[hit[0]])
    return EquivalenceVerdict(False, index[w] + 1, max_len, w, *diff)


def language_oracle_L(word: Sequence[str]) -> bool:
    """Every prefix has at least as many a's as b's and at least as many b's as c's."""
    na = nb = nc = 0
    for s in word:
        na += s == "a"
        nb += s == "b"
        nc += s == "c"
        if not na >= nb >= nc:
            return False
    return True


def random_quasi_acyclic_da(seed: int, num_states: int, alphabet: Sequence[str]) -> DistributedAutomaton:
    """Random automaton whose transitions only move up a random linear order of the states."""
    if num_states < 1:
        raise ValueError("num_states must be positive")
    rng = random.Random(seed)
    names = [f"q{i}" for i in range(num_states)]
    order = names[:]
    rng.shuffle(order)
    table = {}
    for rank, q in enumerate(order):
        options = [q] + order[rank + 1:]
        for p in (None, *names):
            table[(p, q)] = rng.choice(options)
    alphabet = tuple(alphabet)
    init = {s: rng.choice(names) for s in alphabet}
    accepting = frozenset(q for q in names if rng.random() < 0.5)
    return DistributedAutomaton(Alphabet(alphabet), tuple(names), init, accepting, table,
                                name=f"random-da-{seed}")


def random_sumless_cm(seed: int, num_states: int, num_counters: int, access: int,
                      alphabet: Sequence[str]) -> CounterMachine:
    """Random total sumless machine.

    Each (state, symbol) pair tests a random subset of at most two counters
    exhaustively over ``[-r, r]`` and leaves the rest as wildcards, so the
    table is total and unambiguous.
    """
    if min(num_states, num_counters, access) < 1:
        raise ValueError("parameters must be positive")
    rng = random.Random(seed)
    states = tuple(f"q{i}" for i in range(num_states))
    counters = tuple("xyzuvw"[i] if i < 6 else f"c{i}" for i in range(num_counters))
    alphabet = tuple(alphabet)

    def random_update() -> Update:
        exprs = {}
        for x in counters:
            c = rng.randint(-access, access)
            exprs[x] = Expr((), c) if rng.random() < 0.25 else Expr((rng.choice(counters),), c)
        return Update.of(exprs)

    rules = []
    for q in states:
        for s in alphabet:
            tested = rng.sample(range(num_counters), rng.randint(0, min(2, num_counters)))
            for values in itertools.product(range(-access, access + 1), repeat=len(tested)):
                guard = [None] * num_counters
                for j, v in zip(tested, values):
                    guard[j] = v
                rules.append(Rule(q, tuple(guard), s, rng.choice(states), random_update()))
    accepting = frozenset(q for q in states if rng.random() < 0.5)
    return CounterMachine(Alphabet(alphabet), states, counters, states[0], access, accepting,
                          tuple(rules), name=f"random-cm-{seed}")


def space_time_diagram(device, word: Sequence[str], rounds: int | None = None) -> str:
    """Text rendering of a run: rows are rounds (automata) or steps (machines)."""
    if isinstance(device, DistributedAutomaton):
        limit = rounds if rounds is not None else len(device.states) * len(word) + 1
        run = da_run(device, word, limit)
        configs = run.configurations
        width = max(len(s) for c in configs for s in c)
        width = max(width, max(len(s) for s in word))
        lines = ["t  | " + " ".join(s.ljust(width) for s in word).rstrip()]
        lines.append("-" * len(lines[0]))
        for t, c in enumerate(configs):
            lines.append(f"{t:<2} | " + " ".join(s.ljust(width) for s in c).rstrip())
        if run.stabilized:
            lines.append(f"stable from round {len(configs) - 1}")
        elif run.cycle is not None:
            lines.append(f"cycle: start {run.cycle[0]}, period {run.cycle[1]}")
        return "\n".join(lines)
    if isinstance(device, CounterMachine):
        run = machine_run(device, word)
        if rounds is not None:
            configs = run.configurations[:rounds + 1]
        else:
            configs = run.configurations
        head = ["t", "read", "state", *device.counters]
        rows = []
        for t, c in enumerate(configs):
            rows.append([str(t), "" if t == 0 else word[t - 1], c.state, *map(str, c.values)])
        widths = [max(len(r[i]) for r in rows + [head]) for i in range(len(head))]
        fmt = lambda r: "  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip()  # noqa: E731
        return "\n".join([fmt(head)] + [fmt(r) for r in rows])
    raise TypeError(f"not a device: {type(device).__name__}")
