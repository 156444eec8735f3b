"""Fixture devices: the running examples plus a few small hand-built toys."""

from __future__ import annotations

import itertools

from .counter import CounterMachine
from .distributed import DistributedAutomaton, make_automaton

TOP = "⊤"
BOT = "⊥"
BLANK = "-"


def example_cm() -> CounterMachine:
    """Two-counter machine for prefix-closed a >= b >= c counting.

    ``x`` holds (#a - #b) and ``y`` holds (#b - #c); a ``b`` needs ``x > 0``
    and a ``c`` needs ``y > 0``, otherwise the machine falls into the sink ``r``.
    """
    return CounterMachine.build(
        alphabet=("a", "b", "c"),
        states=("s", "r"),
        counters=("x", "y"),
        initial="s",
        access=1,
        accepting=("s",),
        transitions=[
            ("s", {}, "a", "s", {"x": "x+1", "y": "y"}),
            ("s", {"x": 1}, "b", "s", {"x": "x-1", "y": "y+1"}),
            ("s", {"y": 1}, "c", "s", {"x": "x", "y": "y-1"}),
        ],
        default=("r", {}),
        name="running-cm",
    )


def example_da() -> DistributedAutomaton:
    """Automaton over pairs (expected, pending) that forwards unmatched letters rightwards.

    ``⊤`` spreads from the left once every node has been matched; a node
    still waiting for a letter when ``⊤`` arrives turns into the absorbing ``⊥``.
    """
    letters = (BLANK, "a", "b")
    pairs = [x + y for x, y in itertools.product(letters, repeat=2)]
    transitions = []
    for pred, state in itertools.product(pairs, repeat=2):
        (_, y_pred), (x, _) = pred, state
        transitions.append((pred, state, BLANK * 2 if y_pred == x else x + y_pred))
    for state in pairs:
        verdict = TOP if state[0] == BLANK else BOT
        transitions.append((TOP, state, verdict))
        transitions.append((None, state, verdict))
    transitions += [
        (BOT, "*", BOT),
        (TOP, TOP, TOP),
        (None, TOP, TOP),
        (TOP, BOT, BOT),
        (None, BOT, BOT),
    ]
    return make_automaton(
        alphabet=("a", "b", "c"),
        states=(*pairs, TOP, BOT),
        init={"a": BLANK + "a", "b": "ab", "c": "b" + BLANK},
        accepting=(TOP,),
        transitions=transitions,
        default=BOT,
        name="running-da",
    )


def one_loop_da() -> DistributedAutomaton:
    """Accepts words whose last two letters are equal; every trace has one looping state."""
    transitions = []
    for pred in (None, "a", "b", "eq", "ne"):
        for state in ("a", "b"):
            transitions.append((pred, state, "eq" if pred == state else "ne"))
    transitions += [("*", "eq", "eq"), ("*", "ne", "ne")]
    return make_automaton(
        alphabet=("a", "b"),
        states=("a", "b", "eq", "ne"),
        init={"a": "a", "b": "b"},
        accepting=("eq",),
        transitions=transitions,
        name="double-ending-da",
    )


def one_counter_cm() -> CounterMachine:
    """Every prefix has at least as many a's as b's."""
    return CounterMachine.build(
        alphabet=("a", "b"),
        states=("ok", "dead"),
        counters=("x",),
        initial="ok",
        access=1,
        accepting=("ok",),
        transitions=[
            ("ok", {}, "a", "ok", {"x": "x+1"}),
            ("ok", {"x": 1}, "b", "ok", {"x": "x-1"}),
        ],
        default=("dead", {}),
        name="balanced-prefix-cm",
    )


def copyless_sum_cm() -> CounterMachine:
    """Copyless but not sumless: ``c`` folds the two block counters into ``x``.

    ``a`` increments ``y``, ``b`` decrements ``z``, and ``c`` sets
    ``x := y+z+1`` while resetting both.  The machine is in ``hi`` exactly
    when ``x`` was positive before the last letter.
    """
    transitions = []
    for state in ("lo", "hi"):
        for symbol, update in (("a", {"y": "y+1"}), ("b", {"z": "z-1"}),
                               ("c", {"x": "y+z+1", "y": "0", "z": "0"})):
            transitions.append((state, {"x": 1}, symbol, "hi", update))
            transitions.append((state, {}, symbol, "lo", update))
    return CounterMachine.build(
        alphabet=("a", "b", "c"),
        states=("lo", "hi"),
        counters=("x", "y", "z"),
        initial="lo",
        access=1,
        accepting=("hi",),
        transitions=transitions,
        name="copyless-sum-cm",
    )


def access3_cm() -> CounterMachine:
    """Sumless two-counter machine with 3-access guards and constants up to 3."""
    transitions = []
    for state in ("mid", "hi", "lo"):
        for symbol, update in (("a", {"x": "x+1", "y": "y-1"}), ("b", {"x": "x-3", "y": "x+2"})):
            transitions.append((state, {"x": 3}, symbol, "hi", update))
            transitions.append((state, {"x": -3}, symbol, "lo", update))
            transitions.append((state, {"x": 2}, symbol, "hi", update))
            transitions.append((state, {}, symbol, "mid", update))
        transitions.append((state, {"y": 2}, "c", "hi", {"x": "3"}))
        transitions.append((state, {"y": -1}, "c", "lo", {"y": "y+3"}))
        transitions.append((state, {}, "c", "mid", {"x": "0"}))
    return CounterMachine.build(
        alphabet=("a", "b", "c"),
        states=("mid", "hi", "lo"),
        counters=("x", "y"),
        initial="mid",
        access=3,
        accepting=("hi",),
        transitions=transitions,
        name="access3-cm",
    )


def toy_devices() -> dict[str, CounterMachine | DistributedAutomaton]:
    return {
        "one-loop-da": one_loop_da(),
        "one-counter-cm": one_counter_cm(),
        "copyless-sum-cm": copyless_sum_cm(),
        "access3-cm": access3_cm(),
    }


def corpus_devices() -> dict[str, CounterMachine | DistributedAutomaton]:
    """Every fixture keyed by its file stem in ``corpus/``."""
    return {"running-cm": example_cm(), "running-da": example_da(), **toy_devices()}
