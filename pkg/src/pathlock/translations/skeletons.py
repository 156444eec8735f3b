"""Quasi-acyclic distributed automata as copyless counter machines.

After reading a prefix, the machine's state is the compressed history of
the last node with its counts abstracted: non-looping states occur once,
the final state forever, and looping states in between either once or a
number of times stored in a counter.  Reading a letter runs the symbolic
history transition; every new repetition count is a sum of old counts
from one contiguous block plus a small constant, and blocks are disjoint,
so the counter update is copyless.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from ..counter import CounterMachine, Expr, Rule, Update
from ..distributed import DistributedAutomaton, build_state_diagram, trace_metrics
from ..errors import PreconditionError
from ..history import INF, OMEGA, SymbolicSkeleton, run_block, symbolic_history_transition
from .certificate import Namer, TranslationCertificate, certify, check_cap, state_cap

ONCE = "1"
FOREVER = "∞"


def counter_names(count: int) -> tuple[str, ...]:
    return tuple(f"x{j}" for j in range(1, count + 1))


def _renderer(automaton: DistributedAutomaton):
    """Names like ``"-:∞"`` or ``"3:x1 7:∞"``, pointing at automaton states by declaration index.

    Indices keep names short: the automaton's own state names can be long.
    """
    index = {q: str(i) for i, q in enumerate(automaton.states)}

    def render(skeleton) -> str:
        return " ".join(f"{'-' if s is None else index[s]}:{slot}" for s, slot in skeleton)

    return render


def slot_thresholds(automaton: DistributedAutomaton, states: Sequence, slots: Sequence[str], q: str,
                    z: int, cache: dict) -> dict[int, int]:
    """For each counter slot, the smallest count from which larger counts behave the same.

    Explores every way the earlier blocks can end, so one threshold serves
    all guard combinations.
    """
    thresholds: dict[int, int] = {}
    stack = [(0, q)]
    visited = set()
    last = len(states) - 1
    while stack:
        i, cur = stack.pop()
        if i == last or (i, cur) in visited:
            continue
        visited.add((i, cur))
        p = states[i]
        full = cache.get((p, cur))
        if full is None:
            full = cache[(p, cur)] = run_block(automaton, p, cur, INF, limit=z)
        if slots[i] == ONCE:
            stack.append((i + 1, full[0]))
        else:
            thresholds[i] = max(thresholds.get(i, 1), len(full))
            stack.extend((i + 1, e) for e in full)
    return thresholds


def bind_counters(skeleton: SymbolicSkeleton, slots: Sequence[str], counters: Sequence[str],
                  looping, values: Sequence[int]) -> tuple[tuple, Update]:
    """Abstract a symbolic skeleton into a machine state and the copyless update producing it."""
    exprs = {c: Expr((), 0) for c in counters}
    fresh = iter(counters)
    shape = []
    for state, count in skeleton.entries:
        if count is OMEGA:
            shape.append((state, FOREVER))
        elif count.kind == "linear" and state in looping:
            try:
                name = next(fresh)
            except StopIteration:
                raise AssertionError("more repeated states than counters") from None
            used = [slots[i] for i in count.indices]
            exprs[name] = Expr(tuple(u for u in used if u != ONCE),
                               count.const + sum(1 for u in used if u == ONCE))
            shape.append((state, name))
        else:
            if count.evaluate(values) != 1:
                raise AssertionError(f"non-looping state {state!r} repeats")
            shape.append((state, ONCE))
    return tuple(shape), Update.of(exprs)


def da_to_copyless(automaton: DistributedAutomaton) -> tuple[CounterMachine, TranslationCertificate]:
    metrics = trace_metrics(automaton)
    if not metrics.quasi_acyclic:
        raise PreconditionError("da_to_copyless needs a quasi-acyclic automaton")
    z = metrics.max_trace_length
    counters = counter_names(metrics.max_loops_per_trace - 1)
    position = {c: i for i, c in enumerate(counters)}
    looping = build_state_diagram(automaton).looping
    cap = state_cap()
    namer = Namer(_renderer(automaton))
    cache: dict = {}
    start = ((None, FOREVER),)
    seen = {start}
    order = [start]
    rules = []
    for shape in order:
        states = [s for s, _ in shape]
        slots = [slot for _, slot in shape]
        counted = [i for i, slot in enumerate(slots[:-1]) if slot != ONCE]
        for sigma in automaton.alphabet:
            q = automaton.init[sigma]
            thresholds = slot_thresholds(automaton, states, slots, q, z, cache)
            choices = [list(range(1, thresholds.get(i, 1))) + [None] for i in counted]
            for combo in itertools.product(*choices):
                values = [1] * (len(shape) - 1)
                guard = [None] * len(counters)
                for i, v in zip(counted, combo):
                    values[i] = z if v is None else v
                    guard[position[slots[i]]] = v
                skeleton = symbolic_history_transition(automaton, states, q, values, z, cache)
                nxt, update = bind_counters(skeleton, slots, counters, looping, values)
                if nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
                    check_cap(len(order), cap, "da_to_copyless", rules=len(rules))
                rules.append((shape, tuple(guard), sigma, nxt, update))
    accepting = automaton.accepting
    result = CounterMachine(
        automaton.alphabet, tuple(namer(s) for s in order), counters, namer(start), z,
        frozenset(namer(s) for s in order if any(st in accepting for st, _ in s)),
        tuple(Rule(namer(s), g, sigma, namer(t), u) for s, g, sigma, t, u in rules),
        name=automaton.name, provenance=automaton.provenance + ("da-to-cm",))
    cert = certify("da-to-cm", automaton, result,
                   [("copyless", "==", True), ("counters", "==", len(counters)), ("access", "<=", z)],
                   max_trace_length=z, max_loops_per_trace=metrics.max_loops_per_trace)
    return result, cert
