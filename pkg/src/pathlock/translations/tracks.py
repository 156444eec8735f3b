"""Sumless 1-access machines as quasi-acyclic distributed automata.

Node ``i`` simulates the machine after reading the first ``i`` letters.
Its state has one track per counter and a transition track.  A counter
track reads ``⊤^(2i) 1^v 0 ⊥ ♯^ω`` over time, which is the counter value
``v`` in unary after a delay that grows by two per position.  The
transition track holds the node's letter until the predecessor's counters
become readable, then holds the machine state and update that the
simulated step produced.  Each round a node copies its predecessor's
counter one symbol late, which is enough to add a constant in ``[-1, 1]``.
"""

from __future__ import annotations

from collections import defaultdict

from ..counter import CounterMachine, Expr, Rule, Update, is_sumless
from ..distributed import DistributedAutomaton
from ..errors import PreconditionError
from .certificate import Namer, TranslationCertificate, certify, check_cap, state_cap
from .signs import make_nonnegative

TOP, ONE, ZERO, BOT, SHARP = "⊤", "1", "0", "⊥", "♯"


def with_fresh_initial(machine: CounterMachine) -> CounterMachine:
    """Add a primed initial state whose first-step updates are constants.

    Counters are zero before the first step, so ``y + c`` folds to ``c``.
    """
    prime = machine.initial + "'"
    while prime in machine.states:
        prime += "'"
    zero = (0,) * len(machine.counters)
    rules = list(machine.rules)
    for sigma in machine.alphabet:
        target, update = machine.resolve(machine.initial, zero, sigma)
        folded = Update.of({x: Expr((), e.const) for x, e in update.items()})
        rules.append(Rule(prime, (None,) * len(machine.counters), sigma, target, folded))
    accepting = set(machine.accepting)
    if machine.initial in accepting:
        accepting.add(prime)
    return CounterMachine(machine.alphabet, (prime, *machine.states), machine.counters, prime,
                          machine.access, frozenset(accepting), tuple(rules), machine.default,
                          machine.name, machine.provenance)


class TrackRule:
    """The transition function on structured states ``(tracks, transition)``.

    ``transition`` is ``("sym", σ)`` while delaying and ``("res", q, update)``
    once the simulated step is known.
    """

    def __init__(self, machine: CounterMachine):
        self.machine = machine
        self.k = len(machine.counters)
        self.position = {x: i for i, x in enumerate(machine.counters)}
        self.delay = (TOP,) * self.k

    def initial(self, sigma: str) -> tuple:
        return (self.delay, ("sym", sigma))

    def __call__(self, pred, state) -> tuple:
        tracks, trans = state
        if trans[0] == "sym":
            return self._delayed(pred, state)
        if self.k == 0:
            return state
        return (tuple(self._track(pred, j, t, trans[2]) for j, t in enumerate(tracks)), trans)

    def _delayed(self, pred, state) -> tuple:
        sigma = state[1][1]
        m = self.machine
        if pred is None:
            target, update = m.resolve(m.initial, (0,) * self.k, sigma)
            return (self.delay, ("res", target, update))
        ptracks, ptrans = pred
        if ptrans[0] == "res" and all(t in (ONE, ZERO) for t in ptracks) and self.k:
            guard = tuple(1 if t == ONE else 0 for t in ptracks)
            target, update = m.resolve(ptrans[1], guard, sigma)
            return (self.delay, ("res", target, update))
        if ptrans[0] == "res" and self.k == 0 and ptracks == ():
            target, update = m.resolve(ptrans[1], (), sigma)
            return (self.delay, ("res", target, update))
        return state

    def _track(self, pred, j: int, mine: str, update: Update) -> str:
        if mine == ZERO:
            return BOT
        if mine in (BOT, SHARP):
            return SHARP
        e = update[self.machine.counters[j]]
        if not e.vars:
            return ONE if e.const == 1 and mine == TOP else ZERO
        seen = None
        if pred is not None and pred[1][0] == "res":
            seen = pred[0][self.position[e.vars[0]]]
        c = e.const
        if seen == ONE or (seen == ZERO and c >= 0) or (seen == BOT and c == 1):
            return ONE
        return ZERO


def _render_state(key) -> str:
    tracks, trans = key
    head = "".join(tracks)
    if trans[0] == "sym":
        return f"{head}|{trans[1]}"
    return f"{head}|{trans[1]}/{trans[2]}"


def sumless_to_da(machine: CounterMachine) -> tuple[DistributedAutomaton, TranslationCertificate]:
    """Quasi-acyclic automaton equivalent to a sumless machine with 1-access.

    Only the (predecessor, self) pairs that can co-occur are tabulated; they
    are found by closing ``{(none, ι σ)} ∪ {(ι σ, ι σ')}`` under
    ``(p', p), (p, q) ↦ (δ(p', p), δ(p, q))``.  Every state also gets a
    ``(*, self)`` row so the table is total.
    """
    if not is_sumless(machine):
        raise PreconditionError("sumless_to_da needs a sumless machine")
    if machine.access != 1:
        raise PreconditionError("sumless_to_da needs 1-access; run reduce_access first")
    nonneg, _ = make_nonnegative(machine)
    prepared = with_fresh_initial(nonneg)
    track_rule = TrackRule(prepared)
    memo: dict = {}

    def rule(pred, state):
        key = (pred, state)
        hit = memo.get(key)
        if hit is None:
            hit = memo[key] = track_rule(pred, state)
        return hit

    rule.initial = track_rule.initial
    cap = state_cap()

    states: dict = {}

    def note(s) -> None:
        if s not in states:
            states[s] = len(states)
            check_cap(len(states), cap, "sumless_to_da", pairs=len(pairs))

    pairs: set = set()
    by_left: dict = defaultdict(set)
    by_right: dict = defaultdict(set)
    todo: list = []

    def add(pair) -> None:
        if pair not in pairs:
            pairs.add(pair)
            todo.append(pair)
            if pair[0] is not None:
                note(pair[0])
                by_left[pair[0]].add(pair[1])
            note(pair[1])
            by_right[pair[1]].add(pair[0])

    inits = [rule.initial(s) for s in machine.alphabet]
    for a in inits:
        add((None, a))
        for b in inits:
            add((a, b))
    while todo:
        left, right = todo.pop()
        moved = rule(left, right)
        if left is None:
            add((None, moved))
        else:
            for before in list(by_right[left]):
                add((rule(before, left), moved))
        for after in list(by_left[right]):
            add((moved, rule(right, after)))

    # wildcard rows: delaying states wait, others advance as if their predecessor were absent
    rows = {}
    pending = list(states)
    while pending:
        s = pending.pop()
        if s in rows:
            continue
        rows[s] = s if s[1][0] == "sym" else rule(None, s)
        if rows[s] not in states:
            note(rows[s])
            pending.append(rows[s])

    # discovery order depends on set iteration, so fix the declaration order by name
    ordered = sorted(states, key=lambda s: (_render_state(s), repr(s)))
    namer = Namer(_render_state)
    for s in ordered:
        namer(s)
    table = {}
    for p, q in pairs:
        t = rule(p, q)
        if t != rows[q]:
            table[(None if p is None else namer(p), namer(q))] = namer(t)
    names = tuple(namer(s) for s in ordered)
    accepting = frozenset(namer(s) for s in ordered
                          if s[1][0] == "res" and s[1][1] in prepared.accepting)
    automaton = DistributedAutomaton(
        machine.alphabet, names, {s: namer(rule.initial(s)) for s in machine.alphabet}, accepting,
        table, {namer(q): namer(t) for q, t in rows.items()},
        name=machine.name, provenance=machine.provenance + ("cm-to-da",))
    k = len(machine.counters)
    cert = certify("cm-to-da", machine, automaton,
                   [("quasi_acyclic", "==", True), ("max_loops_per_trace", "<=", k + 2)],
                   pairs=len(pairs))
    return automaton, cert
