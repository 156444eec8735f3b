"""Copyless to sumless: one counter per subset of the original counters."""

from __future__ import annotations

import itertools

from ..counter import CounterMachine, Expr, Rule, Update, is_copyless
from ..errors import PreconditionError
from ..words import cutoff
from .certificate import TranslationCertificate, certify


def subset_name(names) -> str:
    return "{" + ",".join(names) + "}"


def copyless_to_sumless(machine: CounterMachine) -> tuple[CounterMachine, TranslationCertificate]:
    """Counter ``Y`` holds the sum of the original counters in ``Y``.

    In a copyless update the variable sets of different expressions are
    disjoint, so the new value of ``Y`` is a single subset counter (the union
    of the variable sets) plus the summed constants.  Guards read the
    singleton counters; the empty-set counter is always zero.
    """
    if not is_copyless(machine):
        raise PreconditionError("copyless_to_sumless needs a copyless machine")
    xs = machine.counters
    k, r = len(xs), machine.access
    big = k * r if k else r
    subsets = [c for size in range(k + 1) for c in itertools.combinations(range(k), size)]
    names = {s: subset_name(xs[i] for i in s) for s in subsets}
    if len(set(names.values())) != len(names):
        raise PreconditionError("counter names collide when rendered as subsets")
    position = {x: i for i, x in enumerate(xs)}
    singleton = [subsets.index((i,)) for i in range(k)]

    def translate(update: Update) -> Update:
        parts = [(frozenset(position[v] for v in update[x].vars), update[x].const) for x in xs]
        out = {}
        for s in subsets:
            union = frozenset().union(*(parts[i][0] for i in s))
            out[names[s]] = Expr((names[tuple(sorted(union))],), sum(parts[i][1] for i in s))
        return Update.of(out)

    # exact singleton readings below r are kept apart; a wildcard means ">= r"
    per_counter = [list(range(-big, r)) + [None] for _ in range(k)]
    translated: dict[Update, Update] = {}
    rules = []
    for q in machine.states:
        for sigma in machine.alphabet:
            for reading in itertools.product(*per_counter):
                original = tuple(r if v is None else cutoff(-r, r, v) for v in reading)
                target, update = machine.resolve(q, original, sigma)
                if update not in translated:
                    translated[update] = translate(update)
                guard = [None] * len(subsets)
                for i, v in enumerate(reading):
                    guard[singleton[i]] = v
                rules.append(Rule(q, tuple(guard), sigma, target, translated[update]))
    result = CounterMachine(machine.alphabet, machine.states, tuple(names[s] for s in subsets),
                            machine.initial, big, machine.accepting, tuple(rules),
                            name=machine.name, provenance=machine.provenance + ("copyless-to-sumless",))
    cert = certify("copyless-to-sumless", machine, result,
                   [("counters", "==", 2 ** k), ("access", "==", big), ("sumless", "==", True),
                    ("states", "==", len(machine.states))])
    return result, cert
