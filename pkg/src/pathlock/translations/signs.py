"""Sumless machines that only ever store nonnegative values.

Counters keep absolute values; the sign of each counter lives in the
finite state.  States are pairs ``(q, signs)`` reachable from
``(q0, all +)``.
"""

from __future__ import annotations

import itertools

from ..counter import CounterMachine, Expr, Rule, Update, is_sumless
from ..errors import PreconditionError
from .certificate import Namer, TranslationCertificate, certify


def sign_update(update: Update, counters, signs, stored) -> tuple[tuple[int, ...], Update]:
    """New signs and the absolute-value update for one transition.

    ``stored`` are the truncated absolute values the guard saw (``r`` stands
    for "at least r").
    """
    position = {x: i for i, x in enumerate(counters)}
    new_signs, exprs = [], {}
    for x in counters:
        e = update[x]
        c = e.const
        if not e.vars:
            beta, out = (1, Expr((), c)) if c >= 0 else (-1, Expr((), -c))
        else:
            (y,) = e.vars
            a, v = signs[position[y]], stored[position[y]]
            if v + a * c >= 0:
                beta, out = a, Expr((y,), a * c)
            else:
                beta, out = -a, Expr((), abs(c) - v)
        new_signs.append(beta)
        exprs[x] = out
    return tuple(new_signs), Update.of(exprs)


def make_nonnegative(machine: CounterMachine) -> tuple[CounterMachine, TranslationCertificate]:
    if not is_sumless(machine):
        raise PreconditionError("make_nonnegative needs a sumless machine")
    xs, r = machine.counters, machine.access
    namer = Namer(lambda key: key[0] + "|" + "".join("+" if a > 0 else "-" for a in key[1]))
    start = (machine.initial, (1,) * len(xs))
    seen = {start}
    order = [start]
    readings = list(itertools.product(*[list(range(r)) + [None]] * len(xs)))
    rules = []
    for q, signs in order:
        for sigma in machine.alphabet:
            for reading in readings:
                stored = tuple(r if v is None else v for v in reading)
                target, update = machine.resolve(q, tuple(a * v for a, v in zip(signs, stored)), sigma)
                new_signs, new_update = sign_update(update, xs, signs, stored)
                nxt = (target, new_signs)
                if nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
                rules.append((q, signs, reading, sigma, nxt, new_update))
    result = CounterMachine(
        machine.alphabet, tuple(namer(s) for s in order), xs, namer(start), r,
        frozenset(namer(s) for s in order if s[0] in machine.accepting),
        tuple(Rule(namer((q, a)), g, s, namer(t), u) for q, a, g, s, t, u in rules),
        name=machine.name, provenance=machine.provenance + ("nonnegative",))
    cert = certify("nonnegative", machine, result,
                   [("counters", "==", len(xs)), ("access", "==", r), ("sumless", "==", True)])
    return result, cert
