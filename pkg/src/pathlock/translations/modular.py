"""Access reduction: spreading each counter over ``r`` near-equal components.

``mod_encode(n, r)`` splits ``n`` into ``r`` components that differ by at
most one, larger ones first, and records ``n mod r``.  Adding encodings
(``mod_add``) rotates the right operand by the left remainder, which also
works when the components are counter expressions.  With that, every
update of an r-access machine becomes an update with constants in
``[-1, 1]`` and the guard can be rebuilt from two components per counter.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping

from ..counter import CounterMachine, Expr, Rule, Update, is_copyless, is_sumless
from ..errors import MalformedExpression, PreconditionError
from .certificate import Namer, TranslationCertificate, certify


@dataclass(frozen=True)
class ModularEncoding:
    components: tuple
    remainder: int

    @property
    def r(self) -> int:
        return len(self.components)

    def value(self):
        return sum(self.components[1:], self.components[0])


def mod_encode(n: int, r: int) -> ModularEncoding:
    if r < 1:
        raise ValueError("r must be positive")
    rem = n % r
    low = n // r
    return ModularEncoding(tuple(low + 1 if i < rem else low for i in range(r)), rem)


def mod_add(a: ModularEncoding, b: ModularEncoding) -> ModularEncoding:
    """``n_i = a_i + b_{(i - rem_a) mod r}``, remainders add modulo ``r``."""
    r = a.r
    if b.r != r:
        raise ValueError(f"cannot add encodings of width {r} and {b.r}")
    comps = tuple(a.components[i] + b.components[(i - a.remainder) % r] for i in range(r))
    return ModularEncoding(comps, (a.remainder + b.remainder) % r)


def component_name(counter: str, i: int) -> str:
    return f"{counter}_{i}"


def translate_expression_mod(remainders: Mapping[str, int], expr: Expr, r: int,
                             name: Callable[[str, int], str] = component_name) -> ModularEncoding:
    """Encoding of ``expr`` whose components are expressions over the component counters."""
    enc = mod_encode(expr.const, r)
    enc = ModularEncoding(tuple(Expr((), c) for c in enc.components), enc.remainder)
    for v in reversed(expr.vars):
        if v not in remainders:
            raise MalformedExpression(f"no remainder known for counter {v!r}")
        var = ModularEncoding(tuple(Expr((name(v, i),), 0) for i in range(r)), remainders[v])
        enc = mod_add(var, enc)
    return enc


def reconstruct_guard(top: int, bottom: int, remainder: int, r: int) -> int:
    """Truncated original value from the cut last and first components."""
    if top >= 1:
        return r
    if top == 0:
        return remainder
    if top == -1 and bottom == 0:
        return remainder - r
    return -r


def _trunc_div(n: int, r: int) -> int:
    return -((-n) // r) if n < 0 else n // r


def reduce_access(machine: CounterMachine, path: str = "auto") -> tuple[CounterMachine, TranslationCertificate]:
    """Equivalent machine with 1-access.

    ``path`` is ``"general"`` (r components per counter, remainders in the
    state), ``"sumless"`` (one counter per counter storing the quotient
    truncated toward zero, signed remainders in the state; needs a sumless
    machine) or ``"auto"`` (sumless when possible).
    """
    sumless = is_sumless(machine)
    if path == "auto":
        path = "sumless" if sumless else "general"
    if path == "sumless":
        if not sumless:
            raise PreconditionError("the sumless path needs a sumless machine")
        result = _reduce_sumless(machine)
        counters = len(machine.counters)
    elif path == "general":
        result = _reduce_general(machine)
        counters = len(machine.counters) * machine.access
    else:
        raise ValueError(f"unknown path {path!r}")
    claims = [("access", "==", 1), ("counters", "==", counters)]
    if sumless:
        claims.append(("sumless", "==", True))
    if is_copyless(machine):
        claims.append(("copyless", "==", True))
    return result, certify("reduce-access", machine, result, claims, path=path)


def _state_namer(machine: CounterMachine) -> Namer:
    return Namer(lambda key: key[0] + "|" + ",".join(map(str, key[1])))


def _reduce_general(machine: CounterMachine) -> CounterMachine:
    xs, r = machine.counters, machine.access
    namer = _state_namer(machine)
    new_counters = [component_name(x, i) for x in xs for i in range(r)]
    if len(set(new_counters)) != len(new_counters):
        raise ValueError("component counter names collide")
    pos = {c: i for i, c in enumerate(new_counters)}
    # per counter: (last component, first component) patterns, None = wildcard
    if r == 1:
        patterns = [((None, None), "hi"), ((0, 0), "mid"), ((-1, -1), "lo")]
    else:
        patterns = [((None, None), "hi"), ((0, None), "mid"), ((-1, 0), "neg"), ((-1, None), "lo")]
    start = (machine.initial, (0,) * len(xs))
    seen, order, rules = {start}, [start], []
    for q, rems in order:
        remainders = dict(zip(xs, rems))
        for sigma in machine.alphabet:
            for combo in itertools.product(patterns, repeat=len(xs)):
                guard = [None] * len(new_counters)
                original = []
                for x, rem, ((top, bottom), _) in zip(xs, rems, combo):
                    guard[pos[component_name(x, r - 1)]] = top
                    if r > 1:
                        guard[pos[component_name(x, 0)]] = bottom
                    t = 1 if top is None else top
                    b = 1 if bottom is None else bottom
                    original.append(reconstruct_guard(t, b if r > 1 else t, rem, r))
                target, update = machine.resolve(q, tuple(original), sigma)
                exprs, new_rems = {}, []
                for x in xs:
                    enc = translate_expression_mod(remainders, update[x], r)
                    new_rems.append(enc.remainder)
                    for i, e in enumerate(enc.components):
                        exprs[component_name(x, i)] = e
                nxt = (target, tuple(new_rems))
                if nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
                rules.append(Rule(namer((q, rems)), tuple(guard), sigma, namer(nxt), Update.of(exprs)))
    return CounterMachine(machine.alphabet, tuple(namer(s) for s in order), tuple(new_counters),
                          namer(start), 1, frozenset(namer(s) for s in order if s[0] in machine.accepting),
                          tuple(rules), name=machine.name,
                          provenance=machine.provenance + ("reduce-access",))


def _reduce_sumless(machine: CounterMachine) -> CounterMachine:
    """Store ``trunc(v / r)`` with the signed remainder ``v - r*trunc(v / r)`` in the state."""
    xs, r = machine.counters, machine.access
    namer = _state_namer(machine)
    position = {x: i for i, x in enumerate(xs)}

    def readings(rho: int) -> list[tuple[int | None, str]]:
        # (guard on the quotient, class); a wildcard stands for the class consistent with rho
        if rho > 0:
            return [(0, "zero"), (None, "pos")]
        if rho < 0:
            return [(0, "zero"), (None, "neg")]
        return [(-1, "neg"), (0, "zero"), (None, "pos")]

    def original(cls: str, rho: int) -> int:
        return {"pos": r, "neg": -r, "zero": rho}[cls]

    start = (machine.initial, (0,) * len(xs))
    seen, order, rules = {start}, [start], []
    for q, rhos in order:
        for sigma in machine.alphabet:
            for combo in itertools.product(*(readings(rho) for rho in rhos)):
                guard = tuple(g for g, _ in combo)
                classes = [cls for _, cls in combo]
                target, update = machine.resolve(q, tuple(original(c, rho) for c, rho in zip(classes, rhos)), sigma)
                exprs, new_rhos = {}, []
                for x in xs:
                    e = update[x]
                    if not e.vars:
                        quotient = _trunc_div(e.const, r)
                        exprs[x] = Expr((), quotient)
                        new_rhos.append(e.const - r * quotient)
                        continue
                    (y,) = e.vars
                    j = position[y]
                    s = rhos[j] + e.const
                    if classes[j] == "zero":
                        shift = _trunc_div(s, r)
                    elif classes[j] == "pos":
                        shift = s // r
                    else:
                        shift = -((-s) // r)
                    exprs[x] = Expr((y,), shift)
                    new_rhos.append(s - r * shift)
                nxt = (target, tuple(new_rhos))
                if nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
                rules.append(Rule(namer((q, rhos)), guard, sigma, namer(nxt), Update.of(exprs)))
    return CounterMachine(machine.alphabet, tuple(namer(s) for s in order), xs, namer(start), 1,
                          frozenset(namer(s) for s in order if s[0] in machine.accepting), tuple(rules),
                          name=machine.name, provenance=machine.provenance + ("reduce-access",))
