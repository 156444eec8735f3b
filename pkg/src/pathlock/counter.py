"""Counter machines with r-access guards, their runs, and structural classifiers.

A machine reads each symbol, looks at its counters only through the cutoff
to ``[-r, r]``, and applies an update that assigns every counter a linear
expression (a multiset of counter variables plus a constant).  Transition
tables are sparse: each guard coordinate may be a wildcard, the most
specific matching entry wins (declaration order breaks ties), and an
optional default entry catches whatever is left.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import MalformedExpression, NonTotalMachine
from .words import Alphabet, make_word

Guard = tuple  # tuple[int | None, ...] aligned with CounterMachine.counters; None is a wildcard


@dataclass(frozen=True, order=True)
class Expr:
    """A counter expression: a multiset of variables plus an integer constant."""

    vars: tuple[str, ...] = ()
    const: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "vars", tuple(sorted(self.vars)))
        object.__setattr__(self, "const", int(self.const))

    @classmethod
    def parse(cls, text: str) -> "Expr":
        """Parse expressions such as ``"x+y-1"``, ``"x + x + 2"`` or ``"0"``."""
        body = text.replace(" ", "")
        if not body:
            raise ValueError("empty expression")
        terms = re.findall(r"[+-]?[^+-]+", body)
        if "".join(terms) != body:
            raise ValueError(f"cannot parse expression {text!r}")
        names: list[str] = []
        const = 0
        for term in terms:
            sign = -1 if term.startswith("-") else 1
            atom = term.lstrip("+-")
            if re.fullmatch(r"\d+", atom):
                const += sign * int(atom)
            elif sign < 0:
                raise ValueError(f"negated variable in {text!r}")
            else:
                names.append(atom)
        return cls(tuple(names), const)

    @classmethod
    def coerce(cls, value: "Expr | str | int") -> "Expr":
        if isinstance(value, Expr):
            return value
        if isinstance(value, int):
            return cls((), value)
        return cls.parse(value)

    def __add__(self, other: "Expr | int") -> "Expr":
        if isinstance(other, int):
            return Expr(self.vars, self.const + other)
        return Expr(self.vars + other.vars, self.const + other.const)

    __radd__ = __add__

    def __str__(self) -> str:
        if not self.vars:
            return str(self.const)
        out = "+".join(self.vars)
        if self.const > 0:
            out += f"+{self.const}"
        elif self.const < 0:
            out += f"{self.const}"
        return out


def evaluate_expression(valuation: Mapping[str, int], expr: Expr) -> int:
    """Sum of the valuation over the expression's variables, plus its constant."""
    total = expr.const
    for name in expr.vars:
        try:
            total += valuation[name]
        except KeyError:
            raise MalformedExpression(f"unknown counter {name!r} in expression {expr}") from None
    return total


def decompose_expression(expr: Expr) -> tuple[frozenset[str], int]:
    """Distinct variables and the constant."""
    return frozenset(expr.vars), expr.const


@dataclass(frozen=True)
class Update:
    """An update function: one expression per counter, stored sorted by counter name."""

    assignments: tuple[tuple[str, Expr], ...]
    _lookup: dict = field(default=None, compare=False, hash=False, repr=False)
    _hash: int = field(default=0, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        items = self.assignments.items() if isinstance(self.assignments, Mapping) else self.assignments
        normalized = tuple(sorted((str(k), Expr.coerce(v)) for k, v in items))
        object.__setattr__(self, "assignments", normalized)
        object.__setattr__(self, "_lookup", dict(normalized))
        object.__setattr__(self, "_hash", hash(normalized))

    def __hash__(self) -> int:  # updates key many caches; hashing the nested tuple each time is slow
        return self._hash

    @classmethod
    def of(cls, mapping: Mapping[str, "Expr | str | int"]) -> "Update":
        return cls(tuple(mapping.items()))

    @classmethod
    def identity(cls, counters: Iterable[str]) -> "Update":
        return cls(tuple((c, Expr((c,), 0)) for c in counters))

    def __getitem__(self, counter: str) -> Expr:
        return self._lookup[counter]

    def get(self, counter: str, default: Expr | None = None) -> Expr | None:
        return self._lookup.get(counter, default)

    def keys(self) -> Iterable[str]:
        return self._lookup.keys()

    def items(self) -> Iterable[tuple[str, Expr]]:
        return self.assignments

    def __str__(self) -> str:
        return ",".join(f"{k}:={e}" for k, e in self.assignments)


@dataclass(frozen=True)
class Rule:
    """One sparse transition-table entry."""

    source: str
    guard: Guard
    symbol: str
    target: str
    update: Update

    @property
    def wildcards(self) -> int:
        return self.guard.count(None)

    def matches(self, guard: Sequence[int]) -> bool:
        return all(g is None or g == v for g, v in zip(self.guard, guard))


@dataclass(frozen=True)
class DefaultRule:
    target: str
    update: Update


@dataclass(frozen=True)
class MemoryConfiguration:
    """A machine state together with counter values aligned with the machine's counters."""

    state: str
    values: tuple[int, ...]

    def valuation(self, counters: Sequence[str]) -> dict[str, int]:
        return dict(zip(counters, self.values))


@dataclass(frozen=True)
class MachineRun:
    counters: tuple[str, ...]
    configurations: tuple[MemoryConfiguration, ...]

    @property
    def final(self) -> MemoryConfiguration:
        return self.configurations[-1]

    def trajectory(self) -> list[tuple[int, ...]]:
        return [c.values for c in self.configurations]

    def states(self) -> list[str]:
        return [c.state for c in self.configurations]


TransitionSpec = tuple  # (source, guard mapping, symbol, target, update mapping)
UpdateLike = Union[Update, Mapping[str, "Expr | str | int"]]


@dataclass(eq=False)
class CounterMachine:
    """Deterministic counter machine with r-access (sparse table form)."""

    alphabet: Alphabet
    states: tuple[str, ...]
    counters: tuple[str, ...]
    initial: str
    access: int
    accepting: frozenset[str]
    rules: tuple[Rule, ...]
    default: DefaultRule | None = None
    name: str = ""
    provenance: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.alphabet, Alphabet):
            self.alphabet = Alphabet(tuple(self.alphabet))
        self.states = tuple(self.states)
        self.counters = tuple(self.counters)
        self.accepting = frozenset(self.accepting)
        self.rules = tuple(self.rules)
        self.provenance = tuple(self.provenance)
        self._position = {c: i for i, c in enumerate(self.counters)}
        self._exact: dict[tuple, Rule] = {}
        groups: dict[tuple[str, str], list[tuple[int, int, Rule]]] = {}
        for order, rule in enumerate(self.rules):
            wild = rule.wildcards
            groups.setdefault((rule.source, rule.symbol), []).append((wild, order, rule))
            if wild == 0:
                self._exact.setdefault((rule.source, tuple(rule.guard), rule.symbol), rule)
        self._groups = {key: [r for _, _, r in sorted(entries, key=lambda e: e[:2])]
                        for key, entries in groups.items()}
        self._resolved: dict[tuple, tuple[str, Update]] = {}
        self._compiled: dict[Update, tuple] = {}

    # -- construction helpers -------------------------------------------------

    @classmethod
    def build(cls, *, alphabet: Iterable[str] | Alphabet, states: Iterable[str],
              counters: Iterable[str], initial: str, access: int, accepting: Iterable[str],
              transitions: Iterable[TransitionSpec], default: tuple[str, UpdateLike] | None = None,
              name: str = "", provenance: Iterable[str] = ()) -> "CounterMachine":
        """Build from readable specs.

        Each transition is ``(source, guard, symbol, target, update)`` where
        ``guard`` maps counters to an int or ``"*"`` (absent means ``"*"``) and
        ``update`` maps counters to expressions; counters absent from the
        update keep their value.
        """
        counters = tuple(counters)
        rules = []
        for source, guard, symbol, target, update in transitions:
            rules.append(Rule(source, make_guard(counters, guard), symbol, target,
                              complete_update(counters, update)))
        dflt = None
        if default is not None:
            dflt = DefaultRule(default[0], complete_update(counters, default[1]))
        return cls(alphabet if isinstance(alphabet, Alphabet) else Alphabet(tuple(alphabet)),
                   tuple(states), counters, initial, access, frozenset(accepting),
                   tuple(rules), dflt, name, tuple(provenance))

    @property
    def k(self) -> int:
        return len(self.counters)

    def truncate(self, values: Sequence[int]) -> tuple[int, ...]:
        r = self.access
        return tuple(-r if v < -r else r if v > r else v for v in values)

    def resolve(self, state: str, guard: Sequence[int], symbol: str) -> tuple[str, Update]:
        """Look up the transition for a truncated valuation."""
        key = (state, tuple(guard), symbol)
        hit = self._resolved.get(key)
        if hit is not None:
            return hit
        rule = self._exact.get(key)
        if rule is None:
            for candidate in self._groups.get((state, symbol), ()):
                if candidate.matches(key[1]):
                    rule = candidate
                    break
        if rule is not None:
            hit = (rule.target, rule.update)
        elif self.default is not None:
            hit = (self.default.target, self.default.update)
        else:
            raise NonTotalMachine(f"no transition for state {state!r}, guard {key[1]}, symbol {symbol!r}")
        self._resolved[key] = hit
        return hit

    def compile_update(self, update: Update) -> tuple[tuple[tuple[int, ...], int], ...]:
        compiled = self._compiled.get(update)
        if compiled is None:
            out = []
            for c in self.counters:
                expr = update.get(c)
                if expr is None:
                    raise MalformedExpression(f"update {update} does not assign counter {c!r}")
                try:
                    out.append((tuple(self._position[v] for v in expr.vars), expr.const))
                except KeyError as exc:
                    raise MalformedExpression(f"unknown counter {exc.args[0]!r} in {update}") from None
            compiled = tuple(out)
            self._compiled[update] = compiled
        return compiled

    def apply(self, update: Update, values: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(values[i] for i in idx) + c for idx, c in self.compile_update(update))

    def initial_configuration(self) -> MemoryConfiguration:
        return MemoryConfiguration(self.initial, (0,) * len(self.counters))

    def updates(self) -> Iterator[Update]:
        for rule in self.rules:
            yield rule.update
        if self.default is not None:
            yield self.default.update


def make_guard(counters: Sequence[str], guard: Mapping[str, "int | str"] | Sequence | None) -> Guard:
    if guard is None:
        return (None,) * len(counters)
    if not isinstance(guard, Mapping):
        values = tuple(guard)
        if len(values) != len(counters):
            raise ValueError(f"guard {values!r} has wrong arity for counters {counters!r}")
        return tuple(None if v in ("*", None) else int(v) for v in values)
    unknown = set(guard) - set(counters)
    if unknown:
        raise ValueError(f"guard mentions unknown counters {sorted(unknown)}")
    return tuple(None if guard.get(c, "*") in ("*", None) else int(guard[c]) for c in counters)


def complete_update(counters: Sequence[str], update: UpdateLike) -> Update:
    if isinstance(update, Update):
        return update
    full = {c: Expr((c,), 0) for c in counters}
    for c, e in update.items():
        full[c] = Expr.coerce(e)
    return Update.of(full)


# -- semantics -----------------------------------------------------------------

def machine_step(machine: CounterMachine, config: MemoryConfiguration, symbol: str) -> MemoryConfiguration:
    target, update = machine.resolve(config.state, machine.truncate(config.values), symbol)
    return MemoryConfiguration(target, machine.apply(update, config.values))


def machine_run(machine: CounterMachine, word: Sequence[str]) -> MachineRun:
    w = make_word(word, machine.alphabet)
    config = machine.initial_configuration()
    configs = [config]
    for symbol in w:
        config = machine_step(machine, config, symbol)
        configs.append(config)
    return MachineRun(machine.counters, tuple(configs))


def machine_accepts(machine: CounterMachine, word: Sequence[str]) -> bool:
    w = make_word(word, machine.alphabet)
    state, values = machine.initial, (0,) * len(machine.counters)
    for symbol in w:
        state, update = machine.resolve(state, machine.truncate(values), symbol)
        values = machine.apply(update, values)
    return state in machine.accepting


# -- classifiers -----------------------------------------------------------------

def is_sumless(machine: CounterMachine) -> bool:
    """Every expression mentions at most one variable occurrence."""
    return all(len(e.vars) <= 1 for u in set(machine.updates()) for _, e in u.items())


def is_copyless(machine: CounterMachine) -> bool:
    """No variable occurs twice across the expressions of a single update."""
    for u in set(machine.updates()):
        seen: set[str] = set()
        for _, e in u.items():
            for v in e.vars:
                if v in seen:
                    return False
                seen.add(v)
    return True


def max_constant(machine: CounterMachine) -> int:
    return max((abs(e.const) for u in set(machine.updates()) for _, e in u.items()), default=0)


# -- validation -------------------------------------------------------------------

_OTHER = object()


def validate_machine(machine: CounterMachine) -> list[str]:
    """Diagnostics for malformed references, out-of-range constants, gaps and ambiguities."""
    diags: list[str] = []
    m = machine
    states = set(m.states)
    counters = set(m.counters)
    r = m.access
    if len(states) != len(m.states):
        diags.append("duplicate state names")
    if len(counters) != len(m.counters):
        diags.append("duplicate counter names")
    if r < 1:
        diags.append(f"access must be at least 1, got {r}")
    if m.initial not in states:
        diags.append(f"unknown initial state {m.initial!r}")
    for q in sorted(m.accepting - states):
        diags.append(f"unknown accepting state {q!r}")

    update_problems: dict[Update, list[str]] = {}

    def check_update(update: Update, where: str) -> None:
        problems = update_problems.get(update)
        if problems is None:
            problems = update_problems[update] = []
            keys = set(update.keys())
            for c in sorted(counters - keys):
                problems.append(f"update does not assign counter {c!r}")
            for c in sorted(keys - counters):
                problems.append(f"update assigns unknown counter {c!r}")
            for c, e in update.items():
                for v in sorted(set(e.vars) - counters):
                    problems.append(f"expression for {c!r} uses unknown counter {v!r}")
                if not -r <= e.const <= r:
                    problems.append(f"constant {e.const} for {c!r} is out of range [-{r}, {r}]")
        diags.extend(f"{where}: {p}" for p in problems)

    symbols = set(m.alphabet)
    good_guards: set = set()
    for i, rule in enumerate(m.rules):
        if (rule.source in states and rule.target in states and rule.symbol in symbols
                and rule.guard in good_guards and not update_problems.get(rule.update, True)):
            continue  # the common case on large tables: everything already checked
        where = f"transition {i} ({rule.source}, {rule.symbol})"
        if rule.source not in states:
            diags.append(f"{where}: unknown source state {rule.source!r}")
        if rule.target not in states:
            diags.append(f"{where}: unknown target state {rule.target!r}")
        if rule.symbol not in symbols:
            diags.append(f"{where}: unknown symbol {rule.symbol!r}")
        guard_ok = len(rule.guard) == len(m.counters)
        if not guard_ok:
            diags.append(f"{where}: guard arity {len(rule.guard)} != {len(m.counters)} counters")
        for c, g in zip(m.counters, rule.guard):
            if g is not None and not -r <= g <= r:
                guard_ok = False
                diags.append(f"{where}: guard value {g} for {c!r} is out of range [-{r}, {r}]")
        if guard_ok:
            good_guards.add(rule.guard)
        check_update(rule.update, where)
    if m.default is not None:
        if m.default.target not in states:
            diags.append(f"default: unknown target state {m.default.target!r}")
        check_update(m.default.update, "default")
    if diags:
        return diags
    for q in m.states:
        for s in m.alphabet:
            diags.extend(_group_diagnostics(m, q, s))
    return diags


def _group_diagnostics(m: CounterMachine, state: str, symbol: str) -> list[str]:
    """Totality and ambiguity for one (state, symbol) group.

    Only finitely many guard classes matter: for each coordinate, the values
    some entry mentions, plus one representative of "any other value".
    Matching entries for a class are found by dictionary lookups over the
    subsets of its exact coordinates.
    """
    rules = m._groups.get((state, symbol), [])
    r = m.access
    domain = range(-r, r + 1)
    if not rules:
        if m.default is None:
            return [f"no transition for state {state!r}, symbol {symbol!r}, any guard"]
        return []
    by_guard: dict[tuple, list[Rule]] = {}
    for rule in rules:
        by_guard.setdefault(tuple(rule.guard), []).append(rule)
    mentioned = [sorted({g[j] for g in by_guard if g[j] is not None}) for j in range(m.k)]
    choices = [vals + ([_OTHER] if len(vals) < len(domain) else []) for vals in mentioned]
    diags = []
    reported: set[tuple] = set()
    for point in itertools.product(*choices):
        exact = [j for j, v in enumerate(point) if v is not _OTHER]
        best: list[Rule] | None = None
        best_wild = None
        for size in range(len(exact), -1, -1):
            for kept in itertools.combinations(exact, size):
                key = tuple(point[j] if j in kept else None for j in range(m.k))
                found = by_guard.get(key)
                if found:
                    if best is None:
                        best, best_wild = list(found), m.k - size
                    elif m.k - size == best_wild:
                        best.extend(found)
            if best is not None:
                break
        if best is None:
            if m.default is None:
                shown = []
                for c, v, vals in zip(m.counters, point, mentioned):
                    if v is not _OTHER:
                        shown.append(f"{c}={v}")
                    else:
                        rest = [x for x in domain if x not in vals]
                        shown.append(f"{c}={rest[0]}" if len(rest) == 1 else f"{c}∈{{{','.join(map(str, rest))}}}")
                diags.append(f"no transition for state {state!r}, symbol {symbol!r}, guard ({', '.join(shown)})")
            continue
        outcomes = {(b.target, b.update) for b in best}
        if len(outcomes) > 1:
            key = tuple(sorted(str(b.guard) for b in best))
            if key not in reported:
                reported.add(key)
                diags.append(f"ambiguous transitions for state {state!r}, symbol {symbol!r}: "
                             + " vs ".join(_guard_text(m.counters, b.guard) for b in best))
    return diags


def _guard_text(counters: Sequence[str], guard: Guard) -> str:
    return "(" + ", ".join(f"{c}={'*' if g is None else g}" for c, g in zip(counters, guard)) + ")"

