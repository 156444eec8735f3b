"""Distributed automata on labeled directed paths.

Every node starts in ``init[label]`` and, in each synchronous round, moves
to ``delta(pred, self)`` where ``pred`` is its left neighbour's state, or
``None`` for the first node.  A word is accepted when the last node visits
an accepting state at some round.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Callable, Iterable, Mapping, Sequence

from .errors import InvalidWord, NonTotalAutomaton, PreconditionError
from .words import Alphabet, make_word

Pred = "str | None"
Configuration = tuple  # tuple[str, ...], one state per node


@dataclass(eq=False)
class DistributedAutomaton:
    """Dipath automaton with a sparse transition table.

    ``table`` holds exact ``(pred, self) -> target`` entries (``pred`` may be
    ``None``); ``any_pred`` holds ``(*, self)`` rows and ``any_self`` holds
    ``(pred, *)`` columns.  Lookup order: exact entry, ``(*, self)``,
    ``(pred, *)``, ``default``, then the optional intensional ``rule`` whose
    answers are cached under a lock.
    """

    alphabet: Alphabet
    states: tuple[str, ...]
    init: Mapping[str, str]
    accepting: frozenset[str]
    table: Mapping[tuple, str] = field(default_factory=dict)
    any_pred: Mapping[str, str] = field(default_factory=dict)
    any_self: Mapping = field(default_factory=dict)
    default: str | None = None
    rule: Callable[[str | None, str], str] | None = None
    name: str = ""
    provenance: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.alphabet, Alphabet):
            self.alphabet = Alphabet(tuple(self.alphabet))
        self.states = tuple(self.states)
        self.init = dict(self.init)
        self.accepting = frozenset(self.accepting)
        self.table = dict(self.table)
        self.any_pred = dict(self.any_pred)
        self.any_self = dict(self.any_self)
        self.provenance = tuple(self.provenance)
        self._by_self: dict[str, dict] = {}
        for (p, q), t in self.table.items():
            self._by_self.setdefault(q, {})[p] = t
        self._lazy: dict[tuple, str] = {}
        self._lock = threading.Lock()
        self._metrics: TraceMetrics | None = None
        self._diagram: StateDiagram | None = None

    def delta(self, pred: str | None, state: str) -> str:
        t = self.table.get((pred, state))
        if t is not None:
            return t
        t = self.any_pred.get(state)
        if t is not None:
            return t
        t = self.any_self.get(pred)
        if t is not None:
            return t
        if self.default is not None:
            return self.default
        if self.rule is not None:
            key = (pred, state)
            t = self._lazy.get(key)
            if t is None:
                with self._lock:
                    t = self._lazy.get(key)
                    if t is None:
                        t = self.rule(pred, state)
                        self._lazy[key] = t
            return t
        raise NonTotalAutomaton(f"no transition for predecessor {pred!r} and state {state!r}")

    def images(self, state: str) -> set[str]:
        """All values of ``delta(p, state)`` over every predecessor view ``p``."""
        explicit = self._by_self.get(state, {})
        fallback = self.any_pred.get(state, self.default)
        if self.rule is None and not self.any_self and fallback is not None:
            out = set(explicit.values())
            if len(explicit) < len(self.states) + 1:
                out.add(fallback)
            return out
        return {self.delta(p, state) for p in (None, *self.states)}

    def materialize(self) -> "DistributedAutomaton":
        """Extensional copy with an explicit entry for every pair."""
        table = {(p, q): self.delta(p, q) for q in self.states for p in (None, *self.states)}
        return DistributedAutomaton(self.alphabet, self.states, self.init, self.accepting, table,
                                    name=self.name, provenance=self.provenance)


class Verdict(enum.Enum):
    ACCEPT = "Accept"
    REJECT_STABLE = "RejectStable"
    BUDGET_EXCEEDED = "BudgetExceeded"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class PathRun:
    """Finite prefix of a run.  ``cycle`` is ``(start, period)`` once a configuration repeats."""

    configurations: tuple[Configuration, ...]
    stabilized: bool
    cycle: tuple[int, int] | None


def init_configuration(automaton: DistributedAutomaton, word: Sequence[str]) -> Configuration:
    w = make_word(word)
    try:
        return tuple(automaton.init[s] for s in w)
    except KeyError as exc:
        raise InvalidWord(f"symbol {exc.args[0]!r} has no initial state") from None


def step_configuration(automaton: DistributedAutomaton, config: Sequence[str]) -> Configuration:
    if not config:
        raise ValueError("configurations have at least one node")
    delta = automaton.delta
    out = [delta(None, config[0])]
    out.extend(delta(config[i - 1], config[i]) for i in range(1, len(config)))
    return tuple(out)


def da_run(automaton: DistributedAutomaton, word: Sequence[str], max_rounds: int) -> PathRun:
    """Simulate at most ``max_rounds`` rounds, stopping at a fixpoint or a repeated configuration."""
    if max_rounds < 0:
        raise ValueError("max_rounds must be nonnegative")
    config = init_configuration(automaton, word)
    configs = [config]
    seen = {config: 0}
    for _ in range(max_rounds):
        nxt = step_configuration(automaton, config)
        if nxt == config:
            return PathRun(tuple(configs), True, (len(configs) - 1, 1))
        if nxt in seen:
            start = seen[nxt]
            return PathRun(tuple(configs), False, (start, len(configs) - start))
        seen[nxt] = len(configs)
        configs.append(nxt)
        config = nxt
    return PathRun(tuple(configs), False, None)


def da_accepts(automaton: DistributedAutomaton, word: Sequence[str], budget: int | None = None) -> Verdict:
    """Exact acceptance decision.

    The run is deterministic over a finite configuration space, so once a
    configuration repeats no new last-node state can appear.  For
    quasi-acyclic automata every node is stable after ``|Q| * n`` rounds,
    which avoids storing the visited set.
    """
    config = init_configuration(automaton, word)
    accepting = automaton.accepting
    if not accepting:
        return Verdict.REJECT_STABLE
    if config[-1] in accepting:
        return Verdict.ACCEPT
    quasi = is_quasi_acyclic(automaton)
    seen: set | None = None if quasi else {config}
    rounds = 0
    while True:
        if budget is not None and rounds >= budget:
            return Verdict.BUDGET_EXCEEDED
        nxt = step_configuration(automaton, config)
        rounds += 1
        if nxt[-1] in accepting:
            return Verdict.ACCEPT
        if nxt == config:
            return Verdict.REJECT_STABLE
        if seen is not None:
            if nxt in seen:
                return Verdict.REJECT_STABLE
            seen.add(nxt)
        config = nxt


def accepts(automaton: DistributedAutomaton, word: Sequence[str]) -> bool:
    return da_accepts(automaton, word) is Verdict.ACCEPT


# -- state diagram and trace metrics ------------------------------------------------

@dataclass(frozen=True)
class StateDiagram:
    """Edges ``q -> q'`` (``q' != q``) realizable by some predecessor view; self-loops kept as ``looping``."""

    states: tuple[str, ...]
    successors: Mapping[str, frozenset[str]]
    looping: frozenset[str]

    def edges(self) -> list[tuple[str, str]]:
        order = {q: i for i, q in enumerate(self.states)}
        return [(q, t) for q in self.states for t in sorted(self.successors[q], key=order.__getitem__)]


@dataclass(frozen=True)
class TraceMetrics:
    quasi_acyclic: bool
    max_trace_length: int | None
    max_loops_per_trace: int | None


def build_state_diagram(automaton: DistributedAutomaton) -> StateDiagram:
    if automaton._diagram is None:
        succ = {}
        looping = set()
        for q in automaton.states:
            images = automaton.images(q)
            if q in images:
                looping.add(q)
                images.discard(q)
            succ[q] = frozenset(images)
        automaton._diagram = StateDiagram(automaton.states, succ, frozenset(looping))
    return automaton._diagram


def trace_metrics(automaton: DistributedAutomaton) -> TraceMetrics:
    if automaton._metrics is None:
        diagram = build_state_diagram(automaton)
        try:
            # successors are passed as "dependencies", so sinks come first
            order = list(TopologicalSorter(dict(diagram.successors)).static_order())
        except CycleError:
            automaton._metrics = TraceMetrics(False, None, None)
            return automaton._metrics
        length: dict[str, int] = {}
        loops: dict[str, int] = {}
        for q in order:
            nxt = diagram.successors.get(q, ())
            length[q] = 1 + max((length[t] for t in nxt), default=0)
            loops[q] = (q in diagram.looping) + max((loops[t] for t in nxt), default=0)
        automaton._metrics = TraceMetrics(True, max(length.values(), default=0),
                                          max(loops.values(), default=0))
    return automaton._metrics


def is_quasi_acyclic(automaton: DistributedAutomaton) -> bool:
    return trace_metrics(automaton).quasi_acyclic


def _require_quasi_acyclic(automaton: DistributedAutomaton) -> TraceMetrics:
    metrics = trace_metrics(automaton)
    if not metrics.quasi_acyclic:
        raise PreconditionError("the automaton is not quasi-acyclic")
    return metrics


def max_trace_length(automaton: DistributedAutomaton) -> int:
    """Number of states on the longest trace."""
    return _require_quasi_acyclic(automaton).max_trace_length


def max_loops_per_trace(automaton: DistributedAutomaton) -> int:
    return _require_quasi_acyclic(automaton).max_loops_per_trace


def stabilization_round_bound(automaton: DistributedAutomaton, n: int) -> int:
    """Round after which every node of an ``n``-node path is constant."""
    _require_quasi_acyclic(automaton)
    return len(automaton.states) * n


def validate_automaton(automaton: DistributedAutomaton) -> list[str]:
    """Unknown references, missing initial states, gaps and ambiguous wildcard rows."""
    a = automaton
    diags: list[str] = []
    states = set(a.states)
    if len(states) != len(a.states):
        diags.append("duplicate state names")
    for s in a.alphabet:
        if s not in a.init:
            diags.append(f"no initial state for symbol {s!r}")
    for s, q in a.init.items():
        if s not in a.alphabet:
            diags.append(f"initial entry for unknown symbol {s!r}")
        if q not in states:
            diags.append(f"initial state {q!r} for symbol {s!r} is unknown")
    for q in sorted(a.accepting - states):
        diags.append(f"unknown accepting state {q!r}")

    def known(q: str | None, allow_none: bool) -> bool:
        return q in states or (allow_none and q is None)

    for (p, q), t in a.table.items():
        if not known(p, True) or not known(q, False) or t not in states:
            diags.append(f"transition ({p!r}, {q!r}) -> {t!r} references unknown states")
    for q, t in a.any_pred.items():
        if q not in states or t not in states:
            diags.append(f"transition (*, {q!r}) -> {t!r} references unknown states")
    for p, t in a.any_self.items():
        if not known(p, True) or t not in states:
            diags.append(f"transition ({p!r}, *) -> {t!r} references unknown states")
    if a.default is not None and a.default not in states:
        diags.append(f"default target {a.default!r} is unknown")
    if diags:
        return diags
    for q, t in a.any_pred.items():
        for p, u in a.any_self.items():
            if (p, q) not in a.table and t != u:
                diags.append(f"ambiguous transitions (*, {q!r}) -> {t!r} vs ({p!r}, *) -> {u!r}")
    if a.default is None and a.rule is None:
        for q in a.states:
            if q in a.any_pred:
                continue
            for p in (None, *a.states):
                if (p, q) not in a.table and p not in a.any_self:
                    diags.append(f"no transition for predecessor {p!r} and state {q!r}")
    return diags


def make_automaton(*, alphabet: Iterable[str] | Alphabet, states: Iterable[str], init: Mapping[str, str],
                   accepting: Iterable[str], transitions: Iterable[tuple] = (), default: str | None = None,
                   name: str = "", provenance: Iterable[str] = ()) -> DistributedAutomaton:
    """Build from ``(pred, self, target)`` triples where ``"*"`` is a wildcard and ``None`` the empty view."""
    table, any_pred, any_self = {}, {}, {}
    for pred, state, target in transitions:
        if pred == "*" and state == "*":
            default = target
        elif pred == "*":
            any_pred[state] = target
        elif state == "*":
            any_self[pred] = target
        else:
            table[(pred, state)] = target
    return DistributedAutomaton(alphabet if isinstance(alphabet, Alphabet) else Alphabet(tuple(alphabet)),
                                tuple(states), dict(init), frozenset(accepting), table, any_pred, any_self,
                                default, None, name, tuple(provenance))
