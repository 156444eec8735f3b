"""Node histories of quasi-acyclic automata, concretely and symbolically.

A history is the infinite sequence of states one node goes through.  For
quasi-acyclic automata it is eventually constant, so it compresses to
finitely many ``(state, count)`` pairs ending with ``(state, ∞)``.  The
history of node ``i+1`` is a function of node ``i``'s history and its own
initial state; this module computes that function by brute force and
symbolically, with the finite input counts kept as unknowns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .distributed import DistributedAutomaton, max_trace_length
from .errors import PreconditionError

INF = math.inf


@dataclass(frozen=True)
class CompressedSequence:
    """Run-length encoding of an eventually constant sequence."""

    entries: tuple[tuple[str | None, int | float], ...]

    def __post_init__(self) -> None:
        entries = tuple((s, c) for s, c in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("a compressed sequence has at least one entry")
        if entries[-1][1] != INF:
            raise ValueError("the last count must be infinite")
        for s, c in entries[:-1]:
            if not isinstance(c, int) or c < 1:
                raise ValueError(f"finite counts must be positive integers, got {c!r}")
        for (s, _), (t, _) in zip(entries, entries[1:]):
            if s == t:
                raise ValueError(f"adjacent entries repeat state {s!r}")

    @classmethod
    def of(cls, *pairs: tuple[str | None, int | float]) -> "CompressedSequence":
        return cls(tuple(pairs))

    @property
    def states(self) -> tuple:
        return tuple(s for s, _ in self.entries)

    @property
    def counts(self) -> tuple:
        return tuple(c for _, c in self.entries)

    def finite_length(self) -> int:
        return sum(c for _, c in self.entries[:-1])

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return " ".join(f"{'#none' if s is None else s}^{'∞' if c == INF else c}" for s, c in self.entries)


def expand(xi: CompressedSequence, horizon: int) -> list:
    """The first ``horizon`` elements of the sequence ``xi`` denotes."""
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    out: list = []
    for state, count in xi.entries:
        take = horizon - len(out) if count == INF else min(count, horizon - len(out))
        out.extend([state] * take)
        if len(out) >= horizon:
            break
    return out


def compress(prefix: Iterable, tail) -> CompressedSequence:
    """Canonical encoding of ``prefix`` followed by ``tail`` forever."""
    entries: list[list] = []
    for s in prefix:
        if entries and entries[-1][0] == s:
            entries[-1][1] += 1
        else:
            entries.append([s, 1])
    if entries and entries[-1][0] == tail:
        entries[-1][1] = INF
    else:
        entries.append([tail, INF])
    return CompressedSequence(tuple((s, c) for s, c in entries))


def _stand_in_z(automaton: DistributedAutomaton, z: int | None) -> int:
    if z is not None:
        return z
    try:
        return max_trace_length(automaton)
    except PreconditionError:
        raise PreconditionError("history transitions need a quasi-acyclic automaton") from None


def history_transition_oracle(automaton: DistributedAutomaton, xi: CompressedSequence, q: str,
                              z: int | None = None) -> CompressedSequence:
    """Successor history by direct simulation.

    After the input turns constant the output follows a trace, which is
    stable within ``Z`` further steps.
    """
    z = _stand_in_z(automaton, z)
    horizon = xi.finite_length() + z + 1
    delta = automaton.delta
    out = [q]
    for p in expand(xi, horizon):
        out.append(delta(p, out[-1]))
    last = out[-1]
    if delta(xi.entries[-1][0], last) != last:
        raise PreconditionError("output did not stabilize; is the automaton quasi-acyclic?")
    return compress(out[:-1], last)


def naive_history(automaton: DistributedAutomaton, inputs: Sequence, q: str) -> list:
    """Output states ``q, δ(p0, q), ...`` for a finite input prefix (no compression)."""
    out = [q]
    for p in inputs:
        out.append(automaton.delta(p, out[-1]))
    return out


# -- symbolic counts --------------------------------------------------------------

@dataclass(frozen=True)
class SymbolicCount:
    """Either the literal 1, the literal ∞, or ``sum(m[first..last]) + const``."""

    kind: str
    first: int = 0
    last: int = -1
    const: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("one", "inf", "linear"):
            raise ValueError(f"unknown count kind {self.kind!r}")

    @property
    def indices(self) -> range:
        return range(self.first, self.last + 1) if self.kind == "linear" else range(0)

    def evaluate(self, values: Sequence[int]) -> int | float:
        if self.kind == "one":
            return 1
        if self.kind == "inf":
            return INF
        return sum(values[i] for i in self.indices) + self.const

    def __str__(self) -> str:
        if self.kind != "linear":
            return "1" if self.kind == "one" else "∞"
        body = "+".join(f"m{i}" for i in self.indices)
        return body + (f"{self.const:+d}" if self.const else "")


ONE = SymbolicCount("one")
OMEGA = SymbolicCount("inf")


@dataclass(frozen=True)
class SymbolicSkeleton:
    entries: tuple[tuple[str, SymbolicCount], ...]

    @property
    def states(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.entries)

    def instantiate(self, values: Sequence[int]) -> CompressedSequence:
        return CompressedSequence(tuple((s, c.evaluate(values)) for s, c in self.entries))

    def __str__(self) -> str:
        return " ".join(f"{s}^{c}" for s, c in self.entries)


def run_block(automaton: DistributedAutomaton, pred, start: str, steps: int | float,
              limit: int | None = None) -> list[str]:
    """Distinct states emitted while the predecessor stays in ``pred`` for ``steps`` rounds.

    The last returned state repeats for the remaining rounds.
    """
    delta = automaton.delta
    emitted = [delta(pred, start)]
    while len(emitted) < steps:
        nxt = delta(pred, emitted[-1])
        if nxt == emitted[-1]:
            break
        emitted.append(nxt)
        if limit is not None and len(emitted) > limit:
            raise PreconditionError("a trace exceeded the maximum trace length")
    return emitted


def block_emissions(automaton: DistributedAutomaton, states: Sequence, q: str,
                    values: Sequence[int], z: int | None = None,
                    cache: dict | None = None) -> list[list[str]]:
    """Per input block, the distinct states the successor emits (the last block runs to stability).

    ``cache`` may map ``(pred, start)`` to the full emission run, shared across calls.
    """
    z = _stand_in_z(automaton, z)
    blocks = []
    cur = q
    for p, m in zip(states, list(values) + [INF]):
        if cache is None:
            emitted = run_block(automaton, p, cur, m, limit=z)
        else:
            full = cache.get((p, cur))
            if full is None:
                full = cache[(p, cur)] = run_block(automaton, p, cur, INF, limit=z)
            emitted = full if m >= len(full) else full[:m]
        blocks.append(emitted)
        cur = emitted[-1]
    return blocks


def symbolic_history_transition(automaton: DistributedAutomaton, states: Sequence, q: str,
                                values: Sequence[int], z: int | None = None,
                                cache: dict | None = None) -> SymbolicSkeleton:
    """Successor history with the input counts ``m_0 .. m_{r-2}`` kept symbolic.

    ``values`` are concrete stand-ins used to decide how each block unrolls;
    a block whose stand-in reaches the number of states it can emit leaves
    ``m_i - (d_i - 1)`` repetitions of its last state, recorded as a linear
    form over ``m_i``.
    """
    if len(values) != len(states) - 1:
        raise ValueError("need one stand-in value per finite input block")
    z = _stand_in_z(automaton, z)
    for v in values:
        if v < 1:
            raise ValueError("stand-in values are positive")
    # pieces: [state, first, last, const, infinite]
    pieces: list[list] = [[q, None, None, 1, False]]
    for i, emitted in enumerate(block_emissions(automaton, states, q, values, z, cache)):
        final = i == len(states) - 1
        for s in emitted[:-1]:
            pieces.append([s, None, None, 1, False])
        if final:
            pieces.append([emitted[-1], None, None, 0, True])
        else:
            pieces.append([emitted[-1], i, i, 1 - len(emitted), False])
    merged: list[list] = []
    for piece in pieces:
        if merged and merged[-1][0] == piece[0]:
            top = merged[-1]
            if piece[1] is not None:
                if top[1] is None:
                    top[1] = piece[1]
                elif top[2] + 1 != piece[1]:
                    raise AssertionError("merged index blocks are not contiguous")
                top[2] = piece[2]
            top[3] += piece[3]
            top[4] = top[4] or piece[4]
        else:
            merged.append(list(piece))
    entries = []
    for state, first, last, const, infinite in merged:
        if infinite:
            count = OMEGA
        elif first is None:
            if const != 1:
                raise AssertionError("constant-only count differs from 1")
            count = ONE
        else:
            count = SymbolicCount("linear", first, last, const)
        entries.append((state, count))
    return SymbolicSkeleton(tuple(entries))


def skeleton_violations(skeleton: SymbolicSkeleton, z: int) -> list[str]:
    """Shape problems: repeated states, bad constants, overlapping or non-contiguous blocks."""
    problems = []
    states = skeleton.states
    if len(set(states)) != len(states):
        problems.append("output states are not pairwise distinct")
    if skeleton.entries[-1][1] is not OMEGA:
        problems.append("last count is not infinite")
    used: set[int] = set()
    for state, count in skeleton.entries:
        if count is OMEGA and state != states[-1]:
            problems.append("infinite count before the end")
        if count.kind == "linear":
            if not -z < count.const <= 1:
                problems.append(f"constant {count.const} outside (-{z}, 1]")
            if count.last < count.first:
                problems.append("empty index block")
            block = set(count.indices)
            if used & block:
                problems.append("index blocks overlap")
            used |= block
    return problems


def verify_lemma_structure(automaton: DistributedAutomaton, xi: CompressedSequence, q: str) -> bool:
    """Check the shape of the symbolic successor history and its invariance at the stand-in ``Z``.

    Holds iff the skeleton is well formed (see :func:`skeleton_violations`),
    instantiating it with the real counts reproduces the concrete oracle, and
    replacing any finite count by ``Z`` or by ``Z + 7`` leaves the skeleton
    unchanged while the oracle still agrees with its instantiation.
    """
    z = _stand_in_z(automaton, None)
    states = xi.states
    counts = list(xi.counts[:-1])
    stand_in = [min(c, z) for c in counts]
    skeleton = symbolic_history_transition(automaton, states, q, stand_in, z)
    if skeleton_violations(skeleton, z):
        return False
    if skeleton.instantiate(counts) != history_transition_oracle(automaton, xi, q, z):
        return False
    for i in range(len(counts)):
        at_z = list(stand_in)
        at_z[i] = z
        reference = symbolic_history_transition(automaton, states, q, at_z, z)
        if skeleton_violations(reference, z):
            return False
        for big in (z, z + 7):
            real = list(counts)
            real[i] = big
            bumped = CompressedSequence(tuple(zip(states, real + [INF])))
            if history_transition_oracle(automaton, bumped, q, z) != reference.instantiate(real):
                return False
            if symbolic_history_transition(automaton, states, q, [min(v, z) for v in real], z) != reference:
                return False
    return True
