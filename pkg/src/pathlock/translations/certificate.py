"""Certificates recording what a translation pass claims about its output."""

from __future__ import annotations

import operator
import os
from dataclasses import dataclass
from typing import Callable, Hashable

from ..errors import ResourceError
from ..facts import DeviceFacts, device_facts

_OPS = {"==": operator.eq, "<=": operator.le, ">=": operator.ge}

DEFAULT_STATE_CAP = 200_000


def state_cap() -> int:
    """Upper bound on materialized states, from ``PATHLOCK_STATE_CAP``."""
    raw = os.environ.get("PATHLOCK_STATE_CAP")
    if not raw:
        return DEFAULT_STATE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"PATHLOCK_STATE_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError("PATHLOCK_STATE_CAP must be positive")
    return cap


def check_cap(count: int, cap: int, what: str, **diagnostics) -> None:
    if count > cap:
        raise ResourceError(f"{what} exceeded the state cap of {cap} (raise PATHLOCK_STATE_CAP)",
                            {"materialized": count, "cap": cap, **diagnostics})


@dataclass(frozen=True)
class Claim:
    fact: str
    op: str
    value: object

    def holds(self, facts: DeviceFacts) -> bool:
        return _OPS[self.op](getattr(facts, self.fact), self.value)

    def __str__(self) -> str:
        return f"{self.fact} {self.op} {self.value}"


@dataclass(frozen=True)
class TranslationCertificate:
    pass_name: str
    input: DeviceFacts
    output: DeviceFacts
    claims: tuple[Claim, ...]
    details: tuple[tuple[str, object], ...] = ()

    def check(self, device=None) -> list[str]:
        """Claims that fail, re-deriving facts from ``device`` when given."""
        facts = device_facts(device) if device is not None else self.output
        return [str(c) for c in self.claims if not c.holds(facts)]

    @property
    def detail(self) -> dict:
        return dict(self.details)

    def summary(self) -> str:
        lines = [f"pass: {self.pass_name}",
                 f"input: {self.input.as_dict()}",
                 f"output: {self.output.as_dict()}"]
        lines += [f"claim: {c} [{'ok' if c.holds(self.output) else 'FAILED'}]" for c in self.claims]
        lines += [f"{k}: {v}" for k, v in self.details]
        return "\n".join(lines)


def certify(pass_name: str, source, result, claims: list[tuple[str, str, object]],
            **details) -> TranslationCertificate:
    return TranslationCertificate(pass_name, device_facts(source), device_facts(result),
                                  tuple(Claim(*c) for c in claims), tuple(details.items()))


class Namer:
    """Stable, collision-free names for structured states."""

    def __init__(self, render: Callable[[Hashable], str], reserved: set[str] | None = None):
        self._render = render
        self._names: dict[Hashable, str] = {}
        self._used: set[str] = set(reserved or ())

    def __call__(self, key: Hashable) -> str:
        name = self._names.get(key)
        if name is None:
            base = name = self._render(key)
            n = 1
            while name in self._used:
                n += 1
                name = f"{base}~{n}"
            self._names[key] = name
            self._used.add(name)
        return name
