"""Structural facts about a device, gathered from the classifiers."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .counter import CounterMachine, is_copyless, is_sumless
from .distributed import DistributedAutomaton, trace_metrics


@dataclass(frozen=True)
class DeviceFacts:
    kind: str
    states: int
    counters: int | None = None
    access: int | None = None
    sumless: bool | None = None
    copyless: bool | None = None
    quasi_acyclic: bool | None = None
    max_trace_length: int | None = None
    max_loops_per_trace: int | None = None

    def as_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def device_facts(device: CounterMachine | DistributedAutomaton) -> DeviceFacts:
    if isinstance(device, CounterMachine):
        return DeviceFacts("counter-machine", len(device.states), len(device.counters),
                           device.access, is_sumless(device), is_copyless(device))
    if isinstance(device, DistributedAutomaton):
        m = trace_metrics(device)
        return DeviceFacts("distributed-automaton", len(device.states), quasi_acyclic=m.quasi_acyclic,
                           max_trace_length=m.max_trace_length, max_loops_per_trace=m.max_loops_per_trace)
    raise TypeError(f"not a device: {type(device).__name__}")
