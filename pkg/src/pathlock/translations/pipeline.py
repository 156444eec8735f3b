"""The full cycle of passes: copyless machine → sumless → 1-access → automaton → copyless machine."""

from __future__ import annotations

from dataclasses import dataclass

from ..counter import CounterMachine
from .certificate import TranslationCertificate
from .modular import reduce_access
from .powerset import copyless_to_sumless
from .skeletons import da_to_copyless
from .tracks import sumless_to_da


@dataclass(frozen=True)
class Stage:
    pass_name: str
    device: object
    certificate: TranslationCertificate


def run_chain(machine: CounterMachine) -> list[Stage]:
    """Apply the four passes in order, keeping every intermediate device."""
    stages = []
    current = machine
    for step in (copyless_to_sumless, reduce_access, sumless_to_da, da_to_copyless):
        current, cert = step(current)
        stages.append(Stage(cert.pass_name, current, cert))
    return stages

