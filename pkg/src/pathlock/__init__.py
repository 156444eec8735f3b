"""Counter machines and distributed automata on labeled paths, and translations between them."""

from .corpus import corpus_devices, example_cm, example_da, toy_devices
from .counter import (CounterMachine, Expr, MachineRun, MemoryConfiguration, Rule, Update,
                      evaluate_expression, is_copyless, is_sumless, machine_accepts, machine_run,
                      machine_step, validate_machine)
from .deviceio import load_device, parse_device, save_device, serialize_device
from .distributed import (DistributedAutomaton, PathRun, Verdict, build_state_diagram, da_accepts,
                          da_run, is_quasi_acyclic, max_loops_per_trace, max_trace_length,
                          make_automaton, validate_automaton)
from .errors import (DeviceFormatError, InvalidRange, InvalidWord, MalformedExpression,
                     NonTotalAutomaton, NonTotalMachine, PathlockError, PreconditionError,
                     ResourceError)
from .facts import DeviceFacts, device_facts
from .harness import (EquivalenceVerdict, check_equivalence, language_oracle_L,
                      random_quasi_acyclic_da, random_sumless_cm, space_time_diagram)
from .history import (CompressedSequence, compress, expand, history_transition_oracle,
                      symbolic_history_transition, verify_lemma_structure)
from .translations import (copyless_to_sumless, da_to_copyless, make_nonnegative, mod_add,
                           mod_encode, reduce_access, run_chain, sumless_to_da)
from .words import Alphabet, cutoff, enumerate_words, make_word

__all__ = [name for name in dir() if not name.startswith("_")]
