"""Command-line interface: ``pathlock <subcommand> ...``.

Exit codes: 0 success, 1 negative verdict (rejection, inequivalence, failed
certificate), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .counter import CounterMachine, machine_accepts
from .deviceio import load_device, serialize_device
from .distributed import DistributedAutomaton, Verdict, da_accepts
from .errors import PathlockError
from .facts import device_facts
from .harness import check_equivalence, random_quasi_acyclic_da, random_sumless_cm, space_time_diagram
from .translations import (copyless_to_sumless, da_to_copyless, make_nonnegative, reduce_access,
                           run_chain, sumless_to_da)

PASSES = {
    "copyless-to-sumless": copyless_to_sumless,
    "nonnegative": make_nonnegative,
    "reduce-access": reduce_access,
    "cm-to-da": sumless_to_da,
    "da-to-cm": da_to_copyless,
}
RANDOM = {
    "random-da": lambda seed: random_quasi_acyclic_da(seed, 4, ("a", "b")),
    "random-cm": lambda seed: random_sumless_cm(seed, 3, 2, 2, ("a", "b")),
}


class UsageError(Exception):
    pass


def _device(spec: str, seed: int | None):
    """A device file, or ``random-da`` / ``random-cm`` drawn with ``--seed``."""
    if spec in RANDOM:
        return RANDOM[spec](0 if seed is None else seed)
    try:
        return load_device(spec)
    except OSError as exc:
        raise UsageError(f"cannot read {spec}: {exc.strerror or exc}") from None


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_simulate(args) -> int:
    device = _device(args.device, args.seed)
    word = device.alphabet.word(args.word)
    if args.diagram:
        print(space_time_diagram(device, word, args.rounds))
    if isinstance(device, CounterMachine):
        ok = machine_accepts(device, word)
        print("Accept" if ok else "Reject")
        return 0 if ok else 1
    verdict = da_accepts(device, word, args.rounds)
    print(verdict)
    return 0 if verdict is Verdict.ACCEPT else 1


def cmd_classify(args) -> int:
    device = _device(args.device, args.seed)
    for key, value in device_facts(device).as_dict().items():
        shown = str(value).lower() if isinstance(value, bool) else value
        print(f"{key.replace('_', '-')}: {shown}")
    return 0


def cmd_translate(args) -> int:
    device = _device(args.device, args.seed)
    wants = DistributedAutomaton if args.pass_name == "da-to-cm" else CounterMachine
    if not isinstance(device, wants):
        kind = "distributed automaton" if wants is DistributedAutomaton else "counter machine"
        raise UsageError(f"pass {args.pass_name} needs a {kind}")
    if args.pass_name == "chain":
        stages = run_chain(device)
        certs = [s.certificate for s in stages]
        result = stages[-1].device
    else:
        result, cert = PASSES[args.pass_name](device)
        certs = [cert]
    failed = False
    for cert in certs:
        print(cert.summary(), file=sys.stderr)
        failed = failed or bool(cert.check())
    _emit(serialize_device(result), args.output)
    return 1 if failed else 0


def cmd_equiv(args) -> int:
    a = _device(args.a, args.seed)
    b = _device(args.b, args.seed)
    if tuple(a.alphabet) != tuple(b.alphabet):
        raise UsageError(f"alphabets differ: {tuple(a.alphabet)} vs {tuple(b.alphabet)}")
    if args.max_len < 1:
        raise UsageError("--max-len must be at least 1")
    verdict = check_equivalence(a, b, a.alphabet, args.max_len)
    print(verdict)
    return 0 if verdict.equivalent else 1


def cmd_diagram(args) -> int:
    device = _device(args.device, args.seed)
    _emit(space_time_diagram(device, device.alphabet.word(args.word), args.rounds) + "\n", args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pathlock",
                                     description="Counter machines and distributed automata on paths.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_device(p):
        p.add_argument("--device", "-d", required=True, help="device JSON file, or random-da / random-cm")
        p.add_argument("--seed", type=int, help="seed for random devices")
        return p

    p = with_device(sub.add_parser("simulate", help="run a device on a word"))
    p.add_argument("--word", "-w", required=True)
    p.add_argument("--rounds", type=int, help="round budget (automata) or steps shown (machines)")
    p.add_argument("--diagram", action="store_true", help="print the run before the verdict")
    p.set_defaults(func=cmd_simulate)

    p = with_device(sub.add_parser("classify", help="print structural facts"))
    p.set_defaults(func=cmd_classify)

    p = with_device(sub.add_parser("translate", help="apply a translation pass"))
    p.add_argument("--pass", dest="pass_name", required=True, choices=[*PASSES, "chain"])
    p.add_argument("-o", "--output", help="output file (default stdout)")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("equiv", help="compare two devices on all short words")
    p.add_argument("-a", "--a", dest="a", required=True)
    p.add_argument("-b", "--b", dest="b", required=True)
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_equiv)

    p = with_device(sub.add_parser("diagram", help="print a space-time diagram"))
    p.add_argument("--word", "-w", required=True)
    p.add_argument("--rounds", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_diagram)
    return parser


def cli_main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, PathlockError) as exc:
        print(f"pathlock: error: {exc}", file=sys.stderr)
        diagnostics = getattr(exc, "diagnostics", None)
        if isinstance(diagnostics, list):
            for line in diagnostics[:20]:
                print(f"  {line}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())
