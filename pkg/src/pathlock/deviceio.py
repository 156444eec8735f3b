"""JSON device documents: parsing with validation, and canonical serialization."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .counter import CounterMachine, DefaultRule, Expr, Rule, Update, validate_machine
from .distributed import DistributedAutomaton, validate_automaton
from .errors import DeviceFormatError
from .words import Alphabet

MACHINE = "counter-machine"
AUTOMATON = "distributed-automaton"
NONE = "#none"
WILD = "*"


# -- serialization -------------------------------------------------------------------

def _update_doc(update: Update) -> dict:
    return {c: {"vars": list(e.vars), "const": e.const} for c, e in update.items()}


def _metadata(device) -> dict:
    return {"name": device.name, "provenance": list(device.provenance)}


class _Raw(str):
    """Pre-rendered JSON fragment spliced into a transition line."""


def machine_to_doc(m: CounterMachine) -> dict:
    state_rank = {q: i for i, q in enumerate(m.states)}
    symbol_rank = {s: i for i, s in enumerate(m.alphabet)}

    def key(rule: Rule):
        guard = tuple((1, 0) if g is None else (0, g) for g in rule.guard)
        return state_rank.get(rule.source, len(state_rank)), rule.source, guard, symbol_rank.get(rule.symbol, -1)

    # large machines repeat a few guards and updates many times over
    guards: dict[tuple, _Raw] = {}
    updates: dict[Update, _Raw] = {}
    transitions = []
    for r in sorted(m.rules, key=key):
        g = guards.get(r.guard)
        if g is None:
            g = guards[r.guard] = _Raw(_compact({c: (WILD if v is None else v)
                                                  for c, v in zip(m.counters, r.guard)}))
        u = updates.get(r.update)
        if u is None:
            u = updates[r.update] = _Raw(_compact(_update_doc(r.update)))
        transitions.append({"from": r.source, "guard": g, "symbol": r.symbol, "to": r.target, "update": u})
    doc = {
        "kind": MACHINE,
        "alphabet": list(m.alphabet),
        "states": list(m.states),
        "counters": list(m.counters),
        "initial": m.initial,
        "access": m.access,
        "accepting": [q for q in m.states if q in m.accepting],
        "transitions": transitions,
        "metadata": _metadata(m),
    }
    if m.default is not None:
        doc["default"] = {"to": m.default.target, "update": _update_doc(m.default.update)}
    return doc


def _transition_line(t: dict) -> str:
    if isinstance(t.get("guard"), _Raw):
        return (f'{{"from": {_compact(t["from"])}, "guard": {t["guard"]}, "symbol": {_compact(t["symbol"])}, '
                f'"to": {_compact(t["to"])}, "update": {t["update"]}}}')
    return _compact(t)


def automaton_to_doc(a: DistributedAutomaton) -> dict:
    rank = {q: i for i, q in enumerate(a.states)}

    def pred_key(p):
        return (0, 0) if p is None else (1, rank.get(p, -1)) if p != WILD else (2, 0)

    entries = [(p, q, t) for (p, q), t in a.table.items()]
    entries += [(WILD, q, t) for q, t in a.any_pred.items()]
    entries += [(p, WILD, t) for p, t in a.any_self.items()]
    entries.sort(key=lambda e: ((1, 0) if e[1] == WILD else (0, rank.get(e[1], -1)), pred_key(e[0])))
    doc = {
        "kind": AUTOMATON,
        "alphabet": list(a.alphabet),
        "states": list(a.states),
        "initial": {s: a.init[s] for s in a.alphabet if s in a.init},
        "accepting": [q for q in a.states if q in a.accepting],
        "transitions": [{"pred": NONE if p is None else p, "self": q, "to": t} for p, q, t in entries],
        "metadata": _metadata(a),
    }
    if a.default is not None:
        doc["default"] = {"to": a.default}
    if a.rule is not None:
        doc = automaton_to_doc(a.materialize())
    return doc


def serialize_device(device) -> str:
    if isinstance(device, CounterMachine):
        doc = machine_to_doc(device)
    elif isinstance(device, DistributedAutomaton):
        doc = automaton_to_doc(device)
    else:
        raise TypeError(f"not a device: {type(device).__name__}")
    return render_document(doc)


def _compact(value) -> str:
    return json.dumps(value, sort_keys=True, ensure_ascii=False)


def render_document(doc: dict) -> str:
    """Canonical text: sorted top-level keys one per line, one transition per line.

    Keeps large tables diffable line by line and lets the C JSON encoder do
    the work, which an indented dump would not.
    """
    lines = ["{"]
    keys = sorted(doc)
    for i, key in enumerate(keys):
        comma = "," if i < len(keys) - 1 else ""
        value = doc[key]
        if key == "transitions" and value:
            lines.append(f"  {_compact(key)}: [")
            body = [_transition_line(t) for t in value]
            lines.extend(f"    {t}," for t in body[:-1])
            lines.append(f"    {body[-1]}")
            lines.append(f"  ]{comma}")
        else:
            lines.append(f"  {_compact(key)}: {_compact(value)}{comma}")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- parsing ----------------------------------------------------------------------------

def _require(doc: dict, key: str, kind: type | tuple, where: str = "document") -> Any:
    if key not in doc:
        raise DeviceFormatError(f"{where} is missing {key!r}")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise DeviceFormatError(f"{where}: {key!r} has the wrong type ({type(value).__name__})")
    return value


def _strings(value: Any, what: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise DeviceFormatError(f"{what} must be an array of strings")
    return value


def _integer(value: Any, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise DeviceFormatError(f"{what} must be an integer, got {value!r}")
    return value


def _update(doc: Any, where: str, memo: dict | None = None) -> Update:
    if not isinstance(doc, dict):
        raise DeviceFormatError(f"{where}: update must be an object")
    if memo is not None:
        try:
            key = tuple((c, tuple(e["vars"]), e["const"]) for c, e in doc.items())
            hit = memo.get(key)
        except (TypeError, KeyError):
            key, hit = None, None
        if hit is not None:
            return hit
        result = _update(doc, where)
        if key is not None:
            memo[key] = result
        return result
    exprs = {}
    for c, e in doc.items():
        if not isinstance(e, dict) or set(e) != {"vars", "const"}:
            raise DeviceFormatError(f"{where}: expression for {c!r} needs exactly 'vars' and 'const'")
        exprs[c] = Expr(tuple(_strings(e["vars"], f"{where}: vars of {c!r}")),
                        _integer(e["const"], f"{where}: const of {c!r}"))
    return Update.of(exprs)


def _machine(doc: dict) -> CounterMachine:
    counters = _strings(_require(doc, "counters", list), "counters")
    rules = []
    updates: dict = {}
    guards: dict = {}
    known = set(counters)
    for i, t in enumerate(_require(doc, "transitions", list)):
        where = f"transition {i}"
        if not isinstance(t, dict):
            raise DeviceFormatError(f"{where} must be an object")
        guard_doc = _require(t, "guard", dict, where)
        guard_key = tuple(guard_doc.items())
        guard = guards.get(guard_key)
        if guard is None:
            unknown = set(guard_doc) - known
            if unknown:
                raise DeviceFormatError(f"{where}: guard mentions unknown counters {sorted(unknown)}")
            values = []
            for c in counters:
                g = guard_doc.get(c, WILD)
                values.append(None if g == WILD else _integer(g, f"{where}: guard for {c!r}"))
            guard = guards[guard_key] = tuple(values)
        rules.append(Rule(_require(t, "from", str, where), guard, _require(t, "symbol", str, where),
                          _require(t, "to", str, where), _update(_require(t, "update", dict, where), where, updates)))
    default = None
    if "default" in doc:
        d = _require(doc, "default", dict)
        default = DefaultRule(_require(d, "to", str, "default"), _update(_require(d, "update", dict, "default"), "default"))
    meta = doc.get("metadata", {})
    return CounterMachine(Alphabet(tuple(_strings(doc["alphabet"], "alphabet"))),
                          tuple(_strings(doc["states"], "states")), tuple(counters),
                          _require(doc, "initial", str), _integer(_require(doc, "access", int), "access"),
                          frozenset(_strings(doc["accepting"], "accepting")), tuple(rules), default,
                          str(meta.get("name", "")), tuple(meta.get("provenance", ())))


def _automaton(doc: dict) -> DistributedAutomaton:
    init = _require(doc, "initial", dict)
    if not all(isinstance(v, str) for v in init.values()):
        raise DeviceFormatError("initial states must be strings")
    table, any_pred, any_self = {}, {}, {}
    default = None
    for i, t in enumerate(_require(doc, "transitions", list)):
        where = f"transition {i}"
        if not isinstance(t, dict):
            raise DeviceFormatError(f"{where} must be an object")
        pred = _require(t, "pred", str, where)
        state = _require(t, "self", str, where)
        target = _require(t, "to", str, where)
        pred = None if pred == NONE else pred
        if pred == WILD and state == WILD:
            target_map, key = None, None
            if default is not None:
                raise DeviceFormatError(f"{where}: duplicate catch-all transition")
            default = target
            continue
        if pred == WILD:
            target_map, key = any_pred, state
        elif state == WILD:
            target_map, key = any_self, pred
        else:
            target_map, key = table, (pred, state)
        if key in target_map and target_map[key] != target:
            raise DeviceFormatError(f"{where}: conflicting duplicate entry")
        target_map[key] = target
    if "default" in doc:
        if default is not None:
            raise DeviceFormatError("both a catch-all transition and a default are given")
        default = _require(_require(doc, "default", dict), "to", str, "default")
    meta = doc.get("metadata", {})
    return DistributedAutomaton(Alphabet(tuple(_strings(doc["alphabet"], "alphabet"))),
                                tuple(_strings(doc["states"], "states")), dict(init),
                                frozenset(_strings(doc["accepting"], "accepting")), table, any_pred,
                                any_self, default, None, str(meta.get("name", "")),
                                tuple(meta.get("provenance", ())))


def parse_device(text: str, *, validate: bool = True):
    """Parse a JSON device document; raises :class:`DeviceFormatError` with diagnostics."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DeviceFormatError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    if not isinstance(doc, dict):
        raise DeviceFormatError("a device document must be a JSON object")
    kind = doc.get("kind")
    for key in ("alphabet", "states", "accepting"):
        _require(doc, key, list)
    try:
        if kind == MACHINE:
            device = _machine(doc)
            diags = validate_machine(device) if validate else []
        elif kind == AUTOMATON:
            device = _automaton(doc)
            diags = validate_automaton(device) if validate else []
        else:
            raise DeviceFormatError(f"unknown device kind {kind!r}")
    except DeviceFormatError:
        raise
    except ValueError as exc:
        raise DeviceFormatError(str(exc)) from None
    if diags:
        raise DeviceFormatError(f"invalid device: {diags[0]}" + (f" (+{len(diags) - 1} more)" if len(diags) > 1 else ""),
                                diagnostics=diags)
    return device


def load_device(path: str | Path):
    return parse_device(Path(path).read_text(encoding="utf-8"))


def save_device(device, path: str | Path) -> None:
    Path(path).write_text(serialize_device(device), encoding="utf-8")
