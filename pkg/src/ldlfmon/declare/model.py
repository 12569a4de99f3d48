"""Declare models: loading, compilation and reasoning services."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Any, Iterable, Sequence

import jsonschema

from ..automata import (
    Alphabet, Dfa, check_satisfiable, coaccessible_states, combine, determinize,
    formula_dfa, minimize, to_regex,
)
from ..formula import Box, LdlfFormula, And, Not, Or, atoms, conj, ltlf_to_ldlf, Eventually, LtlProp, PAtom
from ..monitor import Monitor, RvFormulaSet, rv_formulas
from ..syntax import ParseError, parse_ldlf
from .metaconstraints import (
    MetaExpr, MetaSyntaxError, RefAtom, VerdictAtom, compile_bool, parse_expectation,
    parse_precondition, referenced_ids,
)
from .patterns import PATTERNS, UnknownPattern, instantiate_pattern

__all__ = [
    "ModelError", "InconsistentModel", "Constraint", "Metaconstraint", "DeclareModel",
    "MODEL_SCHEMA", "compile_metaconstraint", "check_consistency", "dead_tasks",
    "EnactmentInfo", "enactment_info", "rising_edge",
]


class ModelError(ValueError):
    """Invalid model document; ``path`` locates the offending JSON value."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class InconsistentModel(ValueError):
    pass


MODEL_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["tasks"],
    "additionalProperties": False,
    "properties": {
        "tasks": {"type": "array", "minItems": 1, "items": {"type": "string"}},
        "constraints": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string"},
                    "pattern": {"type": "string", "enum": sorted(PATTERNS)},
                    "params": {"type": "array", "items": {"type": "string"}},
                    "formula": {"type": "string"},
                    "active": {"type": "boolean"},
                },
                "oneOf": [
                    {"required": ["pattern", "params"], "not": {"required": ["formula"]}},
                    {"required": ["formula"], "not": {"anyOf": [{"required": ["pattern"]},
                                                                {"required": ["params"]}]}},
                ],
            },
        },
        "metaconstraints": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["pre", "exp"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string"},
                    "pre": {"type": "string"},
                    "exp": {"type": "string"},
                    "guarded": {"type": "boolean"},
                },
            },
        },
    },
}


@dataclass(frozen=True)
class Constraint:
    id: str
    formula: LdlfFormula
    pattern: str | None = None
    params: tuple[str, ...] = ()
    active: bool = True

    @property
    def label(self) -> str:
        if self.pattern is not None:
            return f"{self.pattern}({', '.join(self.params)})"
        return str(self.formula)


@dataclass(frozen=True)
class Metaconstraint:
    id: str
    pre: MetaExpr
    exp: MetaExpr
    guarded: bool = False
    pre_text: str = ""
    exp_text: str = ""

    @property
    def label(self) -> str:
        arrow = "-> [re]" if self.guarded else "->"
        return f"{{{self.pre_text}}} {arrow} {self.exp_text}"


@dataclass
class DeclareModel:
    """Constraints and metaconstraints over a task alphabet.

    ``active`` constraints take part in the model conjunction used by the
    reasoning services; inactive ones can only be referenced from
    metaconstraints. Every constraint and metaconstraint is monitored.
    """

    tasks: tuple[str, ...]
    constraints: list[Constraint] = field(default_factory=list)
    metaconstraints: list[Metaconstraint] = field(default_factory=list)
    max_states: int | None = None

    def __post_init__(self):
        self.tasks = tuple(self.tasks)
        self.alphabet = Alphabet.of_tasks(self.tasks)
        ids = [c.id for c in self.constraints] + [m.id for m in self.metaconstraints]
        dup = {x for x in ids if ids.count(x) > 1}
        if dup:
            raise ModelError(f"duplicate ids: {', '.join(sorted(dup))}")
        self._by_id = {c.id: c for c in self.constraints}
        self._rv: dict[str, RvFormulaSet] = {}
        self._dfa: dict[str, Dfa] = {}
        self._compiled: dict[str, LdlfFormula] = {}
        for m in self.metaconstraints:
            for ref in referenced_ids(m.pre) + referenced_ids(m.exp):
                if ref not in self._by_id:
                    raise ModelError(f"metaconstraint {m.id!r} refers to unknown constraint {ref!r}")

    # -- loading -----------------------------------------------------------

    @classmethod
    def from_dict(cls, data: Any, max_states: int | None = None) -> "DeclareModel":
        validator = jsonschema.Draft202012Validator(MODEL_SCHEMA)
        errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
        if errors:
            err = errors[0]
            raise ModelError(err.message, err.json_path)
        tasks = data["tasks"]
        for i, t in enumerate(tasks):
            if not isinstance(t, str) or not _valid_name(t):
                raise ModelError(f"invalid task name {t!r}", f"$.tasks[{i}]")
        if len(set(tasks)) != len(tasks):
            raise ModelError("task names must be distinct", "$.tasks")
        alphabet = Alphabet.of_tasks(tasks)
        constraints = []
        for i, c in enumerate(data.get("constraints", [])):
            path = f"$.constraints[{i}]"
            active = c.get("active", True)
            if "pattern" in c:
                try:
                    f = instantiate_pattern(c["pattern"], c["params"], alphabet)
                except UnknownPattern as exc:
                    raise ModelError(str(exc), f"{path}.pattern") from None
                except ValueError as exc:
                    raise ModelError(str(exc), f"{path}.params") from None
                constraints.append(Constraint(c["id"], f, c["pattern"], tuple(c["params"]), active))
            else:
                try:
                    f = parse_ldlf(c["formula"])
                except ParseError as exc:
                    raise ModelError(str(exc), f"{path}.formula") from None
                unknown = sorted(atoms(f) - set(tasks))
                if unknown:
                    raise ModelError(f"formula mentions unknown task(s): {', '.join(unknown)}",
                                     f"{path}.formula")
                constraints.append(Constraint(c["id"], f, active=active))
        metas = []
        for i, m in enumerate(data.get("metaconstraints", [])):
            path = f"$.metaconstraints[{i}]"
            try:
                pre = parse_precondition(m["pre"])
            except MetaSyntaxError as exc:
                raise ModelError(str(exc), f"{path}.pre") from None
            try:
                exp = parse_expectation(m["exp"])
            except MetaSyntaxError as exc:
                raise ModelError(str(exc), f"{path}.exp") from None
            metas.append(Metaconstraint(m.get("id", f"meta{i + 1}"), pre, exp,
                                        m.get("guarded", False), m["pre"], m["exp"]))
        known = {c.id for c in constraints}
        for i, m in enumerate(metas):
            for side, expr in (("pre", m.pre), ("exp", m.exp)):
                for ref in referenced_ids(expr):
                    if ref not in known:
                        raise ModelError(f"unknown constraint id {ref!r}",
                                         f"$.metaconstraints[{i}].{side}")
        return cls(tuple(tasks), constraints, metas, max_states)

    @classmethod
    def from_json(cls, text: str, max_states: int | None = None) -> "DeclareModel":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None
        return cls.from_dict(data, max_states)

    @classmethod
    def load(cls, path: str | Path, max_states: int | None = None) -> "DeclareModel":
        return cls.from_json(Path(path).read_text(encoding="utf-8"), max_states)

    # -- compilation -------------------------------------------------------

    def constraint(self, cid: str) -> Constraint:
        try:
            return self._by_id[cid]
        except KeyError:
            raise KeyError(f"unknown constraint id {cid!r}") from None

    def rv_formula_set(self, cid: str) -> RvFormulaSet:
        hit = self._rv.get(cid)
        if hit is None:
            hit = self._rv[cid] = rv_formulas(self.constraint(cid).formula, self.alphabet,
                                              self.max_states)
        return hit

    def formula(self, rid: str) -> LdlfFormula:
        """Formula of a constraint or (compiled) metaconstraint."""
        if rid in self._by_id:
            return self._by_id[rid].formula
        for m in self.metaconstraints:
            if m.id == rid:
                hit = self._compiled.get(rid)
                if hit is None:
                    hit = self._compiled[rid] = compile_metaconstraint(m, self)
                return hit
        raise KeyError(f"unknown id {rid!r}")

    def row_ids(self) -> list[str]:
        return [c.id for c in self.constraints] + [m.id for m in self.metaconstraints]

    def label(self, rid: str) -> str:
        if rid in self._by_id:
            return self._by_id[rid].label
        return next(m.label for m in self.metaconstraints if m.id == rid)

    def dfa(self, rid: str) -> Dfa:
        hit = self._dfa.get(rid)
        if hit is None:
            hit = self._dfa[rid] = formula_dfa(self.formula(rid), self.alphabet, self.max_states)
        return hit

    def monitors(self) -> dict[str, Monitor]:
        return {rid: Monitor(self.dfa(rid), self.formula(rid)) for rid in self.row_ids()}

    def enforced_ids(self) -> list[str]:
        return [c.id for c in self.constraints if c.active] + [m.id for m in self.metaconstraints]

    def conjunction(self) -> LdlfFormula:
        return conj(self.formula(rid) for rid in self.enforced_ids())

    def conjunction_dfa(self) -> Dfa:
        hit = self._dfa.get("")
        if hit is None:
            dfas = [self.dfa(rid) for rid in self.enforced_ids()]
            if dfas:
                hit = reduce(lambda x, y: minimize(combine(x, y, "and")), dfas)
            else:
                hit = formula_dfa(conj([]), self.alphabet)
            self._dfa[""] = hit
        return hit


def _valid_name(name: str) -> bool:
    from ..formula import valid_identifier

    return valid_identifier(name)


# --------------------------------------------------------------------------
# metaconstraints


def rising_edge(d: Dfa) -> Dfa:
    """Traces accepted by ``d`` whose longest proper prefix is rejected.

    The empty trace qualifies when it is accepted.
    """
    width = len(d.alphabet)
    start = (d.initial, False)
    index = {start: 0}
    pairs = [start]
    rows = []
    i = 0
    while i < len(pairs):
        q, _ = pairs[i]
        row = []
        for k in range(width):
            t = (d.transitions[q][k], q in d.accepting)
            if t not in index:
                index[t] = len(pairs)
                pairs.append(t)
            row.append(index[t])
        rows.append(tuple(row))
        i += 1
    accepting = frozenset(j for j, (q, prev) in enumerate(pairs) if q in d.accepting and not prev)
    return minimize(Dfa(d.alphabet, tuple(pairs), 0, tuple(rows), accepting))


def compile_metaconstraint(mc: Metaconstraint, model: DeclareModel) -> LdlfFormula:
    """An ordinary LDLf formula for ``mc``.

    Each ``[c] = v`` atom becomes the verdict formula for ``v`` of
    constraint ``c``. The guarded form asks for the expectation to hold from
    every point where the precondition switches from false to true.
    """
    def pre_atom(a):
        if not isinstance(a, VerdictAtom):
            raise ModelError("preconditions use '[id] = verdict' atoms")
        return model.rv_formula_set(a.constraint)[a.verdict]

    def exp_atom(a):
        if not isinstance(a, RefAtom):
            raise ModelError("expectations refer to constraint ids only")
        return model.constraint(a.constraint).formula

    pre = compile_bool(mc.pre, pre_atom)
    exp = compile_bool(mc.exp, exp_atom)
    if not mc.guarded:
        return Or(Not(pre), exp)
    guard_re = to_regex(rising_edge(formula_dfa(pre, model.alphabet, model.max_states)))
    return Or(Not(pre), Box(guard_re, exp))


# --------------------------------------------------------------------------
# reasoning services


def check_consistency(model: DeclareModel) -> bool:
    """Whether some task trace satisfies every enforced constraint."""
    return check_satisfiable(model.conjunction(), model.alphabet, model.max_states)


def dead_tasks(model: DeclareModel) -> list[str]:
    """Tasks that occur in no trace satisfying the model."""
    if not check_consistency(model):
        raise InconsistentModel("the model is inconsistent, so every task is trivially dead")
    base = model.conjunction()
    dead = []
    for t in model.tasks:
        occurs = ltlf_to_ldlf(Eventually(LtlProp(PAtom(t))))
        if not check_satisfiable(And(base, occurs), model.alphabet, model.max_states):
            dead.append(t)
    return dead


@dataclass(frozen=True)
class EnactmentInfo:
    legal: tuple[str, ...]
    pending: tuple[str, ...]
    can_end: bool


def enactment_info(model: DeclareModel, events: Sequence[str]) -> EnactmentInfo:
    """Which tasks may come next, which constraints still wait, and whether to stop."""
    d = model.conjunction_dfa()
    live = coaccessible_states(d)
    word = [model.alphabet.symbol_for(e) for e in events]
    q = d.run(word)
    legal = tuple(t for t, k in zip(model.tasks, _task_indices(model))
                  if d.transitions[q][k] in live)
    pending = []
    for rid, m in model.monitors().items():
        m.run(events)
        if not m.accepting:
            pending.append(rid)
    return EnactmentInfo(legal, tuple(pending), q in d.accepting)


def _task_indices(model: DeclareModel) -> list[int]:
    return [model.alphabet.index(frozenset({t})) for t in model.tasks]
