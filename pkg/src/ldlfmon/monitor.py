"""Four-valued runtime verification verdicts.

Two independent routes are provided. The production route is a minimal DFA
whose states are colored with verdicts, so each event costs one table
lookup. The formula route builds four LDLf formulas, one per verdict, from
regular expressions for the possibly-good prefixes of the formula and of
its negation; exactly one of them holds on any trace.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .automata import (
    Alphabet, Dfa, coaccessible_states, complement, formula_dfa, minimize,
    prefix_automaton, to_regex,
)
from .formula import END, And, Diamond, LdlfFormula, Not, PathExpr, atoms
from .semantics import _Evaluator, as_trace

__all__ = [
    "RvVerdict", "RvFormulaSet", "rv_formulas", "Monitor", "build_monitor",
    "color_states", "rv_classify", "verdict_timeline", "InconsistentVerdict",
]


class RvVerdict(str, enum.Enum):
    TRUE = "true"
    FALSE = "false"
    TEMP_TRUE = "temp_true"
    TEMP_FALSE = "temp_false"

    @property
    def stable(self) -> bool:
        return self in (RvVerdict.TRUE, RvVerdict.FALSE)

    @property
    def satisfied(self) -> bool:
        """Whether the trace seen so far satisfies the formula."""
        return self in (RvVerdict.TRUE, RvVerdict.TEMP_TRUE)

    def __str__(self) -> str:
        return self.value


class InconsistentVerdict(RuntimeError):
    pass


def _alphabet_for(f: LdlfFormula, alphabet: Alphabet | None) -> Alphabet:
    return alphabet if alphabet is not None else Alphabet.for_formula(f)


# --------------------------------------------------------------------------
# formula route


@dataclass(frozen=True)
class RvFormulaSet:
    formula: LdlfFormula
    pref: PathExpr
    pref_neg: PathExpr
    true: LdlfFormula
    false: LdlfFormula
    temp_true: LdlfFormula
    temp_false: LdlfFormula

    def __getitem__(self, verdict: RvVerdict) -> LdlfFormula:
        return getattr(self, RvVerdict(verdict).value)

    def items(self):
        return [(v, self[v]) for v in RvVerdict]


def rv_formulas(f: LdlfFormula, alphabet: Alphabet | None = None,
                max_states: int | None = None) -> RvFormulaSet:
    alphabet = _alphabet_for(f, alphabet)
    d = formula_dfa(f, alphabet, max_states)
    pref = to_regex(prefix_automaton(d))
    pref_neg = to_regex(prefix_automaton(minimize(complement(d))))
    good, good_neg = Diamond(pref, END), Diamond(pref_neg, END)
    return RvFormulaSet(
        formula=f,
        pref=pref,
        pref_neg=pref_neg,
        true=And(good, Not(good_neg)),
        false=And(good_neg, Not(good)),
        temp_true=And(f, good_neg),
        temp_false=And(Not(f), good),
    )


def rv_classify(trace, f: LdlfFormula, alphabet: Alphabet | None = None,
                formulas: RvFormulaSet | None = None) -> RvVerdict:
    """Verdict obtained by evaluating the four verdict formulas on ``trace``."""
    fs = formulas if formulas is not None else rv_formulas(f, alphabet)
    ev = _Evaluator(as_trace(trace))
    hits = [v for v, g in fs.items() if ev.holds(g) >> 1 & 1]
    if len(hits) != 1:
        raise InconsistentVerdict(
            f"expected exactly one verdict formula to hold, got {[str(v) for v in hits]}")
    return hits[0]


# --------------------------------------------------------------------------
# colored automaton route


def color_states(d: Dfa) -> tuple[RvVerdict, ...]:
    """Verdict for every state of a total DFA."""
    can_accept = coaccessible_states(d)
    can_reject = coaccessible_states(complement(d))
    colors = []
    for q in range(d.num_states):
        if q in d.accepting:
            colors.append(RvVerdict.TEMP_TRUE if q in can_reject else RvVerdict.TRUE)
        else:
            colors.append(RvVerdict.TEMP_FALSE if q in can_accept else RvVerdict.FALSE)
    return tuple(colors)


class Monitor:
    """A colored DFA together with a current state."""

    __slots__ = ("dfa", "colors", "formula", "current", "steps")

    def __init__(self, dfa: Dfa, formula: LdlfFormula | None = None,
                 colors: Sequence[RvVerdict] | None = None):
        self.dfa = dfa
        self.colors = tuple(colors) if colors is not None else color_states(dfa)
        if len(self.colors) != dfa.num_states:
            raise ValueError("one color per state is required")
        self.formula = formula
        self.current = dfa.initial
        self.steps = 0

    @classmethod
    def from_dfa(cls, dfa: Dfa, formula: LdlfFormula | None = None) -> "Monitor":
        return cls(dfa, formula)

    @property
    def alphabet(self) -> Alphabet:
        return self.dfa.alphabet

    @property
    def verdict(self) -> RvVerdict:
        return self.colors[self.current]

    def step(self, event) -> RvVerdict:
        """Consume one event (a task name or a set of propositions)."""
        k = self.dfa.alphabet.index(self.dfa.alphabet.symbol_for(event))
        self.current = self.dfa.transitions[self.current][k]
        self.steps += 1
        return self.colors[self.current]

    def run(self, events: Iterable) -> list[RvVerdict]:
        """Verdicts after each of ``events`` (not including the current one)."""
        return [self.step(e) for e in events]

    def reset(self) -> None:
        self.current = self.dfa.initial
        self.steps = 0

    def copy(self) -> "Monitor":
        other = Monitor(self.dfa, self.formula, self.colors)
        other.current, other.steps = self.current, self.steps
        return other

    @property
    def accepting(self) -> bool:
        return self.current in self.dfa.accepting

    def __repr__(self) -> str:
        return f"<Monitor state={self.current} verdict={self.verdict} steps={self.steps}>"


def build_monitor(f: LdlfFormula, alphabet: Alphabet | None = None,
                  max_states: int | None = None) -> Monitor:
    alphabet = _alphabet_for(f, alphabet)
    return Monitor(formula_dfa(f, alphabet, max_states), f)


def verdict_timeline(f: LdlfFormula, trace, alphabet: Alphabet | None = None) -> list[RvVerdict]:
    """Verdicts after 0, 1, ..., n events; entry 0 is the empty-trace verdict."""
    events = list(trace)
    if alphabet is None:
        props = set(atoms(f))
        for e in events:
            props |= {e} if isinstance(e, str) else set(e)
        alphabet = Alphabet.powerset(props)
    m = build_monitor(f, alphabet)
    return [m.verdict] + m.run(events)
