"""Finite automata for LDLf formulas."""
from .alphabet import LAST, Alphabet, UnknownSymbol
from .construction import (
    ENDED, StateLimitExceeded, check_satisfiable, default_max_states,
    formula_automaton, implies, ldlf_to_nfa, strip_last, valid,
)
from .core import Dfa, Nfa, accepts, coaccessible_states, reachable_states
from .delta import (
    B_FALSE, B_TRUE, EPSILON, BAnd, BAtom, BFalse, BOr, BTrue, NotInNnf,
    PositiveBool, delta, minimal_models,
)
from .dot import to_dot
from .ops import (
    combine, complement, determinize, equivalent, intersect, is_empty,
    minimize, prefix_automaton, union,
)
from .regex import NOTHING, guard, to_regex


def formula_dfa(f, alphabet=None, max_states=None) -> Dfa:
    """Minimal DFA over the plain alphabet for the traces satisfying ``f``."""
    return minimize(determinize(formula_automaton(f, alphabet, max_states), max_states))


__all__ = [
    "LAST", "Alphabet", "UnknownSymbol", "ENDED", "StateLimitExceeded",
    "check_satisfiable", "default_max_states", "formula_automaton", "formula_dfa",
    "implies", "ldlf_to_nfa", "strip_last", "valid", "Dfa", "Nfa", "accepts",
    "coaccessible_states", "reachable_states", "B_FALSE", "B_TRUE", "EPSILON",
    "BAnd", "BAtom", "BFalse", "BOr", "BTrue", "NotInNnf", "PositiveBool", "delta",
    "minimal_models", "to_dot", "combine", "complement", "determinize", "equivalent",
    "intersect", "is_empty", "minimize", "prefix_automaton", "union", "NOTHING",
    "guard", "to_regex",
]
