"""Catalog of Declare constraint patterns."""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Iterable, Sequence

from ..automata import Alphabet
from ..formula import (
    FALSE, Always, LdlfFormula, LtlAnd, LtlNot, LtlOr, LtlProp, PathExpr, PAtom, POr,
    ltlf_to_ldlf, rename_atoms, substitute_letters,
)
from ..monitor import RvVerdict
from ..semantics import as_trace
from ..syntax import parse_ltlf, parse_path

__all__ = [
    "Pattern", "PATTERNS", "get_pattern", "instantiate_pattern", "pattern_prefix_regex",
    "possible_rv_states", "task_trace", "declare_assumption", "UnknownPattern",
]

T, F, TT_ = RvVerdict.TRUE, RvVerdict.FALSE, RvVerdict.TEMP_TRUE
TF = RvVerdict.TEMP_FALSE


class UnknownPattern(ValueError):
    pass


@dataclass(frozen=True)
class Pattern:
    """A parametric LTLf template over placeholders ``a`` (and ``b``).

    ``pref`` is a regular expression for the possibly-good prefixes in which
    ``o`` stands for any task that is not a parameter.
    """

    name: str
    arity: int
    ltlf: str
    pref: str
    states: frozenset[RvVerdict]


_ROWS = [
    Pattern("existence", 1, "F a", "(a+o)*", frozenset({TF, T})),
    Pattern("absence2", 1, "!F(a & X F a)", "o* + (o*;a;o*)", frozenset({TT_, F})),
    Pattern("choice", 2, "F a | F b", "(a+b+o)*", frozenset({TF, T})),
    Pattern("exclusive_choice", 2, "(F a | F b) & !(F a & F b)", "(a+o)* + (b+o)*",
            frozenset({TF, TT_, F})),
    Pattern("responded_existence", 2, "F a -> F b", "(a+b+o)*", frozenset({TT_, TF, T})),
    Pattern("coexistence", 2, "(F a -> F b) & (F b -> F a)", "(a+b+o)*",
            frozenset({TT_, TF, T})),
    Pattern("response", 2, "G(a -> F b)", "(a+b+o)*", frozenset({TT_, TF})),
    Pattern("precedence", 2, "(!b U a) | !F b", "o*;(a;(a+b+o)*)*", frozenset({TT_, T, F})),
    Pattern("succession", 2, "G(a -> F b) & ((!b U a) | !F b)", "o*;(a;(a+b+o)*)*",
            frozenset({TT_, TF, F})),
    Pattern("not_coexistence", 2, "!(F a & F b)", "(a+o)* + (b+o)*", frozenset({TT_, F})),
    Pattern("negation_succession", 2, "G(a -> !F b)", "(b+o)*;(a+o)*", frozenset({TT_, F})),
]

PATTERNS: dict[str, Pattern] = {p.name: p for p in _ROWS}


def get_pattern(name: str) -> Pattern:
    try:
        return PATTERNS[name]
    except KeyError:
        raise UnknownPattern(f"unknown pattern {name!r}; known: {', '.join(PATTERNS)}") from None


def _check_params(p: Pattern, params: Sequence[str], alphabet: Alphabet | None) -> None:
    if len(params) != p.arity:
        raise ValueError(f"pattern {p.name} takes {p.arity} parameter(s), got {len(params)}")
    if len(set(params)) != len(params):
        raise ValueError(f"parameters of {p.name} must be distinct")
    if alphabet is not None:
        missing = [x for x in params if frozenset({x}) not in alphabet]
        if missing:
            raise ValueError(f"parameter(s) not in the alphabet: {', '.join(missing)}")


def _placeholders(params: Sequence[str]) -> dict[str, PAtom]:
    return {ph: PAtom(x) for ph, x in zip("ab", params)}


def instantiate_pattern(name: str, params: Sequence[str], alphabet: Alphabet | None = None) -> LdlfFormula:
    p = get_pattern(name)
    params = list(params)
    _check_params(p, params, alphabet)
    return ltlf_to_ldlf(rename_atoms(parse_ltlf(p.ltlf), _placeholders(params)))


def pattern_prefix_regex(name: str, params: Sequence[str], alphabet: Alphabet) -> PathExpr:
    """The catalog's prefix regex with ``o`` expanded to the non-parameter tasks."""
    p = get_pattern(name)
    params = list(params)
    _check_params(p, params, alphabet)
    others = [x for x in alphabet.task_names if x not in params]
    mapping = _placeholders(params)
    mapping["o"] = reduce(POr, (PAtom(x) for x in others)) if others else FALSE
    return substitute_letters(parse_path(p.pref), mapping)


def possible_rv_states(name: str) -> frozenset[RvVerdict]:
    return get_pattern(name).states


def task_trace(events: Iterable[str], alphabet: Alphabet | None = None):
    """One singleton interpretation per task occurrence."""
    events = list(events)
    if alphabet is not None:
        for e in events:
            alphabet.symbol_for(e)
    return as_trace({e} for e in events)


def declare_assumption(tasks: Sequence[str]) -> LdlfFormula:
    """Exactly one task per step, as an explicit formula over the tasks."""
    atoms = [LtlProp(PAtom(x)) for x in tasks]
    if not atoms:
        raise ValueError("the assumption needs at least one task")
    some = reduce(LtlOr, atoms)
    excl = [LtlOr(LtlNot(x), LtlNot(y)) for x, y in combinations(atoms, 2)]
    body = reduce(LtlAnd, excl, some)
    return ltlf_to_ldlf(Always(body))
