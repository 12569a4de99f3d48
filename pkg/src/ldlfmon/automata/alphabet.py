"""Finite alphabets of propositional interpretations."""
from __future__ import annotations

import itertools
from typing import Iterable

from ..formula import Node, atoms, valid_identifier

__all__ = ["Alphabet", "UnknownSymbol", "LAST", "symbol_key"]

# Marker proposition for "this is the final step". It is a reserved word of
# the formula grammar, so it cannot collide with a user proposition.
LAST = "last"


class UnknownSymbol(ValueError):
    pass


def symbol_key(sym: frozenset) -> tuple:
    return (len(sym), sorted(sym))


class Alphabet:
    """An ordered set of symbols, each a frozenset of proposition names.

    Two flavours are used in practice: the full powerset of a set of
    propositions, and a task alphabet where every symbol is a singleton
    (one task per step).
    """

    __slots__ = ("symbols", "tasks", "_index")

    def __init__(self, symbols: Iterable[Iterable[str]], tasks: bool = False):
        syms = {frozenset(s) for s in symbols}
        if not syms:
            raise ValueError("alphabet must contain at least one symbol")
        for s in syms:
            for p in s:
                if not valid_identifier(p):
                    raise ValueError(f"invalid proposition name in alphabet: {p!r}")
        if tasks and any(len(s) != 1 for s in syms):
            raise ValueError("task alphabets contain singleton symbols only")
        self.symbols: tuple[frozenset[str], ...] = tuple(sorted(syms, key=symbol_key))
        self.tasks = tasks
        self._index = {s: k for k, s in enumerate(self.symbols)}

    @classmethod
    def powerset(cls, props: Iterable[str]) -> "Alphabet":
        ps = sorted(set(props))
        return cls(frozenset(c) for k in range(len(ps) + 1) for c in itertools.combinations(ps, k))

    @classmethod
    def of_tasks(cls, names: Iterable[str]) -> "Alphabet":
        names = list(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate task names")
        return cls(({n} for n in names), tasks=True)

    @classmethod
    def for_formula(cls, *formulas: Node) -> "Alphabet":
        return cls.powerset(set().union(*(atoms(f) for f in formulas)))

    @property
    def props(self) -> frozenset[str]:
        return frozenset().union(*self.symbols)

    @property
    def task_names(self) -> tuple[str, ...]:
        if not self.tasks:
            raise ValueError("not a task alphabet")
        return tuple(next(iter(s)) for s in self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, sym) -> bool:
        return sym in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        if self.tasks:
            return f"Alphabet.of_tasks({list(self.task_names)!r})"
        return f"Alphabet({[sorted(s) for s in self.symbols]!r})"

    def index(self, sym: frozenset) -> int:
        try:
            return self._index[sym]
        except KeyError:
            raise UnknownSymbol(f"symbol {sorted(sym)} is not in the alphabet") from None

    def symbol_for(self, event) -> frozenset[str]:
        """Map an event (a task name or an iterable of propositions) to a symbol."""
        sym = frozenset({event}) if isinstance(event, str) else frozenset(event)
        if sym not in self._index:
            if isinstance(event, str):
                raise UnknownSymbol(f"unknown task {event!r}")
            raise UnknownSymbol(f"interpretation {sorted(sym)} is not in the alphabet")
        return sym

    def with_last(self) -> tuple[frozenset[str], ...]:
        """Each symbol twice: as is, and marked as the final step."""
        return tuple(s | extra for s in self.symbols for extra in (frozenset(), frozenset({LAST})))
