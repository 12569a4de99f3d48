"""Automaton data types."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .alphabet import LAST, Alphabet, UnknownSymbol

__all__ = ["Nfa", "Dfa", "UnknownSymbol", "accepts", "reachable_states", "coaccessible_states"]


@dataclass(frozen=True, eq=False)
class Nfa:
    """Nondeterministic automaton with states ``0..n-1``.

    ``transitions[q][k]`` is the set of successors of ``q`` on the ``k``-th
    symbol of :attr:`symbols`. When ``marked`` is set the symbols are those
    of ``alphabet.with_last()``, i.e. every base symbol also comes in a
    variant flagged as the final step.
    """

    alphabet: Alphabet
    labels: tuple[Hashable, ...]
    initial: frozenset[int]
    transitions: tuple[tuple[frozenset[int], ...], ...]
    accepting: frozenset[int]
    marked: bool = False

    def __post_init__(self):
        if not self.initial:
            raise ValueError("an automaton needs at least one initial state")
        width = len(self.symbols)
        n = len(self.labels)
        if len(self.transitions) != n or any(len(row) != width for row in self.transitions):
            raise ValueError("transition table does not match states and symbols")
        if any(q >= n for row in self.transitions for succ in row for q in succ):
            raise ValueError("transition to an unknown state")

    @property
    def symbols(self) -> tuple[frozenset[str], ...]:
        return self.alphabet.with_last() if self.marked else self.alphabet.symbols

    @property
    def num_states(self) -> int:
        return len(self.labels)

    @property
    def num_transitions(self) -> int:
        return sum(len(s) for row in self.transitions for s in row)

    def symbol_index(self, sym: frozenset) -> int:
        if self.marked:
            base = self.alphabet.index(sym - {LAST})
            return 2 * base + (LAST in sym)
        return self.alphabet.index(sym)

    def successors(self, states: Iterable[int], k: int) -> frozenset[int]:
        out: set[int] = set()
        for q in states:
            out |= self.transitions[q][k]
        return frozenset(out)

    def edges(self):
        for q, row in enumerate(self.transitions):
            for k, succ in enumerate(row):
                for p in succ:
                    yield q, k, p


@dataclass(frozen=True, eq=False)
class Dfa:
    """Deterministic automaton with a total transition table.

    ``transitions[q][k]`` is the successor of ``q`` on the ``k``-th symbol of
    the alphabet. Equality compares the tables and ignores state labels, so
    two canonically numbered minimal DFAs are equal iff their languages are.
    """

    alphabet: Alphabet
    labels: tuple[Hashable, ...]
    initial: int
    transitions: tuple[tuple[int, ...], ...]
    accepting: frozenset[int]

    def __post_init__(self):
        n, width = len(self.labels), len(self.alphabet)
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        if len(self.transitions) != n or any(len(row) != width for row in self.transitions):
            raise ValueError("transition table must be total")
        if any(not 0 <= p < n for row in self.transitions for p in row):
            raise ValueError("transition to an unknown state")

    def _table(self):
        return self.alphabet, self.initial, self.transitions, self.accepting

    def __eq__(self, other) -> bool:
        return isinstance(other, Dfa) and self._table() == other._table()

    def __hash__(self) -> int:
        return hash(self._table())

    @property
    def symbols(self) -> tuple[frozenset[str], ...]:
        return self.alphabet.symbols

    @property
    def num_states(self) -> int:
        return len(self.labels)

    @property
    def num_transitions(self) -> int:
        return len(self.labels) * len(self.alphabet)

    def symbol_index(self, sym: frozenset) -> int:
        return self.alphabet.index(sym)

    def run(self, word: Sequence[frozenset], start: int | None = None) -> int:
        q = self.initial if start is None else start
        for sym in word:
            q = self.transitions[q][self.alphabet.index(frozenset(sym))]
        return q

    def edges(self):
        for q, row in enumerate(self.transitions):
            for k, p in enumerate(row):
                yield q, k, p


def accepts(a: Nfa | Dfa, trace: Iterable[Iterable[str]]) -> bool:
    """Standard run acceptance; raises :class:`UnknownSymbol` off-alphabet."""
    word = [frozenset(s) for s in trace]
    if isinstance(a, Dfa):
        return a.run(word) in a.accepting
    current = a.initial
    for sym in word:
        current = a.successors(current, a.symbol_index(sym))
    return bool(current & a.accepting)


def _neighbours(a: Nfa | Dfa, q: int):
    if isinstance(a, Dfa):
        return a.transitions[q]
    return (p for succ in a.transitions[q] for p in succ)


def reachable_states(a: Nfa | Dfa) -> list[int]:
    """States reachable from the initial state(s), in breadth-first order."""
    start = [a.initial] if isinstance(a, Dfa) else sorted(a.initial)
    seen = set(start)
    order = list(start)
    queue = deque(start)
    while queue:
        q = queue.popleft()
        for p in _neighbours(a, q):
            if p not in seen:
                seen.add(p)
                order.append(p)
                queue.append(p)
    return order


def coaccessible_states(a: Nfa | Dfa) -> frozenset[int]:
    """States from which an accepting state is reachable in zero or more steps."""
    preds: list[set[int]] = [set() for _ in range(a.num_states)]
    for q, _, p in a.edges():
        preds[p].add(q)
    seen = set(a.accepting)
    stack = list(seen)
    while stack:
        p = stack.pop()
        for q in preds[p]:
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return frozenset(seen)

