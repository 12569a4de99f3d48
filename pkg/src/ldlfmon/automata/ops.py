"""Subset construction, minimization, boolean combinations and prefix closure."""
from __future__ import annotations

from collections import deque
from typing import Callable

from .construction import StateLimitExceeded, default_max_states
from .core import Dfa, Nfa, coaccessible_states, reachable_states

__all__ = [
    "determinize", "minimize", "combine", "complement", "equivalent",
    "is_empty", "prefix_automaton", "intersect", "union",
]


def determinize(a: Nfa, max_states: int | None = None) -> Dfa:
    """Subset construction; the empty subset is kept as an explicit dead state."""
    limit = default_max_states() if max_states is None else max_states
    if a.marked:
        raise ValueError("determinize the automaton after removing the last marker")
    width = len(a.alphabet)
    start = frozenset(a.initial)
    index = {start: 0}
    subsets = [start]
    rows: list[tuple[int, ...]] = []
    queue = deque([start])
    while queue:
        s = queue.popleft()
        row = []
        for k in range(width):
            t = a.successors(s, k)
            if t not in index:
                if len(subsets) >= limit:
                    raise StateLimitExceeded(limit)
                index[t] = len(subsets)
                subsets.append(t)
                queue.append(t)
            row.append(index[t])
        rows.append(tuple(row))
    accepting = frozenset(i for i, s in enumerate(subsets) if s & a.accepting)
    return Dfa(a.alphabet, tuple(subsets), 0, tuple(rows), accepting)


def _renumber(d: Dfa, blocks: list[int] | None = None) -> Dfa:
    """Canonical breadth-first numbering (symbols in alphabet order) of the
    reachable part, optionally after merging states into ``blocks``."""
    cls = blocks if blocks is not None else list(range(d.num_states))
    members: dict[int, list[int]] = {}
    for q in range(d.num_states):
        members.setdefault(cls[q], []).append(q)
    start = cls[d.initial]
    order = {start: 0}
    queue = deque([start])
    rows: list[tuple[int, ...]] = []
    while queue:
        b = queue.popleft()
        rep = members[b][0]
        row = []
        for p in d.transitions[rep]:
            c = cls[p]
            if c not in order:
                order[c] = len(order)
                queue.append(c)
            row.append(order[c])
        rows.append(tuple(row))
    inverse = sorted(order, key=order.get)
    accepting = frozenset(order[b] for b in inverse if members[b][0] in d.accepting)
    return Dfa(d.alphabet, tuple(range(len(inverse))), 0, tuple(rows), accepting)


def minimize(d: Dfa) -> Dfa:
    """Hopcroft partition refinement followed by canonical renumbering.

    Two minimized DFAs over the same alphabet accept the same language iff
    their transition tables and accepting sets are identical.
    """
    d = _renumber(d)  # drop unreachable states first
    n, width = d.num_states, len(d.alphabet)
    inverse: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(width)]
    for q, k, p in d.edges():
        inverse[k][p].append(q)

    final = set(d.accepting)
    rest = set(range(n)) - final
    partition = [b for b in (final, rest) if b]
    block_of = [0] * n
    for i, b in enumerate(partition):
        for q in b:
            block_of[q] = i
    work = set(range(len(partition)))
    # only one of the two initial blocks needs to be a splitter
    if len(partition) == 2:
        work = {0 if len(partition[0]) <= len(partition[1]) else 1}

    while work:
        splitter = partition[work.pop()]
        for k in range(width):
            pre = {q for p in splitter for q in inverse[k][p]}
            if not pre:
                continue
            touched: dict[int, set[int]] = {}
            for q in pre:
                touched.setdefault(block_of[q], set()).add(q)
            for i, inside in touched.items():
                block = partition[i]
                if len(inside) == len(block):
                    continue
                outside = block - inside
                partition[i] = inside
                j = len(partition)
                partition.append(outside)
                for q in outside:
                    block_of[q] = j
                if i in work:
                    work.add(j)
                else:
                    work.add(i if len(inside) <= len(outside) else j)
    return _renumber(d, block_of)


_OPS: dict[str, Callable[[bool, bool], bool]] = {
    "and": lambda x, y: x and y,
    "or": lambda x, y: x or y,
    "and-not": lambda x, y: x and not y,
    "xor": lambda x, y: x != y,
}


def combine(d1: Dfa, d2: Dfa, op: str) -> Dfa:
    """Product automaton for ``op`` in ``and``, ``or``, ``and-not``, ``xor``."""
    if d1.alphabet != d2.alphabet:
        raise ValueError("cannot combine automata over different alphabets")
    try:
        accept = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}; expected one of {sorted(_OPS)}") from None
    width = len(d1.alphabet)
    start = (d1.initial, d2.initial)
    index = {start: 0}
    pairs = [start]
    rows = []
    queue = deque([start])
    while queue:
        p, q = queue.popleft()
        row = []
        for k in range(width):
            t = (d1.transitions[p][k], d2.transitions[q][k])
            if t not in index:
                index[t] = len(pairs)
                pairs.append(t)
                queue.append(t)
            row.append(index[t])
        rows.append(tuple(row))
    accepting = frozenset(i for i, (p, q) in enumerate(pairs)
                          if accept(p in d1.accepting, q in d2.accepting))
    return Dfa(d1.alphabet, tuple(pairs), 0, tuple(rows), accepting)


def intersect(d1: Dfa, d2: Dfa) -> Dfa:
    return combine(d1, d2, "and")


def union(d1: Dfa, d2: Dfa) -> Dfa:
    return combine(d1, d2, "or")


def complement(d: Dfa) -> Dfa:
    return Dfa(d.alphabet, d.labels, d.initial, d.transitions,
               frozenset(range(d.num_states)) - d.accepting)


def is_empty(a: Nfa | Dfa) -> bool:
    return not any(q in a.accepting for q in reachable_states(a))


def equivalent(d1: Dfa, d2: Dfa) -> bool:
    return is_empty(combine(d1, d2, "xor"))


def prefix_automaton(a: Nfa | Dfa) -> Nfa | Dfa:
    """Same automaton with every coaccessible state made accepting."""
    live = coaccessible_states(a)
    if isinstance(a, Dfa):
        return Dfa(a.alphabet, a.labels, a.initial, a.transitions, live)
    return Nfa(a.alphabet, a.labels, a.initial, a.transitions, live, a.marked)
