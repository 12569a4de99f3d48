"""Forward construction of an NFA from an LDLf formula."""
from __future__ import annotations

import os
from collections import deque
from itertools import product

from ..formula import And, LdlfFormula, Not, Tt, nnf
from .alphabet import LAST, Alphabet
from .core import Nfa, reachable_states
from .delta import B_TRUE, EPSILON, delta, minimal_models

__all__ = [
    "StateLimitExceeded", "default_max_states", "ldlf_to_nfa", "strip_last",
    "formula_automaton", "check_satisfiable", "valid", "implies", "ENDED",
]

ENDED = "ended"
_ENV_VAR = "LDLFMON_MAX_STATES"
_DEFAULT_MAX_STATES = 1_000_000


class StateLimitExceeded(RuntimeError):
    def __init__(self, limit: int):
        super().__init__(f"automaton construction exceeded {limit} states "
                         f"(raise {_ENV_VAR} to allow more)")
        self.limit = limit


def default_max_states() -> int:
    raw = os.environ.get(_ENV_VAR)
    if raw is None or raw.strip() == "":
        return _DEFAULT_MAX_STATES
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{_ENV_VAR} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{_ENV_VAR} must be a positive integer, got {raw!r}")
    return value


class _Expander:
    """Successor and acceptance computation for sets of atoms, with caching."""

    def __init__(self, symbols):
        self.symbols = symbols
        self._models: dict[tuple, set] = {}
        self._final: dict[LdlfFormula, bool] = {}

    def atom_models(self, psi: LdlfFormula, k: int) -> set:
        key = (psi, k)
        hit = self._models.get(key)
        if hit is None:
            hit = self._models[key] = minimal_models(delta(psi, self.symbols[k]))
        return hit

    def successors(self, state: frozenset, k: int) -> set[frozenset]:
        acc: set[frozenset] = {frozenset()}
        for psi in state:
            ms = self.atom_models(psi, k)
            if not ms:
                return set()
            acc = _minimal({x | y for x, y in product(acc, ms)})
        return {_clean(q) for q in acc}

    def accepting(self, state: frozenset) -> bool:
        for psi in state:
            hit = self._final.get(psi)
            if hit is None:
                hit = self._final[psi] = delta(psi, EPSILON) is B_TRUE
            if not hit:
                return False
        return True


def _minimal(family: set[frozenset]) -> set[frozenset]:
    kept: list[frozenset] = []
    for s in sorted(family, key=len):
        if not any(k <= s for k in kept):
            kept.append(s)
    return set(kept)


def _clean(state: frozenset) -> frozenset:
    # tt is the unit of conjunction; dropping it identifies {tt} with {}
    return frozenset(x for x in state if not isinstance(x, Tt))


def _state_key(state: frozenset) -> tuple[int, ...]:
    return tuple(sorted(x.uid for x in state))


def ldlf_to_nfa(f: LdlfFormula, alphabet: Alphabet | None = None,
                max_states: int | None = None) -> Nfa:
    """Build the automaton whose states are sets of subformulas (read conjunctively).

    The result runs over the marked alphabet: each symbol also appears with
    the ``last`` flag. A state is accepting when every atom in it holds on
    the empty remaining trace.
    """
    alphabet = alphabet or Alphabet.for_formula(f)
    limit = default_max_states() if max_states is None else max_states
    symbols = alphabet.with_last()
    ex = _Expander(symbols)
    init = _clean(frozenset({nnf(f)}))
    index = {init: 0}
    labels = [init]
    rows: list[list[frozenset[int]]] = []
    queue = deque([init])
    while queue:
        q = queue.popleft()
        row = []
        for k in range(len(symbols)):
            succ = set()
            # deterministic numbering: successors sorted by their atom ids
            for p in sorted(ex.successors(q, k), key=_state_key):
                if p not in index:
                    if len(labels) >= limit:
                        raise StateLimitExceeded(limit)
                    index[p] = len(labels)
                    labels.append(p)
                    queue.append(p)
                succ.add(index[p])
            row.append(frozenset(succ))
        rows.append(row)
    accepting = frozenset(i for i, q in enumerate(labels) if ex.accepting(q))
    return Nfa(alphabet, tuple(labels), frozenset({0}), tuple(tuple(r) for r in rows),
               accepting, marked=True)


def strip_last(a: Nfa) -> Nfa:
    """Remove the ``last`` flag from the alphabet by adding an ``ended`` state.

    A flagged transition into an accepting state becomes an unflagged
    transition into ``ended``, which accepts and has no successors.
    """
    if not a.marked:
        raise ValueError("automaton alphabet does not contain the last marker")
    n = a.num_states
    ended = n
    rows = []
    for q in range(n):
        row = []
        for k in range(len(a.alphabet)):
            succ = set(a.transitions[q][2 * k])
            if a.transitions[q][2 * k + 1] & a.accepting:
                succ.add(ended)
            row.append(frozenset(succ))
        rows.append(tuple(row))
    rows.append(tuple(frozenset() for _ in a.alphabet))
    full = Nfa(a.alphabet, a.labels + (ENDED,), a.initial, tuple(rows),
               a.accepting | {ended})
    return _restrict(full, reachable_states(full))


def _restrict(a: Nfa, keep: list[int]) -> Nfa:
    renum = {q: i for i, q in enumerate(keep)}
    rows = tuple(
        tuple(frozenset(renum[p] for p in succ) for succ in a.transitions[q]) for q in keep
    )
    return Nfa(a.alphabet, tuple(a.labels[q] for q in keep),
               frozenset(renum[q] for q in a.initial), rows,
               frozenset(renum[q] for q in keep if q in a.accepting), a.marked)


def formula_automaton(f: LdlfFormula, alphabet: Alphabet | None = None,
                      max_states: int | None = None) -> Nfa:
    """NFA over the plain alphabet accepting exactly the traces satisfying ``f``."""
    return strip_last(ldlf_to_nfa(f, alphabet, max_states))


def check_satisfiable(f: LdlfFormula, alphabet: Alphabet | None = None,
                      max_states: int | None = None) -> bool:
    """Nonemptiness, exploring states lazily and stopping at the first witness."""
    alphabet = alphabet or Alphabet.for_formula(f)
    limit = default_max_states() if max_states is None else max_states
    symbols = alphabet.with_last()
    ex = _Expander(symbols)
    init = _clean(frozenset({nnf(f)}))
    seen = {init}
    queue = deque([init])
    while queue:
        q = queue.popleft()
        if ex.accepting(q):
            return True
        for k, sym in enumerate(symbols):
            succs = ex.successors(q, k)
            if LAST in sym:
                if any(ex.accepting(p) for p in succs):
                    return True
                continue
            for p in succs:
                if p not in seen:
                    if len(seen) >= limit:
                        raise StateLimitExceeded(limit)
                    seen.add(p)
                    queue.append(p)
    return False


def valid(f: LdlfFormula, alphabet: Alphabet | None = None, max_states: int | None = None) -> bool:
    alphabet = alphabet or Alphabet.for_formula(f)
    return not check_satisfiable(Not(f), alphabet, max_states)


def implies(f: LdlfFormula, g: LdlfFormula, alphabet: Alphabet | None = None,
            max_states: int | None = None) -> bool:
    alphabet = alphabet or Alphabet.for_formula(f, g)
    return not check_satisfiable(And(f, Not(g)), alphabet, max_states)
