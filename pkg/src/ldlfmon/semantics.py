"""Reference evaluator for the finite-trace semantics.

Deliberately simple: truth of a formula is computed as the set of positions
``1..n+1`` of the trace where it holds, and a path expression as the
relation ``{(i, j)}`` of segments it matches. Position ``n+1`` stands for
"past the end" (the remaining trace is empty). A propositional path letter
may consume the final step, landing on ``n+1``.

Sets are encoded as integer bitmasks (bit ``i`` = position ``i``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .formula import (
    And, Always, Box, Diamond, Eventually, Ff, LdlfFormula, Letter, LtlAnd,
    LtlfFormula, LtlNot, LtlOr, LtlProp, Next, Not, Or, PathExpr, Prop, Seq,
    Star, Test, Tt, Union, Until, WeakNext, atoms, prop_holds,
)

__all__ = [
    "Trace", "as_trace", "eval_at", "path_match", "satisfies", "eval_ltlf",
    "PrefixClass", "PrefixOracle", "classify_prefix_bruteforce", "powerset_symbols",
]

Trace = tuple  # tuple[frozenset[str], ...]


def as_trace(steps: Iterable[Iterable[str]]) -> tuple[frozenset[str], ...]:
    return tuple(frozenset(s) for s in steps)


class _Evaluator:
    def __init__(self, trace: Sequence[frozenset[str]]):
        self.trace = as_trace(trace)
        self.n = len(self.trace)
        self.positions = range(1, self.n + 2)
        self.full = sum(1 << i for i in self.positions)
        self._holds: dict[int, int] = {}
        self._rel: dict[int, tuple[int, ...]] = {}
        self._letters: dict[int, int] = {}

    def step(self, i: int) -> frozenset[str]:
        return self.trace[i - 1]

    def letter_mask(self, p) -> int:
        """Bitmask of the positions ``1..n`` whose step satisfies ``p``."""
        key = p.uid
        hit = self._letters.get(key)
        if hit is None:
            cache = _PROP_CACHE.setdefault(key, {})
            hit = 0
            for i, s in enumerate(self.trace, 1):
                v = cache.get(s)
                if v is None:
                    v = cache[s] = prop_holds(p, s)
                if v:
                    hit |= 1 << i
            self._letters[key] = hit
        return hit

    def holds(self, f: LdlfFormula) -> int:
        cached = self._holds.get(f.uid)
        if cached is not None:
            return cached
        match f:
            case Tt():
                mask = self.full
            case Ff():
                mask = 0
            case Prop(p):
                mask = self.letter_mask(p)
            case Not(arg):
                mask = self.full & ~self.holds(arg)
            case And(left, right):
                mask = self.holds(left) & self.holds(right)
            case Or(left, right):
                mask = self.holds(left) | self.holds(right)
            case Diamond(path, body):
                rel, target = self.rel(path), self.holds(body)
                mask = sum(1 << i for i in self.positions if rel[i] & target)
            case Box(path, body):
                rel, target = self.rel(path), self.holds(body)
                mask = sum(1 << i for i in self.positions if not rel[i] & ~target)
            case _:
                raise TypeError(f"not an LDLf formula: {f!r}")
        self._holds[f.uid] = mask
        return mask

    def rel(self, r: PathExpr) -> tuple[int, ...]:
        """``rel[i]`` is the bitmask of all ``j`` with ``(i, j)`` matched by ``r``."""
        cached = self._rel.get(r.uid)
        if cached is not None:
            return cached
        size = self.n + 2
        match r:
            case Letter(p):
                lm = self.letter_mask(p)
                out = [(lm >> i & 1) << (i + 1) for i in range(size)]
            case Test(formula):
                h = self.holds(formula)
                out = [(1 << i) & h for i in range(size)]
            case Union(left, right):
                a, b = self.rel(left), self.rel(right)
                out = [x | y for x, y in zip(a, b)]
            case Seq(left, right):
                a, b = self.rel(left), self.rel(right)
                out = [_image(a[i], b) for i in range(size)]
            case Star(arg):
                a = self.rel(arg)
                out = [0] * size
                for i in self.positions:
                    reach = frontier = 1 << i
                    while frontier:
                        frontier = _image(frontier, a) & ~reach
                        reach |= frontier
                    out[i] = reach
            case _:
                raise TypeError(f"not a path expression: {r!r}")
        result = tuple(out)
        self._rel[r.uid] = result
        return result


# propositional formulas are interned, so their truth on a given step can be
# shared by every evaluation; the table is bounded by formulas x distinct steps
_PROP_CACHE: dict[int, dict[frozenset, bool]] = {}


def _image(mask: int, rel: Sequence[int]) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= rel[low.bit_length() - 1]
        mask ^= low
    return out


def eval_at(trace: Sequence[Iterable[str]], i: int, f: LdlfFormula) -> bool:
    """Whether ``f`` holds at position ``i`` (1-based; ``i > n`` means past the end)."""
    if i < 1:
        raise ValueError(f"position must be >= 1, got {i}")
    ev = _Evaluator(as_trace(trace))
    return bool(ev.holds(f) >> min(i, ev.n + 1) & 1)


def path_match(trace: Sequence[Iterable[str]], i: int, j: int, r: PathExpr) -> bool:
    """Whether the segment from ``i`` to ``j`` is matched by ``r``."""
    t = as_trace(trace)
    if not 1 <= i <= j <= len(t) + 1:
        raise ValueError(f"segment ({i}, {j}) out of range for a trace of length {len(t)}")
    return bool(_Evaluator(t).rel(r)[i] >> j & 1)


def satisfies(trace: Sequence[Iterable[str]], f: LdlfFormula) -> bool:
    return eval_at(trace, 1, f)


def eval_ltlf(trace: Sequence[Iterable[str]], f: LtlfFormula, i: int = 1) -> bool:
    """Standard finite-trace LTL semantics, evaluated literally."""
    t = as_trace(trace)
    n = len(t)

    def ev(g: LtlfFormula, i: int) -> bool:
        match g:
            case LtlProp(p):
                return 1 <= i <= n and prop_holds(p, t[i - 1])
            case LtlNot(arg):
                return not ev(arg, i)
            case LtlAnd(left, right):
                return ev(left, i) and ev(right, i)
            case LtlOr(left, right):
                return ev(left, i) or ev(right, i)
            case Next(arg):
                return 1 <= i < n and ev(arg, i + 1)
            case WeakNext(arg):
                return not (1 <= i < n) or ev(arg, i + 1)
            case Eventually(arg):
                return any(ev(arg, j) for j in range(i, n + 1))
            case Always(arg):
                return all(ev(arg, j) for j in range(i, n + 1))
            case Until(left, right):
                return any(ev(right, j) and all(ev(left, k) for k in range(i, j))
                           for j in range(i, n + 1))
        raise TypeError(f"not an LTLf formula: {g!r}")

    return ev(f, i)


# --------------------------------------------------------------------------
# prefix classification by enumeration of extensions


def powerset_symbols(props: Iterable[str]) -> tuple[frozenset[str], ...]:
    ps = sorted(props)
    return tuple(frozenset(c) for k in range(len(ps) + 1) for c in itertools.combinations(ps, k))


@dataclass(frozen=True)
class PrefixClass:
    poss_good: bool
    nec_good: bool
    nec_bad: bool


class PrefixOracle:
    """Brute-force prefix classification for one formula over fixed symbols.

    Satisfaction results are cached per trace, so classifying many related
    prefixes with one oracle is much cheaper than separate calls.
    """

    def __init__(self, f: LdlfFormula, symbols: Sequence[frozenset[str]], horizon: int):
        if horizon < 1:
            raise ValueError("horizon must be positive")
        self.formula = f
        self.symbols = tuple(frozenset(s) for s in symbols)
        self.horizon = horizon
        self._sat: dict[tuple, bool] = {}

    def satisfies(self, trace: tuple) -> bool:
        hit = self._sat.get(trace)
        if hit is None:
            hit = self._sat[trace] = satisfies(trace, self.formula)
        return hit

    def extensions(self, trace: tuple):
        """``trace`` extended by every word of length ``0..horizon``, shortest first."""
        for k in range(self.horizon + 1):
            for ext in itertools.product(self.symbols, repeat=k):
                yield trace + ext

    def _search(self, trace, want_good: bool, want_bad: bool) -> tuple[bool, bool]:
        good = bad = False
        for w in self.extensions(as_trace(trace)):
            if self.satisfies(w):
                good = True
            else:
                bad = True
            if (good or not want_good) and (bad or not want_bad):
                break
        return good, bad

    def poss_good(self, trace) -> bool:
        return self._search(trace, True, False)[0]

    def poss_bad(self, trace) -> bool:
        """Some extension violates the formula (possibly good for its negation)."""
        return self._search(trace, False, True)[1]

    def classify(self, trace) -> PrefixClass:
        good, bad = self._search(trace, True, True)
        return PrefixClass(poss_good=good, nec_good=not bad, nec_bad=not good)


def classify_prefix_bruteforce(trace, f: LdlfFormula, horizon: int, symbols=None) -> PrefixClass:
    """Classify ``trace`` by enumerating every extension of length <= ``horizon``.

    ``symbols`` defaults to all interpretations over the propositions of
    ``f`` and ``trace``. The horizon must be at least the size of the minimal
    DFA of ``f`` for the answer to be exact.
    """
    t = as_trace(trace)
    if symbols is None:
        symbols = powerset_symbols(atoms(f).union(*t))
    return PrefixOracle(f, symbols, horizon).classify(t)
