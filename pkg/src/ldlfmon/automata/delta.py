"""The one-step unfolding function and positive boolean formulas over atoms.

``delta(f, sym)`` rewrites an NNF formula ``f`` against one input symbol
into a positive boolean combination of the formulas that must hold from
the next position on. ``sym`` is either a frozenset of propositions
(possibly containing the ``last`` marker) or :data:`EPSILON`, meaning the
remaining trace is empty; in the latter case the result is always a
constant.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..formula import (
    And, Box, Diamond, Ff, LdlfFormula, Letter, Not, Or, Prop, Seq, Star,
    Test, Tt, Union, is_test_only, nnf, prop_holds,
)
from .alphabet import LAST

__all__ = [
    "EPSILON", "PositiveBool", "BTrue", "BFalse", "BAtom", "BAnd", "BOr",
    "B_TRUE", "B_FALSE", "b_and", "b_or", "b_all", "delta", "minimal_models",
    "NotInNnf",
]


class _Epsilon:
    __slots__ = ()

    def __repr__(self) -> str:
        return "EPSILON"


EPSILON = _Epsilon()


class NotInNnf(ValueError):
    pass


class PositiveBool:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class BTrue(PositiveBool):
    pass


@dataclass(frozen=True, slots=True)
class BFalse(PositiveBool):
    pass


@dataclass(frozen=True, slots=True)
class BAtom(PositiveBool):
    formula: LdlfFormula


@dataclass(frozen=True, slots=True)
class BAnd(PositiveBool):
    left: PositiveBool
    right: PositiveBool


@dataclass(frozen=True, slots=True)
class BOr(PositiveBool):
    left: PositiveBool
    right: PositiveBool


B_TRUE = BTrue()
B_FALSE = BFalse()


def b_and(x: PositiveBool, y: PositiveBool) -> PositiveBool:
    if x is B_FALSE or y is B_FALSE:
        return B_FALSE
    if x is B_TRUE:
        return y
    if y is B_TRUE or x == y:
        return x
    return BAnd(x, y)


def b_or(x: PositiveBool, y: PositiveBool) -> PositiveBool:
    if x is B_TRUE or y is B_TRUE:
        return B_TRUE
    if x is B_FALSE:
        return y
    if y is B_FALSE or x == y:
        return x
    return BOr(x, y)


def b_all(items: Iterable[PositiveBool]) -> PositiveBool:
    out: PositiveBool = B_TRUE
    for b in items:
        out = b_and(out, b)
        if out is B_FALSE:
            break
    return out


def _const(value: bool) -> PositiveBool:
    return B_TRUE if value else B_FALSE


def delta(f: LdlfFormula, sym) -> PositiveBool:
    """Unfold ``f`` (in NNF) against one symbol, or against :data:`EPSILON`."""
    return _Unfolder(sym).run(f)


class _Unfolder:
    # A star formula met again while unfolding the same symbol has gone
    # round a cycle that consumed no input. Such a cycle can never help a
    # diamond (least fixpoint), and can never hurt a box (greatest fixpoint).

    __slots__ = ("sym", "eps", "last", "visiting")

    def __init__(self, sym):
        self.sym = sym
        self.eps = sym is EPSILON
        self.last = not self.eps and LAST in sym
        self.visiting: set[LdlfFormula] = set()

    def run(self, f: LdlfFormula) -> PositiveBool:
        match f:
            case Tt():
                return B_TRUE
            case Ff():
                return B_FALSE
            case Prop(p):
                return _const(not self.eps and prop_holds(p, self.sym))
            case And(left, right):
                return b_and(self.run(left), self.run(right))
            case Or(left, right):
                return b_or(self.run(left), self.run(right))
            case Diamond(path, body):
                return self.diamond(f, path, body)
            case Box(path, body):
                return self.box(f, path, body)
            case Not():
                raise NotInNnf(f"formula is not in negation normal form: {f}")
        raise TypeError(f"not an LDLf formula: {f!r}")

    def step(self, body: LdlfFormula) -> PositiveBool:
        # the letter consumed the current symbol; continue with the rest
        if self.last:
            return _Unfolder(EPSILON).run(body)
        return BAtom(body)

    def diamond(self, f, path, body) -> PositiveBool:
        match path:
            case Letter(p):
                if self.eps or not prop_holds(p, self.sym):
                    return B_FALSE
                return self.step(body)
            case Test(psi):
                return b_and(self.run(psi), self.run(body))
            case Union(r1, r2):
                return b_or(self.run(Diamond(r1, body)), self.run(Diamond(r2, body)))
            case Seq(r1, r2):
                return self.run(Diamond(r1, Diamond(r2, body)))
            case Star(r):
                if self.eps or is_test_only(r):
                    return self.run(body)
                if f in self.visiting:
                    return B_FALSE
                self.visiting.add(f)
                try:
                    return b_or(self.run(body), self.run(Diamond(r, f)))
                finally:
                    self.visiting.discard(f)
        raise TypeError(f"not a path expression: {path!r}")

    def box(self, f, path, body) -> PositiveBool:
        match path:
            case Letter(p):
                if self.eps or not prop_holds(p, self.sym):
                    return B_TRUE
                return self.step(body)
            case Test(psi):
                return b_or(self.run(nnf(Not(psi))), self.run(body))
            case Union(r1, r2):
                return b_and(self.run(Box(r1, body)), self.run(Box(r2, body)))
            case Seq(r1, r2):
                return self.run(Box(r1, Box(r2, body)))
            case Star(r):
                if self.eps or is_test_only(r):
                    return self.run(body)
                if f in self.visiting:
                    return B_TRUE
                self.visiting.add(f)
                try:
                    return b_and(self.run(body), self.run(Box(r, f)))
                finally:
                    self.visiting.discard(f)
        raise TypeError(f"not a path expression: {path!r}")


def minimal_models(b: PositiveBool) -> set[frozenset[LdlfFormula]]:
    """All subset-minimal sets of atoms that satisfy ``b``."""
    return _minimize(_models(b))


def _models(b: PositiveBool) -> set[frozenset]:
    match b:
        case BTrue():
            return {frozenset()}
        case BFalse():
            return set()
        case BAtom(x):
            return {frozenset({x})}
        case BOr(left, right):
            return _minimize(_models(left) | _models(right))
        case BAnd(left, right):
            lm = _models(left)
            if not lm:
                return set()
            rm = _models(right)
            return _minimize({x | y for x in lm for y in rm})
    raise TypeError(f"not a positive boolean formula: {b!r}")


def _minimize(family: set[frozenset]) -> set[frozenset]:
    ordered = sorted(family, key=len)
    kept: list[frozenset] = []
    for s in ordered:
        if not any(k <= s for k in kept):
            kept.append(s)
    return set(kept)
