"""Shared test utilities: random formulas and exhaustive trace enumeration."""
from __future__ import annotations

import itertools
import random

from ldlfmon.formula import (
    FALSE, FF, TRUE, TT, And, Box, Diamond, Letter, Not, Or, PAnd, PAtom, PNot,
    POr, Prop, Seq, Star, Test, Union, Always, Eventually, LtlAnd, LtlNot, LtlOr,
    LtlProp, Next, Until, WeakNext,
)


def words(symbols, max_len):
    """All words over ``symbols`` of length 0..max_len, shortest first."""
    for k in range(max_len + 1):
        yield from itertools.product(symbols, repeat=k)


def random_prop(rng: random.Random, props, depth: int = 1):
    if depth <= 0 or rng.random() < 0.6:
        choice = rng.random()
        if choice < 0.08:
            return TRUE
        if choice < 0.12:
            return FALSE
        return PAtom(rng.choice(props))
    kind = rng.choice(["not", "and", "or"])
    if kind == "not":
        return PNot(random_prop(rng, props, depth - 1))
    make = PAnd if kind == "and" else POr
    return make(random_prop(rng, props, depth - 1), random_prop(rng, props, depth - 1))


def random_ldlf(rng: random.Random, props, depth: int):
    if depth <= 0 or rng.random() < 0.15:
        choice = rng.random()
        if choice < 0.1:
            return TT
        if choice < 0.2:
            return FF
        return Prop(random_prop(rng, props, 1))
    kind = rng.choice(["not", "and", "or", "dia", "dia", "box", "box"])
    if kind == "not":
        return Not(random_ldlf(rng, props, depth - 1))
    if kind in ("and", "or"):
        make = And if kind == "and" else Or
        return make(random_ldlf(rng, props, depth - 1), random_ldlf(rng, props, depth - 1))
    make = Diamond if kind == "dia" else Box
    return make(random_path(rng, props, depth - 1), random_ldlf(rng, props, depth - 1))


def random_path(rng: random.Random, props, depth: int):
    if depth <= 0 or rng.random() < 0.3:
        if depth > 0 and rng.random() < 0.2:
            return Test(random_ldlf(rng, props, depth - 1))
        return Letter(random_prop(rng, props, 1))
    kind = rng.choice(["test", "union", "seq", "star", "star"])
    if kind == "test":
        return Test(random_ldlf(rng, props, depth - 1))
    if kind == "star":
        return Star(random_path(rng, props, depth - 1))
    make = Union if kind == "union" else Seq
    return make(random_path(rng, props, depth - 1), random_path(rng, props, depth - 1))


def random_ltlf(rng: random.Random, props, depth: int):
    if depth <= 0 or rng.random() < 0.2:
        return LtlProp(random_prop(rng, props, 1))
    kind = rng.choice(["not", "and", "or", "X", "N", "F", "G", "U"])
    sub = lambda: random_ltlf(rng, props, depth - 1)  # noqa: E731
    match kind:
        case "not":
            return LtlNot(sub())
        case "and":
            return LtlAnd(sub(), sub())
        case "or":
            return LtlOr(sub(), sub())
        case "X":
            return Next(sub())
        case "N":
            return WeakNext(sub())
        case "F":
            return Eventually(sub())
        case "G":
            return Always(sub())
    return Until(sub(), sub())


def population(seed: int, count: int, props=("a", "b"), depth: int = 4):
    rng = random.Random(seed)
    return [random_ldlf(rng, list(props), depth) for _ in range(count)]


def reach_counts(d):
    """For each DFA state, how many states are reachable from it (itself included).

    Any extension that changes acceptance has a witness no longer than this,
    so it serves as a brute-force horizon for traces ending in that state.
    """
    out = []
    for q in range(d.num_states):
        seen, stack = {q}, [q]
        while stack:
            for p in d.transitions[stack.pop()]:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        out.append(len(seen))
    return out
