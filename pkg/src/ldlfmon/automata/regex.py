"""State elimination: from an automaton to a test-free path expression."""
from __future__ import annotations

from functools import reduce

from ..formula import (
    EPS, FALSE, TRUE, Letter, PAnd, PAtom, PNot, POr, PropFormula, PathExpr,
    Seq, Star, Union,
)
from .alphabet import Alphabet
from .core import Dfa, Nfa, coaccessible_states, reachable_states

__all__ = ["to_regex", "guard", "NOTHING"]

#: the empty language
NOTHING = Letter(FALSE)

# exact Quine-McCluskey is exponential in the number of propositions
_QM_LIMIT = 8


def _union(x: PathExpr, y: PathExpr) -> PathExpr:
    if x is NOTHING:
        return y
    if y is NOTHING or x is y:
        return x
    return Union(x, y)


def _seq(x: PathExpr, y: PathExpr) -> PathExpr:
    if x is NOTHING or y is NOTHING:
        return NOTHING
    if x is EPS:
        return y
    if y is EPS:
        return x
    return Seq(x, y)


def _star(x: PathExpr) -> PathExpr:
    if x is NOTHING or x is EPS:
        return EPS
    if isinstance(x, Star):
        return x
    return Star(x)


def to_regex(a: Nfa | Dfa) -> PathExpr:
    """Path expression with the same language as ``a`` (over its alphabet).

    The empty language comes out as the letter ``false`` and the language
    holding only the empty trace as ``tt?``; no other tests are produced.
    """
    if isinstance(a, Nfa) and a.marked:
        raise ValueError("remove the last marker before extracting a regex")
    live = coaccessible_states(a)
    keep = [q for q in reachable_states(a) if q in live]
    if not keep:
        return NOTHING
    initial = {a.initial} if isinstance(a, Dfa) else set(a.initial)

    labels: dict[tuple[int, int], set[int]] = {}
    kept = set(keep)
    for q, k, p in a.edges():
        if q in kept and p in kept:
            labels.setdefault((q, p), set()).add(k)

    src, dst = -1, -2
    edges: dict[tuple[int, int], PathExpr] = {
        (q, p): Letter(guard(a.alphabet, ks)) for (q, p), ks in sorted(labels.items())
    }
    for q in keep:
        if q in initial:
            edges[(src, q)] = EPS
        if q in a.accepting:
            edges[(q, dst)] = EPS

    pending = list(keep)
    while pending:
        def cost(q: int) -> tuple[int, int]:
            ins = sum(1 for (x, y) in edges if y == q and x != q)
            outs = sum(1 for (x, y) in edges if x == q and y != q)
            return ins * outs, q

        q = min(pending, key=cost)
        pending.remove(q)
        loop = edges.pop((q, q), NOTHING)
        middle = _star(loop)
        ins = [(x, r) for (x, y), r in edges.items() if y == q]
        outs = [(y, r) for (x, y), r in edges.items() if x == q]
        for x, _ in ins:
            del edges[(x, q)]
        for y, _ in outs:
            del edges[(q, y)]
        for x, rin in ins:
            for y, rout in outs:
                path = _seq(_seq(rin, middle), rout)
                edges[(x, y)] = _union(edges.get((x, y), NOTHING), path)
    return edges.get((src, dst), NOTHING)


# --------------------------------------------------------------------------
# propositional guards for sets of symbols


def guard(alphabet: Alphabet, indices) -> PropFormula:
    """A propositional formula true on exactly the chosen symbols of ``alphabet``.

    Interpretations outside the alphabet are treated as don't-cares.
    """
    chosen = sorted(set(indices))
    if len(chosen) == len(alphabet):
        return TRUE
    if not chosen:
        return FALSE
    syms = [alphabet.symbols[k] for k in chosen]
    if alphabet.tasks:
        return reduce(POr, (PAtom(next(iter(s))) for s in syms))
    props = sorted(alphabet.props)
    if len(props) > _QM_LIMIT:
        return reduce(POr, (_minterm(props, s) for s in syms))
    return _quine_mccluskey(props, syms, [s for s in alphabet.symbols if s not in syms])


def _minterm(props, sym) -> PropFormula:
    lits = [PAtom(p) if p in sym else PNot(PAtom(p)) for p in props]
    return reduce(PAnd, lits) if lits else TRUE


def _quine_mccluskey(props, on, off) -> PropFormula:
    """Prime-implicant cover of ``on`` avoiding ``off``; everything else is free."""
    nvars = len(props)

    def code(sym) -> int:
        return sum(1 << i for i, p in enumerate(props) if p in sym)

    on_codes = {code(s) for s in on}
    off_codes = {code(s) for s in off}
    care = [m for m in range(1 << nvars) if m not in off_codes]

    # implicants are (value, dont_care_mask)
    current = {(m, 0) for m in care}
    primes: set[tuple[int, int]] = set()
    while current:
        merged: set[tuple[int, int]] = set()
        used: set[tuple[int, int]] = set()
        by_mask: dict[int, list[tuple[int, int]]] = {}
        for imp in current:
            by_mask.setdefault(imp[1], []).append(imp)
        for mask, group in by_mask.items():
            values = {v for v, _ in group}
            for v in values:
                for bit in range(nvars):
                    b = 1 << bit
                    if mask & b or v & b:
                        continue
                    if v | b in values:
                        merged.add((v, mask | b))
                        used.add((v, mask))
                        used.add((v | b, mask))
        primes |= current - used
        current = merged

    def covers(imp, m):
        v, mask = imp
        return (m & ~mask) == v

    useful = [p for p in primes if any(covers(p, m) for m in on_codes)]
    remaining = set(on_codes)
    cover: list[tuple[int, int]] = []
    for m in sorted(on_codes):
        owners = [p for p in useful if covers(p, m)]
        if len(owners) == 1 and owners[0] not in cover:
            cover.append(owners[0])
    for p in cover:
        remaining -= {m for m in remaining if covers(p, m)}
    while remaining:
        best = max(sorted(useful), key=lambda p: (sum(covers(p, m) for m in remaining),
                                                  bin(p[1]).count("1")))
        cover.append(best)
        remaining -= {m for m in remaining if covers(best, m)}

    def term(imp) -> PropFormula:
        v, mask = imp
        lits = [PAtom(p) if v >> i & 1 else PNot(PAtom(p))
                for i, p in enumerate(props) if not mask >> i & 1]
        return reduce(PAnd, lits) if lits else TRUE

    return reduce(POr, (term(p) for p in sorted(cover)))

