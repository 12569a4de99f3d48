"""Abstract syntax for propositional, LDLf and LTLf formulas.

Every node is hash-consed: constructing a node that is structurally equal to
an existing one returns the existing object, so ``is`` is structural equality
and nodes can be used directly as automaton atoms. Each node also carries a
``uid`` that gives a stable canonical ordering.
"""
from __future__ import annotations

import itertools
import re
import threading
import weakref
from functools import lru_cache
from typing import Callable, Iterator, Mapping

__all__ = [
    "Node", "PropFormula", "PAtom", "PTrue", "PFalse", "PNot", "PAnd", "POr",
    "LdlfFormula", "Tt", "Ff", "Prop", "Not", "And", "Or", "Diamond", "Box",
    "PathExpr", "Letter", "Test", "Union", "Seq", "Star",
    "LtlfFormula", "LtlProp", "LtlNot", "LtlAnd", "LtlOr", "Next", "WeakNext",
    "Eventually", "Always", "Until",
    "TT", "FF", "TRUE", "FALSE", "END", "LAST", "EPS",
    "conj", "disj", "prop_holds", "atoms", "is_test_only", "end_value",
    "nnf", "ltlf_to_ldlf", "regex_embed", "subformulas", "substitute_letters", "rename_atoms",
    "valid_identifier", "RESERVED",
]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

#: Words that cannot be used as proposition or task names.
RESERVED = frozenset({"tt", "ff", "true", "false", "end", "last"})


def valid_identifier(name: str) -> bool:
    return isinstance(name, str) and bool(_IDENT.match(name)) and name not in RESERVED


class Node:
    """Interned immutable syntax node."""

    __slots__ = ("_args", "uid", "__weakref__")
    __match_args__: tuple[str, ...] = ()

    _table: "weakref.WeakValueDictionary[tuple, Node]" = weakref.WeakValueDictionary()
    _lock = threading.Lock()
    _ids = itertools.count()

    def __new__(cls, *args):
        return cls._intern(*args)

    @classmethod
    def _intern(cls, *args):
        key = (cls, *args)
        node = Node._table.get(key)
        if node is None:
            with Node._lock:
                node = Node._table.get(key)
                if node is None:
                    node = object.__new__(cls)
                    object.__setattr__(node, "_args", args)
                    object.__setattr__(node, "uid", next(Node._ids))
                    Node._table[key] = node
        return node

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __reduce__(self):
        return (type(self), self._args)

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    @property
    def children(self) -> tuple:
        return tuple(a for a in self._args if isinstance(a, Node))

    def __repr__(self):
        inner = ", ".join(repr(a) for a in self._args)
        return f"{type(self).__name__}({inner})"

    def __str__(self):
        from .syntax import render

        return render(self)


def _fields(*names: str) -> Callable[[type], type]:
    def deco(cls):
        cls.__match_args__ = names
        for i, name in enumerate(names):
            setattr(cls, name, property(lambda self, i=i: self._args[i]))
        return cls

    return deco


# --------------------------------------------------------------------------
# propositional formulas


class PropFormula(Node):
    __slots__ = ()

    def __and__(self, other):
        return PAnd(self, other)

    def __or__(self, other):
        return POr(self, other)

    def __invert__(self):
        return PNot(self)


@_fields("name")
class PAtom(PropFormula):
    __slots__ = ()

    def __new__(cls, name: str):
        if not valid_identifier(name):
            raise ValueError(f"invalid proposition name {name!r}")
        return cls._intern(name)


class PTrue(PropFormula):
    __slots__ = ()


class PFalse(PropFormula):
    __slots__ = ()


@_fields("arg")
class PNot(PropFormula):
    __slots__ = ()


@_fields("left", "right")
class PAnd(PropFormula):
    __slots__ = ()


@_fields("left", "right")
class POr(PropFormula):
    __slots__ = ()


def prop_holds(p: PropFormula, step: frozenset) -> bool:
    """Evaluate a propositional formula on a set of true propositions."""
    match p:
        case PAtom(name):
            return name in step
        case PTrue():
            return True
        case PFalse():
            return False
        case PNot(arg):
            return not prop_holds(arg, step)
        case PAnd(left, right):
            return prop_holds(left, step) and prop_holds(right, step)
        case POr(left, right):
            return prop_holds(left, step) or prop_holds(right, step)
    raise TypeError(f"not a propositional formula: {p!r}")


# --------------------------------------------------------------------------
# LDLf formulas and path expressions


class LdlfFormula(Node):
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


class Tt(LdlfFormula):
    __slots__ = ()


class Ff(LdlfFormula):
    __slots__ = ()


def _expand_prop(p: PropFormula, leaf, neg, both, either):
    # Formula-level props are kept atomic; compound bodies become boolean
    # structure with the same finite-trace meaning (false past the end).
    match p:
        case PAtom() | PTrue() | PFalse():
            return leaf(p)
        case PAnd(left, right):
            return both(_expand_prop(left, leaf, neg, both, either),
                        _expand_prop(right, leaf, neg, both, either))
        case POr(left, right):
            return either(_expand_prop(left, leaf, neg, both, either),
                          _expand_prop(right, leaf, neg, both, either))
        case PNot(PTrue()):
            return leaf(PFalse())
        case PNot(PFalse()):
            return leaf(PTrue())
        case PNot(arg):
            return both(leaf(PTrue()), neg(_expand_prop(arg, leaf, neg, both, either)))
    raise TypeError(f"not a propositional formula: {p!r}")


@_fields("prop")
class Prop(LdlfFormula):
    """Propositional formula evaluated at the current step (false past the end)."""

    __slots__ = ()

    def __new__(cls, prop: PropFormula):
        if not isinstance(prop, PropFormula):
            raise TypeError(f"Prop expects a PropFormula, got {prop!r}")
        if isinstance(prop, (PAtom, PTrue, PFalse)):
            return cls._intern(prop)
        return _expand_prop(prop, cls._intern, Not, And, Or)


@_fields("arg")
class Not(LdlfFormula):
    __slots__ = ()


@_fields("left", "right")
class And(LdlfFormula):
    __slots__ = ()


@_fields("left", "right")
class Or(LdlfFormula):
    __slots__ = ()


@_fields("path", "body")
class Diamond(LdlfFormula):
    __slots__ = ()


@_fields("path", "body")
class Box(LdlfFormula):
    __slots__ = ()


class PathExpr(Node):
    __slots__ = ()


@_fields("prop")
class Letter(PathExpr):
    """A single step whose interpretation satisfies ``prop``."""

    __slots__ = ()


@_fields("formula")
class Test(PathExpr):
    __slots__ = ()


@_fields("left", "right")
class Union(PathExpr):
    __slots__ = ()


@_fields("left", "right")
class Seq(PathExpr):
    __slots__ = ()


@_fields("arg")
class Star(PathExpr):
    __slots__ = ()


TT = Tt()
FF = Ff()
TRUE = PTrue()
FALSE = PFalse()
#: Holds iff the remaining trace is empty.
END = Box(Letter(TRUE), FF)
#: Holds iff the current step is the final one.
LAST = Diamond(Letter(TRUE), END)
#: The path matching only the empty segment.
EPS = Test(TT)


def conj(formulas) -> LdlfFormula:
    result = None
    for f in formulas:
        result = f if result is None else And(result, f)
    return TT if result is None else result


def disj(formulas) -> LdlfFormula:
    result = None
    for f in formulas:
        result = f if result is None else Or(result, f)
    return FF if result is None else result


# --------------------------------------------------------------------------
# LTLf formulas


class LtlfFormula(Node):
    __slots__ = ()


@_fields("prop")
class LtlProp(LtlfFormula):
    __slots__ = ()

    def __new__(cls, prop: PropFormula):
        if not isinstance(prop, PropFormula):
            raise TypeError(f"LtlProp expects a PropFormula, got {prop!r}")
        if isinstance(prop, (PAtom, PTrue, PFalse)):
            return cls._intern(prop)
        return _expand_prop(prop, cls._intern, LtlNot, LtlAnd, LtlOr)


@_fields("arg")
class LtlNot(LtlfFormula):
    __slots__ = ()


@_fields("left", "right")
class LtlAnd(LtlfFormula):
    __slots__ = ()


@_fields("left", "right")
class LtlOr(LtlfFormula):
    __slots__ = ()


@_fields("arg")
class Next(LtlfFormula):
    __slots__ = ()


@_fields("arg")
class WeakNext(LtlfFormula):
    __slots__ = ()


@_fields("arg")
class Eventually(LtlfFormula):
    __slots__ = ()


@_fields("arg")
class Always(LtlfFormula):
    __slots__ = ()


@_fields("left", "right")
class Until(LtlfFormula):
    __slots__ = ()


# --------------------------------------------------------------------------
# queries


def subformulas(node: Node) -> Iterator[Node]:
    """All distinct nodes reachable from ``node`` (formulas, paths, props)."""
    seen: set[int] = set()
    stack = [node]
    while stack:
        n = stack.pop()
        if n.uid in seen:
            continue
        seen.add(n.uid)
        yield n
        stack.extend(n.children)


def atoms(node: Node) -> frozenset[str]:
    """Names of all propositions occurring in ``node``."""
    return frozenset(n.name for n in subformulas(node) if isinstance(n, PAtom))


def is_test_only(path: PathExpr) -> bool:
    match path:
        case Test():
            return True
        case Letter():
            return False
        case Union(left, right) | Seq(left, right):
            return is_test_only(left) and is_test_only(right)
        case Star(arg):
            return is_test_only(arg)
    raise TypeError(f"not a path expression: {path!r}")


@lru_cache(maxsize=65536)
def end_value(f: LdlfFormula) -> bool:
    """Truth value of ``f`` at a position past the end of the trace."""
    match f:
        case Tt():
            return True
        case Ff() | Prop():
            return False
        case Not(arg):
            return not end_value(arg)
        case And(left, right):
            return end_value(left) and end_value(right)
        case Or(left, right):
            return end_value(left) or end_value(right)
        case Diamond(path, body):
            return _matches_empty_at_end(path) and end_value(body)
        case Box(path, body):
            return not _matches_empty_at_end(path) or end_value(body)
    raise TypeError(f"not an LDLf formula: {f!r}")


def _matches_empty_at_end(path: PathExpr) -> bool:
    match path:
        case Letter():
            return False
        case Test(formula):
            return end_value(formula)
        case Union(left, right):
            return _matches_empty_at_end(left) or _matches_empty_at_end(right)
        case Seq(left, right):
            return _matches_empty_at_end(left) and _matches_empty_at_end(right)
        case Star():
            return True
    raise TypeError(f"not a path expression: {path!r}")


# --------------------------------------------------------------------------
# transformations


@lru_cache(maxsize=65536)
def nnf(f: LdlfFormula) -> LdlfFormula:
    """Negation normal form: no ``Not`` nodes remain.

    A negated proposition ``!p`` becomes ``[p]ff`` because it must also hold
    past the end of the trace.
    """
    match f:
        case Tt() | Ff() | Prop():
            return f
        case Not(arg):
            return _negate(arg)
        case And(left, right):
            return And(nnf(left), nnf(right))
        case Or(left, right):
            return Or(nnf(left), nnf(right))
        case Diamond(path, body):
            return Diamond(_nnf_path(path), nnf(body))
        case Box(path, body):
            return Box(_nnf_path(path), nnf(body))
    raise TypeError(f"not an LDLf formula: {f!r}")


@lru_cache(maxsize=65536)
def _negate(f: LdlfFormula) -> LdlfFormula:
    match f:
        case Tt():
            return FF
        case Ff():
            return TT
        case Prop(p):
            return Box(Letter(p), FF)
        case Not(arg):
            return nnf(arg)
        case And(left, right):
            return Or(_negate(left), _negate(right))
        case Or(left, right):
            return And(_negate(left), _negate(right))
        case Diamond(path, body):
            return Box(_nnf_path(path), _negate(body))
        case Box(path, body):
            return Diamond(_nnf_path(path), _negate(body))
    raise TypeError(f"not an LDLf formula: {f!r}")


@lru_cache(maxsize=65536)
def _nnf_path(path: PathExpr) -> PathExpr:
    match path:
        case Letter():
            return path
        case Test(formula):
            return Test(nnf(formula))
        case Union(left, right):
            return Union(_nnf_path(left), _nnf_path(right))
        case Seq(left, right):
            return Seq(_nnf_path(left), _nnf_path(right))
        case Star(arg):
            return Star(_nnf_path(arg))
    raise TypeError(f"not a path expression: {path!r}")


_ANY = Letter(TRUE)
_ANY_STAR = Star(_ANY)
_NOT_END = Diamond(_ANY, TT)


def _ltl_as_prop(f: LtlfFormula) -> PropFormula | None:
    match f:
        case LtlProp(p):
            return p
        case LtlNot(arg):
            p = _ltl_as_prop(arg)
            return None if p is None else _pneg(p)
        case LtlAnd(left, right) | LtlOr(left, right):
            lp, rp = _ltl_as_prop(left), _ltl_as_prop(right)
            if lp is None or rp is None:
                return None
            return PAnd(lp, rp) if isinstance(f, LtlAnd) else POr(lp, rp)
    return None


def _pneg(p: PropFormula) -> PropFormula:
    match p:
        case PNot(arg):
            return arg
        case PTrue():
            return FALSE
        case PFalse():
            return TRUE
    return PNot(p)


def _existential_arg(f: LtlfFormula) -> LdlfFormula:
    # argument of a modality that must point at a real step
    p = _ltl_as_prop(f)
    if p is not None:
        return Diamond(Letter(p), TT)
    g = ltlf_to_ldlf(f)
    return g if not end_value(g) else And(g, _NOT_END)


def _universal_arg(f: LtlfFormula) -> LdlfFormula:
    # argument of a modality that is vacuous once the trace is over
    p = _ltl_as_prop(f)
    if p is not None:
        return Box(Letter(_pneg(p)), FF)
    g = ltlf_to_ldlf(f)
    return g if end_value(g) else Or(g, END)


@lru_cache(maxsize=65536)
def ltlf_to_ldlf(f: LtlfFormula) -> LdlfFormula:
    """Translate LTLf into an equivalent LDLf formula.

    Temporal operators map to path modalities over ``true``. Because a path
    letter may consume the final step, the argument of an existential
    modality is guarded against the end of the trace and the argument of a
    universal one is released by it; propositional arguments get the guard
    for free as ``<p>tt`` and ``[!p]ff``.
    """
    match f:
        case LtlProp(p):
            return Prop(p)
        case LtlNot(arg):
            return Not(ltlf_to_ldlf(arg))
        case LtlAnd(left, right):
            return And(ltlf_to_ldlf(left), ltlf_to_ldlf(right))
        case LtlOr(left, right):
            return Or(ltlf_to_ldlf(left), ltlf_to_ldlf(right))
        case Next(arg):
            return Diamond(_ANY, _existential_arg(arg))
        case WeakNext(arg):
            return Box(_ANY, _universal_arg(arg))
        case Eventually(arg):
            return Diamond(_ANY_STAR, _existential_arg(arg))
        case Always(arg):
            return Box(_ANY_STAR, _universal_arg(arg))
        case Until(left, right):
            path = Star(Seq(Test(ltlf_to_ldlf(left)), _ANY))
            return Diamond(path, _existential_arg(right))
    raise TypeError(f"not an LTLf formula: {f!r}")


def regex_embed(path: PathExpr) -> LdlfFormula:
    """``<path>end``: the traces matched by a test-free regular expression."""
    if any(isinstance(n, Test) for n in subformulas(path)):
        raise ValueError("regular expression must not contain tests")
    if not isinstance(path, PathExpr):
        raise TypeError(f"not a path expression: {path!r}")
    return Diamond(path, END)


def substitute_letters(path: PathExpr, mapping: Mapping[str, PropFormula]) -> PathExpr:
    """Simultaneously replace propositions inside path letters."""

    def sub_prop(p: PropFormula) -> PropFormula:
        match p:
            case PAtom(name):
                return mapping.get(name, p)
            case PNot(arg):
                return PNot(sub_prop(arg))
            case PAnd(left, right):
                return PAnd(sub_prop(left), sub_prop(right))
            case POr(left, right):
                return POr(sub_prop(left), sub_prop(right))
        return p

    def sub(r: PathExpr) -> PathExpr:
        match r:
            case Letter(p):
                return Letter(sub_prop(p))
            case Union(left, right):
                return Union(sub(left), sub(right))
            case Seq(left, right):
                return Seq(sub(left), sub(right))
            case Star(arg):
                return Star(sub(arg))
        return r

    return sub(path)


def rename_atoms(node: Node, mapping: Mapping[str, PropFormula]) -> Node:
    """Simultaneously replace atoms anywhere in ``node`` by propositional formulas."""
    memo: dict[int, Node] = {}

    def go(n):
        if not isinstance(n, Node):
            return n
        hit = memo.get(n.uid)
        if hit is None:
            if isinstance(n, PAtom):
                hit = mapping.get(n.name, n)
            else:
                hit = type(n)(*(go(a) for a in n._args))
            memo[n.uid] = hit
        return hit

    return go(node)
