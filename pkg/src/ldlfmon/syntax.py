"""Concrete syntax: tokenizer, Pratt parsers and precedence-aware printer.

LDLf grammar (``!`` binds tightest together with the modalities, then ``&``,
``|``, ``->``; inside paths ``*`` and ``?`` are postfix and ``;`` binds
tighter than ``+``)::

    ldlf := tt | ff | prop | !ldlf | ldlf (&|'|'|->) ldlf
          | <path>ldlf | [path]ldlf | end | last | (ldlf)
    path := prop | ldlf? | path;path | path+path | path* | (path)
    prop := true | false | ident | !prop | prop (&|'|') prop | (prop)

LTLf uses ``X N F G`` as prefix operators and ``U`` as infix until.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .formula import (
    END, FF, LAST, TT, Always, And, Box, Diamond, Eventually, Ff, Letter,
    LtlAnd, LtlfFormula, LtlNot, LtlOr, LtlProp, Next, Node, Not, Or, PAnd,
    PAtom, PFalse, PNot, POr, PropFormula, Prop, PTrue, PathExpr, Seq, Star,
    Test, Tt, Union, Until, WeakNext, LdlfFormula, valid_identifier,
)

__all__ = ["ParseError", "parse_ldlf", "parse_ltlf", "parse_path", "parse_prop", "render"]


class ParseError(ValueError):
    """Syntax error with 1-based line/column and the set of expected tokens."""

    def __init__(self, message: str, text: str, offset: int, expected=()):
        self.offset = offset
        self.line = text.count("\n", 0, offset) + 1
        self.column = offset - (text.rfind("\n", 0, offset) + 1) + 1
        self.expected = frozenset(expected)
        detail = f"{message} at line {self.line}, column {self.column}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


_TOKEN = re.compile(r"\s*(?:(->|[<>\[\]()!&|;+*?])|([A-Za-z_][A-Za-z0-9_]*))")

_LDLF_CONSTANTS = {"tt", "ff", "true", "false", "end", "last"}
_LTLF_PREFIX = {"X", "N", "F", "G"}


@dataclass
class _Tok:
    kind: str  # operator text, "ident" or "eof"
    text: str
    pos: int


def _tokenize(text: str, keywords: set[str]) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            toks.append(_Tok("eof", "", pos))
            return toks
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(1) if m.group(1) else m.start(2)
        if m.group(1):
            toks.append(_Tok(m.group(1), m.group(1), start))
        else:
            word = m.group(2)
            toks.append(_Tok(word if word in keywords else "ident", word, start))
        pos = m.end()


@dataclass
class _Tree:
    op: str
    pos: int
    args: list = field(default_factory=list)
    text: str = ""


class _Pratt:
    """Generic precedence-climbing parser producing untyped trees."""

    infix: dict[str, tuple[int, bool]] = {}  # op -> (binding power, right assoc)
    postfix: dict[str, int] = {}
    prefix_bp = 70
    atoms: frozenset[str] = frozenset()

    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text, set(self.atoms) | set(self.prefix_ops))
        self.i = 0

    prefix_ops: frozenset[str] = frozenset()

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, tok: _Tok, expected) -> ParseError:
        what = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"unexpected {what}", self.text, tok.pos, expected)

    def expect(self, kind: str) -> _Tok:
        tok = self.peek()
        if tok.kind != kind:
            raise self.error(tok, {kind})
        return self.advance()

    def starters(self) -> set[str]:
        return {"identifier", "(", *self.prefix_ops, *self.atoms}

    def parse_all(self) -> _Tree:
        tree = self.expr(0)
        tok = self.peek()
        if tok.kind != "eof":
            raise self.error(tok, set(self.infix) | set(self.postfix) | {"end of input"})
        return tree

    def expr(self, min_bp: int) -> _Tree:
        lhs = self.primary()
        while True:
            tok = self.peek()
            if tok.kind in self.postfix and self.postfix[tok.kind] >= min_bp:
                self.advance()
                lhs = _Tree(tok.kind, tok.pos, [lhs])
                continue
            if tok.kind in self.infix:
                bp, right = self.infix[tok.kind]
                if bp < min_bp:
                    break
                self.advance()
                rhs = self.expr(bp if right else bp + 1)
                lhs = _Tree(tok.kind, tok.pos, [lhs, rhs])
                continue
            break
        return lhs

    def primary(self) -> _Tree:
        tok = self.peek()
        if tok.kind == "ident" or tok.kind in self.atoms:
            self.advance()
            return _Tree("ident" if tok.kind == "ident" else "const", tok.pos, text=tok.text)
        if tok.kind == "(":
            self.advance()
            inner = self.expr(0)
            self.expect(")")
            return inner
        if tok.kind in self.prefix_ops:
            return self.prefix(self.advance())
        raise self.error(tok, self.starters())

    def prefix(self, tok: _Tok) -> _Tree:
        return _Tree(tok.kind, tok.pos, [self.expr(self.prefix_bp)])

    def fail(self, tree: _Tree, message: str) -> ParseError:
        return ParseError(message, self.text, tree.pos)

    def atom(self, tree: _Tree) -> PAtom:
        if not valid_identifier(tree.text):
            raise self.fail(tree, f"reserved word {tree.text!r} cannot name a proposition")
        return PAtom(tree.text)


class _LdlfParser(_Pratt):
    infix = {"+": (10, False), ";": (20, False), "->": (40, True), "|": (50, False), "&": (60, False)}
    postfix = {"*": 30, "?": 30}
    atoms = frozenset(_LDLF_CONSTANTS)
    prefix_ops = frozenset({"!", "<", "["})

    def prefix(self, tok):
        if tok.kind == "!":
            return _Tree("!", tok.pos, [self.expr(self.prefix_bp)])
        path = self.expr(0)
        self.expect(">" if tok.kind == "<" else "]")
        body = self.expr(self.prefix_bp)
        return _Tree(tok.kind, tok.pos, [path, body])

    # conversion of untyped trees

    def to_prop(self, t: _Tree) -> PropFormula:
        match t.op:
            case "ident":
                return self.atom(t)
            case "const" if t.text == "true":
                return PTrue()
            case "const" if t.text == "false":
                return PFalse()
            case "!":
                return PNot(self.to_prop(t.args[0]))
            case "&":
                return PAnd(self.to_prop(t.args[0]), self.to_prop(t.args[1]))
            case "|":
                return POr(self.to_prop(t.args[0]), self.to_prop(t.args[1]))
            case "->":
                return POr(PNot(self.to_prop(t.args[0])), self.to_prop(t.args[1]))
        raise self.fail(t, "expected a propositional formula (add '?' to use a formula as a test)")

    def to_path(self, t: _Tree) -> PathExpr:
        match t.op:
            case "+":
                return Union(self.to_path(t.args[0]), self.to_path(t.args[1]))
            case ";":
                return Seq(self.to_path(t.args[0]), self.to_path(t.args[1]))
            case "*":
                return Star(self.to_path(t.args[0]))
            case "?":
                return Test(self.to_ldlf(t.args[0]))
        return Letter(self.to_prop(t))

    def to_ldlf(self, t: _Tree) -> LdlfFormula:
        match t.op:
            case "ident":
                return Prop(self.atom(t))
            case "const":
                return {"tt": TT, "ff": FF, "true": Prop(PTrue()), "false": Prop(PFalse()),
                        "end": END, "last": LAST}[t.text]
            case "!":
                return Not(self.to_ldlf(t.args[0]))
            case "&":
                return And(self.to_ldlf(t.args[0]), self.to_ldlf(t.args[1]))
            case "|":
                return Or(self.to_ldlf(t.args[0]), self.to_ldlf(t.args[1]))
            case "->":
                return Or(Not(self.to_ldlf(t.args[0])), self.to_ldlf(t.args[1]))
            case "<":
                return Diamond(self.to_path(t.args[0]), self.to_ldlf(t.args[1]))
            case "[":
                return Box(self.to_path(t.args[0]), self.to_ldlf(t.args[1]))
        raise self.fail(t, f"path operator {t.op!r} used where a formula is expected")


class _LtlfParser(_Pratt):
    infix = {"->": (40, True), "|": (50, False), "&": (60, False), "U": (65, True)}
    postfix = {}
    atoms = frozenset({"true", "false"})
    prefix_ops = frozenset({"!", *_LTLF_PREFIX, "U"})

    def primary(self):
        tok = self.peek()
        if tok.kind == "U":
            raise self.error(tok, {"identifier", "(", "!", "true", "false", *_LTLF_PREFIX})
        return super().primary()

    def starters(self):
        return {"identifier", "(", "!", "true", "false", *_LTLF_PREFIX}

    def to_ltlf(self, t: _Tree) -> LtlfFormula:
        match t.op:
            case "ident":
                return LtlProp(self.atom(t))
            case "const":
                return LtlProp(PTrue() if t.text == "true" else PFalse())
            case "!":
                return LtlNot(self.to_ltlf(t.args[0]))
            case "&":
                return LtlAnd(self.to_ltlf(t.args[0]), self.to_ltlf(t.args[1]))
            case "|":
                return LtlOr(self.to_ltlf(t.args[0]), self.to_ltlf(t.args[1]))
            case "->":
                return LtlOr(LtlNot(self.to_ltlf(t.args[0])), self.to_ltlf(t.args[1]))
            case "U":
                return Until(self.to_ltlf(t.args[0]), self.to_ltlf(t.args[1]))
        unary = {"X": Next, "N": WeakNext, "F": Eventually, "G": Always}
        return unary[t.op](self.to_ltlf(t.args[0]))


def parse_ldlf(text: str) -> LdlfFormula:
    """Parse an LDLf formula; raises :class:`ParseError` on bad input."""
    p = _LdlfParser(text)
    return p.to_ldlf(p.parse_all())


def parse_path(text: str) -> PathExpr:
    p = _LdlfParser(text)
    return p.to_path(p.parse_all())


def parse_prop(text: str) -> PropFormula:
    p = _LdlfParser(text)
    return p.to_prop(p.parse_all())


def parse_ltlf(text: str) -> LtlfFormula:
    p = _LtlfParser(text)
    return p.to_ltlf(p.parse_all())


# --------------------------------------------------------------------------
# printing

_ATOMIC = 100
_PREFIX = 70


def _prec(n: Node) -> int:
    match n:
        case Or() | POr() | LtlOr():
            return 50
        case And() | PAnd() | LtlAnd():
            return 60
        case Until():
            return 65
        case Not() | PNot() | LtlNot() | Diamond() | Box() | Next() | WeakNext() | Eventually() | Always():
            return _PREFIX
        case Union():
            return 10
        case Seq():
            return 20
        case Star() | Test():
            return 30
        case Letter(p):
            return _prec(p)
    return _ATOMIC


def _wrap(n: Node, min_prec: int) -> str:
    s = render(n)
    return s if _prec(n) >= min_prec else f"({s})"


def _path_operand(r: PathExpr, min_prec: int) -> str:
    # compound letters inside path operators are parenthesized for readability
    if isinstance(r, Letter) and _prec(r) < _ATOMIC:
        return f"({render(r)})"
    return _wrap(r, min_prec)


def _postfix_operand(n: Node) -> str:
    return render(n) if _prec(n) == _ATOMIC else f"({render(n)})"


def render(n: Node) -> str:
    """Print any formula or path so that parsing it gives back the same node."""
    match n:
        case PAtom(name):
            return name
        case PTrue():
            return "true"
        case PFalse():
            return "false"
        case Tt():
            return "tt"
        case Ff():
            return "ff"
        case Prop(p) | LtlProp(p):
            return render(p)
        case PNot(arg) | Not(arg) | LtlNot(arg):
            return "!" + _wrap(arg, _PREFIX)
        case PAnd(left, right) | And(left, right) | LtlAnd(left, right):
            return f"{_wrap(left, 60)} & {_wrap(right, 61)}"
        case POr(left, right) | Or(left, right) | LtlOr(left, right):
            return f"{_wrap(left, 50)} | {_wrap(right, 51)}"
        case Diamond(path, body):
            return f"<{render(path)}>{_wrap(body, _PREFIX)}"
        case Box(path, body):
            return f"[{render(path)}]{_wrap(body, _PREFIX)}"
        case Letter(p):
            return render(p)
        case Test(formula):
            return _postfix_operand(formula) + "?"
        case Star(arg):
            return _postfix_operand(arg) + "*"
        case Union(left, right):
            return f"{_path_operand(left, 10)} + {_path_operand(right, 11)}"
        case Seq(left, right):
            return f"{_path_operand(left, 20)};{_path_operand(right, 21)}"
        case Next(arg):
            return "X " + _wrap(arg, _PREFIX)
        case WeakNext(arg):
            return "N " + _wrap(arg, _PREFIX)
        case Eventually(arg):
            return "F " + _wrap(arg, _PREFIX)
        case Always(arg):
            return "G " + _wrap(arg, _PREFIX)
        case Until(left, right):
            return f"{_wrap(left, 66)} U {_wrap(right, 65)}"
    raise TypeError(f"cannot render {n!r}")
