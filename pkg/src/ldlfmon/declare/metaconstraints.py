"""Boolean expressions over constraint verdicts, and their compilation.

Two small languages share one grammar::

    expr  := expr "->" expr | expr "|" expr | expr "&" expr | "!" expr
           | "(" expr ")" | "true" | "false" | atom
    atom  := "[" ident "]" "=" verdict      (precondition side)
           | ident                          (expectation side)

``->`` is right-associative and binds loosest, ``!`` tightest.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Union as TypingUnion

from ..formula import FF, TT, And, LdlfFormula, Not, Or
from ..monitor import RvVerdict

__all__ = [
    "MetaExpr", "VerdictAtom", "RefAtom", "BoolConst", "BoolNot", "BoolBin",
    "parse_precondition", "parse_expectation", "MetaSyntaxError", "compile_bool",
    "referenced_ids",
]


class MetaSyntaxError(ValueError):
    def __init__(self, message: str, text: str, offset: int):
        super().__init__(f"{message} at column {offset + 1} in {text!r}")
        self.offset = offset


@dataclass(frozen=True)
class VerdictAtom:
    constraint: str
    verdict: RvVerdict


@dataclass(frozen=True)
class RefAtom:
    constraint: str


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class BoolNot:
    arg: "MetaExpr"


@dataclass(frozen=True)
class BoolBin:
    op: str  # "&", "|", "->"
    left: "MetaExpr"
    right: "MetaExpr"


MetaExpr = TypingUnion[VerdictAtom, RefAtom, BoolConst, BoolNot, BoolBin]

_TOKEN = re.compile(r"\s*(?:(->|[!&|()\[\]=])|([A-Za-z_][A-Za-z0-9_]*))")
_BINDING = {"->": (10, 9), "|": (20, 21), "&": (30, 31)}


def _is_ident(tok: str | None) -> bool:
    return tok is not None and (tok[0].isalpha() or tok[0] == "_")


class _Parser:
    def __init__(self, text: str, verdicts: bool):
        self.text = text
        self.verdicts = verdicts
        self.tokens: list[tuple[str, int]] = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if m is None:
                rest = text[pos:]
                if rest.strip():
                    raise MetaSyntaxError("unexpected character", text,
                                          pos + len(rest) - len(rest.lstrip()))
                break
            self.tokens.append((m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def where(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            what = "end of input" if tok is None else repr(tok)
            want = f", expected {expected!r}" if expected else ""
            raise MetaSyntaxError(f"unexpected {what}{want}", self.text, self.where())
        self.i += 1
        return tok

    def parse(self) -> MetaExpr:
        e = self.expr(0)
        if self.peek() is not None:
            raise MetaSyntaxError(f"unexpected {self.peek()!r}", self.text, self.where())
        return e

    def expr(self, min_bp: int) -> MetaExpr:
        left = self.unary()
        while (op := self.peek()) in _BINDING:
            lbp, rbp = _BINDING[op]
            if lbp < min_bp:
                break
            self.take()
            left = BoolBin(op, left, self.expr(rbp))
        return left

    def unary(self) -> MetaExpr:
        tok = self.peek()
        if tok == "!":
            self.take()
            return BoolNot(self.unary())
        if tok == "(":
            self.take()
            e = self.expr(0)
            self.take(")")
            return e
        if tok in ("true", "false"):
            self.take()
            return BoolConst(tok == "true")
        if tok == "[" and self.verdicts:
            self.take()
            name = self.ident()
            self.take("]")
            self.take("=")
            at = self.where()
            word = self.ident()
            try:
                return VerdictAtom(name, RvVerdict(word))
            except ValueError:
                raise MetaSyntaxError(
                    f"unknown verdict {word!r} (use one of {', '.join(v.value for v in RvVerdict)})",
                    self.text, at) from None
        if not self.verdicts and _is_ident(tok):
            return RefAtom(self.take())
        want = "'[id] = verdict'" if self.verdicts else "a constraint id"
        what = "end of input" if tok is None else repr(tok)
        raise MetaSyntaxError(f"unexpected {what}, expected {want}", self.text, self.where())

    def ident(self) -> str:
        tok = self.peek()
        if not _is_ident(tok):
            what = "end of input" if tok is None else repr(tok)
            raise MetaSyntaxError(f"unexpected {what}, expected an identifier", self.text, self.where())
        return self.take()


def parse_precondition(text: str) -> MetaExpr:
    """Parse a boolean expression over ``[id] = verdict`` atoms."""
    return _Parser(text, verdicts=True).parse()


def parse_expectation(text: str) -> MetaExpr:
    """Parse a boolean expression over constraint ids."""
    return _Parser(text, verdicts=False).parse()


def referenced_ids(e: MetaExpr) -> list[str]:
    out: list[str] = []

    def go(x):
        match x:
            case VerdictAtom(c, _) | RefAtom(c):
                if c not in out:
                    out.append(c)
            case BoolNot(a):
                go(a)
            case BoolBin(_, a, b):
                go(a)
                go(b)

    go(e)
    return out


def compile_bool(e: MetaExpr, atom: Callable[[MetaExpr], LdlfFormula]) -> LdlfFormula:
    """Translate to an LDLf formula, turning each atom into ``atom(a)``."""
    match e:
        case BoolConst(v):
            return TT if v else FF
        case BoolNot(a):
            return Not(compile_bool(a, atom))
        case BoolBin("&", a, b):
            return And(compile_bool(a, atom), compile_bool(b, atom))
        case BoolBin("|", a, b):
            return Or(compile_bool(a, atom), compile_bool(b, atom))
        case BoolBin("->", a, b):
            return Or(Not(compile_bool(a, atom)), compile_bool(b, atom))
        case VerdictAtom() | RefAtom():
            return atom(e)
    raise TypeError(f"not a metaconstraint expression: {e!r}")
