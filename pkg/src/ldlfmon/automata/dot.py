"""Graphviz DOT export."""
from __future__ import annotations

from typing import Mapping

from ..syntax import render
from .alphabet import LAST
from .core import Dfa, Nfa
from .regex import guard

__all__ = ["to_dot"]

#: fill colours used when states carry a verdict
VERDICT_COLORS = {
    "true": "#4caf50",
    "temp_true": "#c5e1a5",
    "temp_false": "#ffe082",
    "false": "#ef5350",
}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(a: Nfa | Dfa, name: str = "automaton",
           colors: Mapping[int, str] | None = None) -> str:
    """Render ``a`` as DOT.

    Edges between the same pair of states are merged, labelled with one
    guard covering all their symbols. ``colors`` maps states to verdict
    names, which are shown in the node label and as the fill colour.
    """
    lines = [f"digraph {_quote(name)} {{", "  rankdir=LR;", '  node [fontname="Helvetica"];',
             '  __start [shape=point, label=""];']
    for q in range(a.num_states):
        attrs = [f"shape={'doublecircle' if q in a.accepting else 'circle'}"]
        label = str(q)
        if colors is not None and q in colors:
            verdict = colors[q]
            label = f"{q}\\n{verdict}"
            attrs += ["style=filled", f"fillcolor={_quote(VERDICT_COLORS.get(verdict, 'white'))}"]
        attrs.insert(0, f"label={_quote(label)}")
        lines.append(f"  {q} [{', '.join(attrs)}];")
    initial = [a.initial] if isinstance(a, Dfa) else sorted(a.initial)
    for q in initial:
        lines.append(f"  __start -> {q};")

    marked = isinstance(a, Nfa) and a.marked
    grouped: dict[tuple[int, int, bool], set[int]] = {}
    for q, k, p in a.edges():
        if marked:
            grouped.setdefault((q, p, bool(k % 2)), set()).add(k // 2)
        else:
            grouped.setdefault((q, p, False), set()).add(k)
    for (q, p, last), ks in sorted(grouped.items()):
        text = render(guard(a.alphabet, ks))
        if last:
            text = f"({text}) & {LAST}"
        lines.append(f"  {q} -> {p} [label={_quote(text)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
