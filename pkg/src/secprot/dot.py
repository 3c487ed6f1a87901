"""Graphviz text export."""
from __future__ import annotations

from typing import List, Optional

from .automaton import Automaton, sorted_names
from .policy import Policy


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(a: Automaton, policy: Optional[Policy] = None, name: str = "plant") -> str:
    """Marked states get a double border, secrets are shaded, protected edges are bold red.

    Nodes come in natural name order and edges in transition order, so the
    output is stable for a given model and policy.
    """
    policy = policy or Policy.empty()
    lines: List[str] = [f"digraph {_quote(name)} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for q in sorted_names(a.states):
        attrs = []
        if q == a.initial:
            attrs.append('xlabel="initial"')
        if q in a.marked:
            attrs.append("shape=doublecircle")
        if q in a.secrets:
            attrs.append('style=filled, fillcolor="gray75"')
        lines.append(f"  {_quote(q)}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for q, e, r in a.transitions:
        if (q, e) in policy:
            label = _quote(f"{e} (protected)")
            lines.append(f"  {_quote(q)} -> {_quote(r)} [label={label}, color=red, penwidth=2, "
                         f"class=protected];")
        else:
            lines.append(f"  {_quote(q)} -> {_quote(r)} [label={_quote(e)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
