"""Deterministic finite automata annotated with marker and secret states.

States and events are plain strings. An :class:`Automaton` is treated as an
immutable value: every transformation in this package returns a new one.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

State = str
Event = str
Transition = Tuple[State, Event, State]

#: Character reserved for generated (relabeled) event names.
RESERVED = "#"


class ModelError(ValueError):
    """Raised on malformed models or on queries that reference unknown items."""


@dataclass(frozen=True)
class EventAttrs:
    """Protection attributes of one event.

    ``level`` is the security level index and is present iff the event is
    protectable.
    """

    protectable: bool = False
    level: Optional[int] = None


def natural_key(name: str):
    """Sort key that orders ``q2`` before ``q10``."""
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name)]


def sorted_names(names: Iterable[str]) -> List[str]:
    return sorted(names, key=natural_key)


@dataclass(frozen=True)
class Automaton:
    """A (partial) deterministic automaton ``(Q, Sigma, delta, q0, Q_m)`` plus ``Q_s``.

    Construction never raises; call :func:`validate` (or :func:`check_model`)
    to collect structural problems such as nondeterminism.
    """

    states: FrozenSet[State]
    alphabet: Mapping[Event, EventAttrs]
    transitions: Tuple[Transition, ...]
    initial: State
    marked: FrozenSet[State] = frozenset()
    secrets: FrozenSet[State] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "alphabet", dict(self.alphabet))
        object.__setattr__(
            self,
            "transitions",
            tuple(sorted((tuple(t) for t in self.transitions),
                         key=lambda t: (natural_key(t[0]), natural_key(t[1]), natural_key(t[2])))),
        )
        object.__setattr__(self, "marked", frozenset(self.marked))
        object.__setattr__(self, "secrets", frozenset(self.secrets))

    __hash__ = None  # type: ignore[assignment]

    @cached_property
    def delta(self) -> Dict[Tuple[State, Event], State]:
        out: Dict[Tuple[State, Event], State] = {}
        for q, e, r in self.transitions:
            out.setdefault((q, e), r)
        return out

    @cached_property
    def out_edges(self) -> Dict[State, List[Tuple[Event, State]]]:
        out: Dict[State, List[Tuple[Event, State]]] = {q: [] for q in self.states}
        for (q, e), r in self.delta.items():
            out.setdefault(q, []).append((e, r))
        return out

    @cached_property
    def in_edges(self) -> Dict[State, List[Tuple[State, Event]]]:
        inn: Dict[State, List[Tuple[State, Event]]] = {q: [] for q in self.states}
        for (q, e), r in self.delta.items():
            inn.setdefault(r, []).append((q, e))
        return inn

    @property
    def protectable(self) -> FrozenSet[Event]:
        return frozenset(e for e, at in self.alphabet.items() if at.protectable)

    @property
    def unprotectable(self) -> FrozenSet[Event]:
        return frozenset(e for e, at in self.alphabet.items() if not at.protectable)

    def level(self, event: Event) -> Optional[int]:
        return self.alphabet[event].level

    def replace(self, **changes) -> "Automaton":
        return replace(self, **changes)


def validate(a: Automaton) -> List[str]:
    """Return one message per violated structural invariant; empty iff well-formed."""
    report: List[str] = []
    if a.initial not in a.states:
        report.append(f"initial state unknown: {a.initial!r}")
    for q in sorted_names(a.marked - a.states):
        report.append(f"marked state unknown: {q!r}")
    for q in sorted_names(a.secrets - a.states):
        report.append(f"secret state unknown: {q!r}")
    for e, at in a.alphabet.items():
        if not e:
            report.append("empty event name")
        if at.protectable and at.level is None:
            report.append(f"protectable event {e!r} has no security level")
        if not at.protectable and at.level is not None:
            report.append(f"unprotectable event {e!r} has a security level")
        if at.level is not None and at.level < 0:
            report.append(f"negative security level on event {e!r}")
    seen: Dict[Tuple[State, Event], State] = {}
    for q, e, r in a.transitions:
        if q not in a.states:
            report.append(f"transition source unknown: ({q}, {e}, {r})")
        if r not in a.states:
            report.append(f"transition target unknown: ({q}, {e}, {r})")
        if e not in a.alphabet:
            report.append(f"transition event unknown: ({q}, {e}, {r})")
        if (q, e) in seen:
            if seen[(q, e)] == r:
                report.append(f"duplicate transition at ({q}, {e})")
            else:
                report.append(f"nondeterministic at ({q}, {e})")
        else:
            seen[(q, e)] = r
    return report


def check_model(a: Automaton, require_trim: bool = True) -> None:
    """Raise :class:`ModelError` unless ``a`` is well-formed (and trim, if required)."""
    report = validate(a)
    if report:
        raise ModelError("invalid automaton: " + "; ".join(report))
    if require_trim and not is_trim(a):
        raise ModelError(
            "automaton is not trim (unreachable: {}; not co-reachable: {})".format(
                sorted_names(a.states - reachable_states(a)),
                sorted_names(a.states - coreachable_states(a)),
            )
        )


def _search(start: Iterable[State], edges: Mapping[State, list], pick) -> set:
    seen = set(start)
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        for item in edges.get(q, ()):
            nxt = pick(item)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def reachable_from(a: Automaton, sources: Iterable[State]) -> set:
    return _search(sources, a.out_edges, lambda er: er[1])


def reachable_states(a: Automaton) -> FrozenSet[State]:
    if a.initial not in a.states:
        return frozenset()
    return frozenset(reachable_from(a, [a.initial]))


def coreachable_states(a: Automaton) -> FrozenSet[State]:
    return frozenset(_search(a.marked & a.states, a.in_edges, lambda qe: qe[0]))


def is_trim(a: Automaton) -> bool:
    return reachable_states(a) == a.states and coreachable_states(a) == a.states


def step(a: Automaton, q: State, event: Event) -> Optional[State]:
    """Return ``delta(q, event)``, or ``None`` where it is undefined."""
    if q not in a.states:
        raise ModelError(f"unknown state {q!r}")
    if event not in a.alphabet:
        raise ModelError(f"unknown event {event!r}")
    return a.delta.get((q, event))


def run(a: Automaton, string: Iterable[Event], q: Optional[State] = None) -> Optional[State]:
    """Extend :func:`step` to strings; ``None`` once the string leaves ``L(a)``."""
    cur = a.initial if q is None else q
    for e in string:
        cur = step(a, cur, e)
        if cur is None:
            return None
    return cur


def scc_order(a: Automaton) -> List[List[State]]:
    """Strongly connected components in reverse topological order (Tarjan)."""
    index: Dict[State, int] = {}
    low: Dict[State, int] = {}
    on_stack = set()
    stack: List[State] = []
    comps: List[List[State]] = []
    counter = 0
    succ = {q: [r for _, r in a.out_edges.get(q, ())] for q in a.states}
    for root in sorted_names(a.states):
        if root in index:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            q, i = work[-1]
            nbrs = succ[q]
            if i < len(nbrs):
                work[-1] = (q, i + 1)
                r = nbrs[i]
                if r not in index:
                    index[r] = low[r] = counter
                    counter += 1
                    stack.append(r)
                    on_stack.add(r)
                    work.append((r, 0))
                elif r in on_stack:
                    low[q] = min(low[q], index[r])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[q])
            if low[q] == index[q]:
                comp = []
                while True:
                    r = stack.pop()
                    on_stack.discard(r)
                    comp.append(r)
                    if r == q:
                        break
                comps.append(comp)
    return comps
