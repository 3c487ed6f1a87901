"""Supremal controllable subautomata and the disable-then-relabel transformation.

The specifications used here are prefix-closed and fully marked (the plant
with some states cut away), so the supremal controllable sublanguage is
realized by a subautomaton of the specification and no nonblocking pruning
is needed.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .automaton import (
    RESERVED,
    Automaton,
    Event,
    EventAttrs,
    ModelError,
    State,
    Transition,
    sorted_names,
)
from .policy import Policy


@dataclass(frozen=True)
class Specification:
    """Plant restricted to ``states``; every remaining state is marked.

    The initial state may be missing from ``states`` (it was secret), in which
    case the specification language is empty.
    """

    plant: Automaton
    states: FrozenSet[State]
    transitions: FrozenSet[Transition]

    __hash__ = None  # type: ignore[assignment]

    @property
    def initial(self) -> State:
        return self.plant.initial

    @property
    def is_empty(self) -> bool:
        return self.plant.initial not in self.states

    @property
    def automaton(self) -> Automaton:
        return Automaton(
            states=self.states,
            alphabet=self.plant.alphabet,
            transitions=self.transitions,
            initial=self.plant.initial,
            marked=self.states,
        )


@dataclass(frozen=True)
class Supervisor:
    """A subautomaton of the plant, or ``automaton=None`` when no supervisor exists."""

    automaton: Optional[Automaton]

    __hash__ = None  # type: ignore[assignment]

    @property
    def empty(self) -> bool:
        return self.automaton is None

    @property
    def states(self) -> FrozenSet[State]:
        return frozenset() if self.automaton is None else self.automaton.states

    @property
    def transitions(self) -> FrozenSet[Transition]:
        return frozenset() if self.automaton is None else frozenset(self.automaton.transitions)


EMPTY_SUPERVISOR = Supervisor(None)


@dataclass(frozen=True)
class RelabelMap:
    """Generated event name -> (original event name, iteration index)."""

    entries: Mapping[Event, Tuple[Event, int]]

    __hash__ = None  # type: ignore[assignment]

    def original(self, event: Event) -> Event:
        return self.entries[event][0] if event in self.entries else event


def resolve_event(event: Event, history: Sequence[RelabelMap]) -> Event:
    """Follow relabelings back to a user-supplied event name."""
    for m in reversed(history):
        event = m.original(event)
    return event


def build_specification(a: Automaton, secrets: Iterable[State]) -> Specification:
    """Remove ``secrets`` and every transition into or out of them."""
    secrets = frozenset(secrets)
    unknown = secrets - a.states
    if unknown:
        raise ModelError(f"secret states not in automaton: {sorted_names(unknown)}")
    keep = a.states - secrets
    trans = frozenset(t for t in a.transitions if t[0] in keep and t[2] in keep)
    return Specification(a, keep, trans)


def _spec_delta(plant: Automaton, spec: Specification) -> Dict[Tuple[State, Event], State]:
    out = {}
    for q, e, r in spec.transitions:
        if plant.delta.get((q, e)) != r:
            raise ModelError(f"specification transition ({q}, {e}, {r}) is not a plant transition")
        out[(q, e)] = r
    if not spec.states <= plant.states:
        raise ModelError("specification states are not plant states")
    return out


def supcon(plant: Automaton, spec: Specification, controllable: Iterable[Event]) -> Supervisor:
    """Largest reachable subautomaton of ``spec`` that is controllable w.r.t. ``controllable``.

    Events outside ``controllable`` cannot be disabled. A state is deleted when
    one of them leads out of the current region; the survivors are restricted
    to their reachable part, and both steps repeat until nothing changes.
    """
    controllable = frozenset(controllable)
    unknown = controllable - set(plant.alphabet)
    if unknown:
        raise ModelError(f"controllable events not in plant alphabet: {sorted(unknown)}")
    sdelta = _spec_delta(plant, spec)
    region: Set[State] = set(spec.states)

    while True:
        # uncontrollable exits from the region, propagated backwards
        pred: Dict[State, List[State]] = {}
        bad: Set[State] = set()
        for q in region:
            for e, r in plant.out_edges.get(q, ()):
                if e in controllable:
                    continue
                if sdelta.get((q, e)) != r or r not in region:
                    bad.add(q)
                else:
                    pred.setdefault(r, []).append(q)
        queue = deque(bad)
        while queue:
            r = queue.popleft()
            for q in pred.get(r, ()):
                if q not in bad:
                    bad.add(q)
                    queue.append(q)
        good = region - bad
        if spec.initial not in good:
            return EMPTY_SUPERVISOR
        reach = {spec.initial}
        queue = deque([spec.initial])
        while queue:
            q = queue.popleft()
            for e, r in plant.out_edges.get(q, ()):
                if sdelta.get((q, e)) == r and r in good and r not in reach:
                    reach.add(r)
                    queue.append(r)
        if reach == region:
            break
        region = reach

    trans = [(q, e, r) for (q, e), r in sdelta.items() if q in region and r in region]
    return Supervisor(
        Automaton(
            states=region,
            alphabet=plant.alphabet,
            transitions=trans,
            initial=plant.initial,
            marked=region,
        )
    )


def is_empty_by_lemma(plant: Automaton, spec: Specification, controllable: Iterable[Event]) -> bool:
    """True iff some string of non-controllable events leaves the specification.

    Independent of :func:`supcon`; the two must agree on emptiness.
    """
    controllable = frozenset(controllable)
    sdelta = _spec_delta(plant, spec)
    if spec.is_empty:
        return True
    seen = {spec.initial}
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        for e, r in plant.out_edges.get(q, ()):
            if e in controllable:
                continue
            if sdelta.get((q, e)) != r or r not in spec.states:
                return True
            if r not in seen:
                seen.add(r)
                queue.append(r)
    return False


def control_policy(plant: Automaton, s: Supervisor) -> Policy:
    """Events the plant allows but the supervisor does not, at each supervisor state."""
    if s.empty:
        raise ModelError("empty supervisor has no control policy")
    sup = s.automaton
    entries: Dict[State, Set[Event]] = {}
    for q in sup.states:
        allowed = {e for e, _ in sup.out_edges.get(q, ())}
        disabled = {e for e, _ in plant.out_edges.get(q, ()) if e not in allowed}
        if disabled:
            entries[q] = disabled
    return Policy(entries)


def fresh_name(event: Event, j: int, k: int, taken) -> Event:
    name = f"{event}{RESERVED}r{j}{RESERVED}{k}"
    while name in taken:
        name += RESERVED
    return name


def relabel(plant: Automaton, d: Policy, j: int) -> Tuple[Automaton, RelabelMap]:
    """Give every transition disabled by ``d`` a fresh uncontrollable event.

    An original event leaves the alphabet only when every one of its
    transitions was disabled.
    """
    by_event: Dict[Event, List[State]] = {}
    for q, e in d.pairs():
        if (q, e) not in plant.delta:
            raise ModelError(f"policy disables undefined transition ({q}, {e})")
        if not plant.alphabet[e].protectable:
            raise ModelError(f"policy disables uncontrollable event {e!r} at {q!r}")
        by_event.setdefault(e, []).append(q)

    alphabet = dict(plant.alphabet)
    rename: Dict[Tuple[State, Event], Event] = {}
    entries: Dict[Event, Tuple[Event, int]] = {}
    for e in sorted_names(by_event):
        for k, q in enumerate(sorted_names(by_event[e])):
            new = fresh_name(e, j, k, alphabet)
            alphabet[new] = EventAttrs(protectable=False)
            rename[(q, e)] = new
            entries[new] = (e, j)

    transitions = [(q, rename.get((q, e), e), r) for q, e, r in plant.transitions]
    still_used = {e for _, e, _ in transitions}
    for e in by_event:
        if e not in still_used:
            del alphabet[e]
    return plant.replace(alphabet=alphabet, transitions=transitions), RelabelMap(entries)
