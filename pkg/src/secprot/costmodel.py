"""Usability sets and the combined security/usability cost levels.

A protectable transition ``(q, e)`` whose event sits in security level ``l``
lands in cost level ``l`` when fewer than ``threshold`` non-secret marker
states lie downstream of it, and in cost level ``l + 1`` otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .automaton import (
    Automaton,
    Event,
    ModelError,
    State,
    natural_key,
    reachable_from,
    scc_order,
)


class ConfigError(ModelError):
    """Security configuration does not match the automaton."""


@dataclass(frozen=True)
class SecurityConfig:
    """Partition of the protectable events into ``n`` security levels, plus ``T``."""

    levels: Tuple[FrozenSet[Event], ...]
    threshold: int = 1

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(frozenset(s) for s in self.levels))

    @property
    def n(self) -> int:
        return len(self.levels)

    @property
    def protectable(self) -> FrozenSet[Event]:
        return frozenset().union(*self.levels)

    def level_of(self, event: Event) -> Optional[int]:
        for i, s in enumerate(self.levels):
            if event in s:
                return i
        return None

    def level_set(self, i: int) -> FrozenSet[Event]:
        """``Sigma_i``, with ``Sigma_{-1}`` taken as empty."""
        if i < 0:
            return frozenset()
        return self.levels[i]

    @classmethod
    def from_automaton(cls, a: Automaton, threshold: int, n: Optional[int] = None) -> "SecurityConfig":
        top = max((at.level for at in a.alphabet.values() if at.protectable and at.level is not None),
                  default=-1)
        n = max(top + 1, 1) if n is None else n
        levels: List[Set[Event]] = [set() for _ in range(n)]
        for e, at in a.alphabet.items():
            if at.protectable:
                if at.level is None or not 0 <= at.level < n:
                    raise ConfigError(f"event {e!r} has security level {at.level} outside [0, {n - 1}]")
                levels[at.level].add(e)
        return cls(tuple(levels), threshold)

    def check(self, a: Optional[Automaton] = None) -> None:
        if self.n < 1:
            raise ConfigError("at least one security level is required")
        if self.threshold < 1:
            raise ConfigError(f"threshold must be >= 1, got {self.threshold}")
        seen: Set[Event] = set()
        for i, s in enumerate(self.levels):
            overlap = seen & s
            if overlap:
                raise ConfigError(f"events {sorted(overlap)} appear in more than one level")
            seen |= s
        if a is not None:
            if seen != a.protectable:
                raise ConfigError(
                    "levels do not partition the protectable events "
                    f"(missing {sorted(a.protectable - seen)}, extra {sorted(seen - a.protectable)})"
                )
            for i, s in enumerate(self.levels):
                for e in s:
                    if a.alphabet[e].level not in (None, i):
                        raise ConfigError(f"event {e!r} declared at level {a.alphabet[e].level}, config says {i}")


@dataclass(frozen=True, order=True)
class CostRecord:
    state: State
    event: Event
    usability_count: int

    @property
    def pair(self) -> Tuple[Event, int]:
        return (self.event, self.usability_count)


@dataclass(frozen=True)
class CostLevels:
    """The ``n + 1`` sets ``C_0 .. C_n`` of cost records."""

    levels: Tuple[FrozenSet[CostRecord], ...]

    @property
    def n(self) -> int:
        return len(self.levels) - 1

    def pairs(self, i: int) -> Set[Tuple[Event, int]]:
        """Level ``i`` projected to ``(event, count)`` pairs, as the sets are usually written."""
        return {r.pair for r in self.levels[i]}

    def level_of(self, state: State, event: Event) -> Optional[int]:
        for i, recs in enumerate(self.levels):
            for r in recs:
                if r.state == state and r.event == event:
                    return i
        return None

    def table(self) -> List[List[Tuple[Event, int]]]:
        return [sorted(self.pairs(i), key=lambda p: (natural_key(p[0]), p[1])) for i in range(len(self.levels))]


def _usable_targets(a: Automaton) -> FrozenSet[State]:
    return a.marked - a.secrets


def usability_set(a: Automaton, q: State, event: Event) -> FrozenSet[State]:
    """Non-secret marker states reachable from ``delta(q, event)``, itself included."""
    if event not in a.alphabet:
        raise ModelError(f"unknown event {event!r}")
    nxt = a.delta.get((q, event))
    if nxt is None:
        raise ModelError(f"transition ({q}, {event}) is undefined")
    return frozenset(reachable_from(a, [nxt]) & _usable_targets(a))


def _usability_counts(a: Automaton) -> Dict[State, int]:
    # One pass over the condensation: reachable-marker sets as bitmasks.
    usable = _usable_targets(a)
    bit = {q: 1 << k for k, q in enumerate(sorted(usable, key=natural_key))}
    comp_of: Dict[State, int] = {}
    masks: List[int] = []
    for cid, comp in enumerate(scc_order(a)):  # successors come first
        mask = 0
        for q in comp:
            comp_of[q] = cid
            mask |= bit.get(q, 0)
        for q in comp:
            for _, r in a.out_edges.get(q, ()):
                c = comp_of.get(r)
                if c is not None and c != cid:
                    mask |= masks[c]
        masks.append(mask)
    return {q: bin(masks[comp_of[q]]).count("1") for q in a.states}


def build_cost_levels(a: Automaton, cfg: SecurityConfig) -> CostLevels:
    cfg.check(a)
    counts = _usability_counts(a)
    buckets: List[Set[CostRecord]] = [set() for _ in range(cfg.n + 1)]
    for q, e, r in a.transitions:
        lvl = cfg.level_of(e)
        if lvl is None:
            continue
        c = counts[r]
        buckets[lvl if c < cfg.threshold else lvl + 1].add(CostRecord(q, e, c))
    return CostLevels(tuple(frozenset(b) for b in buckets))


def events_of_level(c: CostLevels, i: int) -> FrozenSet[Event]:
    """``Sigma(C_i)``: events with at least one record in level ``i``."""
    if not 0 <= i <= c.n:
        raise ModelError(f"cost level {i} outside [0, {c.n}]")
    return frozenset(r.event for r in c.levels[i])


def candidate_events(c: CostLevels, cfg: SecurityConfig, i: int, v: int) -> FrozenSet[Event]:
    """Events usable at cost index ``i`` under minimum security level ``v``."""
    if v > i:
        raise ModelError(f"security level {v} exceeds cost index {i}")
    if not 0 <= v <= cfg.n - 1:
        raise ModelError(f"security level {v} outside [0, {cfg.n - 1}]")
    out: Set[Event] = set()
    for lvl in range(v, i + 1):
        out |= events_of_level(c, lvl)
    return frozenset(out - cfg.level_set(v - 1))


def protectable_at_least(cfg: SecurityConfig, v: int) -> FrozenSet[Event]:
    if not 0 <= v <= cfg.n - 1:
        raise ModelError(f"security level {v} outside [0, {cfg.n - 1}]")
    return frozenset().union(*cfg.levels[v:])

