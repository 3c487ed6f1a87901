"""State-indexed event sets, read either as control or as protection decisions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Set, Tuple

from .automaton import Event, State, natural_key, sorted_names

CONTROL = "control"
PROTECTION = "protection"


@dataclass(frozen=True)
class Policy:
    """Map ``state -> set of events``; states not listed map to the empty set.

    ``kind`` is :data:`CONTROL` when the events are disabled by a supervisor
    and :data:`PROTECTION` when they are to be protected.
    """

    entries: Mapping[State, FrozenSet[Event]]
    kind: str = CONTROL

    def __post_init__(self):
        if self.kind not in (CONTROL, PROTECTION):
            raise ValueError(f"unknown policy kind {self.kind!r}")
        clean = {q: frozenset(es) for q, es in self.entries.items() if es}
        object.__setattr__(self, "entries", {q: clean[q] for q in sorted_names(clean)})

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def empty(cls, kind: str = CONTROL) -> "Policy":
        return cls({}, kind)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[State, Event]], kind: str = CONTROL) -> "Policy":
        entries: Dict[State, Set[Event]] = {}
        for q, e in pairs:
            entries.setdefault(q, set()).add(e)
        return cls(entries, kind)

    def __getitem__(self, q: State) -> FrozenSet[Event]:
        return self.entries.get(q, frozenset())

    def __contains__(self, pair) -> bool:
        q, e = pair
        return e in self.entries.get(q, ())

    def pairs(self) -> List[Tuple[State, Event]]:
        """All ``(state, event)`` pairs in deterministic order."""
        return [(q, e) for q in self.entries for e in sorted(self.entries[q], key=natural_key)]

    def as_dict(self) -> Dict[State, Set[Event]]:
        return {q: set(es) for q, es in self.entries.items()}

    def with_kind(self, kind: str) -> "Policy":
        return Policy(self.entries, kind)

    def is_empty(self) -> bool:
        return not self.entries
