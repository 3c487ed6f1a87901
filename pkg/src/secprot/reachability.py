"""Minimum number of designated occurrences on strings reaching a target set.

Both queries are shortest-path problems with weights in {0, 1}, solved with a
deque-based breadth-first search. Cycles never help because weights are
non-negative, so the minimum over all (possibly cyclic) strings is exact.
"""
from __future__ import annotations

import math
from collections import deque
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple

from .automaton import Automaton, Event, ModelError, State, Transition
from .costmodel import SecurityConfig
from .policy import Policy

#: Returned when no string reaches the target.
UNREACHABLE = math.inf


def _check_target(a: Automaton, target: Iterable[State]) -> FrozenSet[State]:
    target = frozenset(target)
    unknown = target - a.states
    if unknown:
        raise ModelError(f"target states not in automaton: {sorted(unknown)}")
    return target


def zero_one_search(
    a: Automaton,
    target: FrozenSet[State],
    weight: Callable[[State, Event], int],
) -> Tuple[float, List[Transition]]:
    """Return ``(min weight, minimizing path)`` from the initial state to ``target``.

    The path is a list of transitions; it is empty when the initial state is
    itself a target, and the weight is :data:`UNREACHABLE` when no path exists.
    """
    if a.initial not in a.states:
        return UNREACHABLE, []
    dist: Dict[State, int] = {a.initial: 0}
    parent: Dict[State, Transition] = {}
    done = set()
    dq = deque([a.initial])
    while dq:
        q = dq.popleft()
        if q in done:
            continue
        done.add(q)
        if q in target:
            path = []
            cur = q
            while cur in parent:
                t = parent[cur]
                path.append(t)
                cur = t[0]
            return dist[q], path[::-1]
        d = dist[q]
        for e, r in a.out_edges.get(q, ()):
            w = weight(q, e)
            nd = d + w
            if r not in dist or nd < dist[r]:
                dist[r] = nd
                parent[r] = (q, e, r)
                if w:
                    dq.append(r)
                else:
                    dq.appendleft(r)
    return UNREACHABLE, []


def min_designated_count(a: Automaton, target: Iterable[State], designated: Iterable[Event]) -> float:
    """Fewest occurrences of ``designated`` events on any string into ``target``."""
    target = _check_target(a, target)
    designated = frozenset(designated)
    return zero_one_search(a, target, lambda q, e: 1 if e in designated else 0)[0]


def is_uv_securely_reachable(
    a: Automaton, target: Iterable[State], designated: Iterable[Event], u: int
) -> bool:
    """Every string into ``target`` carries at least ``u`` designated events.

    The minimum security level is encoded in ``designated``; an unreachable
    target is vacuously secure.
    """
    if u < 1:
        raise ModelError(f"u must be >= 1, got {u}")
    return min_designated_count(a, target, designated) >= u


def _policy_weight(a: Automaton, policy: Policy, min_level: int, cfg: SecurityConfig):
    for q, e in policy.pairs():
        if (q, e) not in a.delta:
            raise ModelError(f"policy protects undefined transition ({q}, {e})")

    def weight(q: State, e: Event) -> int:
        if (q, e) not in policy:
            return 0
        lvl = cfg.level_of(e)
        return 1 if lvl is not None and lvl >= min_level else 0

    return weight


def min_policy_protection_count(
    a: Automaton,
    target: Iterable[State],
    policy: Policy,
    min_level: int,
    cfg: SecurityConfig,
) -> float:
    """Fewest protected transitions of level ``>= min_level`` on any path into ``target``."""
    target = _check_target(a, target)
    return zero_one_search(a, target, _policy_weight(a, policy, min_level, cfg))[0]


def weakest_policy_path(
    a: Automaton,
    target: Iterable[State],
    policy: Policy,
    min_level: int,
    cfg: SecurityConfig,
) -> Tuple[float, List[Transition]]:
    """Like :func:`min_policy_protection_count` but also returns a minimizing path."""
    target = _check_target(a, target)
    return zero_one_search(a, target, _policy_weight(a, policy, min_level, cfg))
