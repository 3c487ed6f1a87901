"""Brute-force oracles and policy audits.

Everything here is deliberately naive and shares no search code with the
fast paths, so agreement between the two is meaningful. Oracles refuse
inputs above their size guard instead of degrading.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .automaton import Automaton, Event, State, Transition, sorted_names
from .costmodel import SecurityConfig, candidate_events
from .policy import Policy
from .reachability import weakest_policy_path
from .supcon import EMPTY_SUPERVISOR, Specification, Supervisor
from .synthesis import UhscpInstance, UscpInstance

COUNT_GUARD = 64
SUPCON_GUARD = 4


class OracleGuardError(RuntimeError):
    """Instance is too large for an exhaustive oracle."""


def oracle_min_count(a: Automaton, target: Iterable[State], designated: Iterable[Event]) -> float:
    """Fewest designated events on a string into ``target``, by search over (state, count).

    Counts are capped at ``|Q| + 1``. A string with a minimal count can be
    shortened to one that never revisits a (state, count) pair with the same
    count, and between two increments it visits at most ``|Q|`` states, so a
    minimal witness is a simple path and carries at most ``|Q| - 1``
    designated events. Any count at the cap is therefore never minimal.
    """
    if len(a.states) > COUNT_GUARD:
        raise OracleGuardError(f"{len(a.states)} states exceed the guard of {COUNT_GUARD}")
    target = frozenset(target)
    designated = frozenset(designated)
    cap = len(a.states) + 1
    if a.initial not in a.states:
        return math.inf
    seen = {(a.initial, 0)}
    queue = deque(seen)
    while queue:
        q, c = queue.popleft()
        for (src, e), r in a.delta.items():
            if src != q:
                continue
            nxt = (r, min(cap, c + (e in designated)))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    counts = [c for q, c in seen if q in target]
    return min(counts) if counts else math.inf


def _reachable_within(init: State, keep: FrozenSet[State], trans: Sequence[Transition]) -> set:
    seen = {init}
    changed = True
    while changed:
        changed = False
        for q, _, r in trans:
            if q in seen and r in keep and r not in seen:
                seen.add(r)
                changed = True
    return seen


def oracle_supcon(plant: Automaton, spec: Specification, controllable: Iterable[Event]) -> Supervisor:
    """Union of every controllable, reachable state subset of ``spec`` that holds the initial state."""
    if len(spec.states) > SUPCON_GUARD:
        raise OracleGuardError(f"{len(spec.states)} specification states exceed the guard of {SUPCON_GUARD}")
    controllable = frozenset(controllable)
    if spec.is_empty:
        return EMPTY_SUPERVISOR
    spec_trans = set(spec.transitions)
    others = sorted_names(spec.states - {spec.initial})
    winners: List[FrozenSet[State]] = []
    for k in range(len(others) + 1):
        for extra in combinations(others, k):
            keep = frozenset((spec.initial,) + extra)
            inner = [t for t in spec_trans if t[0] in keep and t[2] in keep]
            if _reachable_within(spec.initial, keep, inner) != keep:
                continue
            ok = all(
                (q, e, r) in spec_trans and r in keep
                for q, e, r in plant.transitions
                if q in keep and e not in controllable
            )
            if ok:
                winners.append(keep)
    if not winners:
        return EMPTY_SUPERVISOR
    best = frozenset().union(*winners)
    if best not in winners:
        raise AssertionError("controllable subautomata are not closed under union")
    return Supervisor(
        Automaton(
            states=best,
            alphabet=plant.alphabet,
            transitions=[t for t in spec_trans if t[0] in best and t[2] in best],
            initial=plant.initial,
            marked=best,
        )
    )


def oracle_min_index(inst: UscpInstance) -> Optional[int]:
    """Least cost index whose candidate events make the secrets ``u``-securely reachable."""
    for i in range(inst.v, inst.cost.n + 1):
        gamma = candidate_events(inst.cost, inst.cfg, i, inst.v) & inst.plant.protectable
        if oracle_min_count(inst.plant, inst.secrets, gamma) >= inst.u:
            return i
    return None


def oracle_min_index_uhscp(inst: UhscpInstance) -> Optional[int]:
    """Largest per-group least index, or ``None`` if some group has none."""
    best = -1
    for j in range(len(inst.secret_groups)):
        i = oracle_min_index(inst.group(j))
        if i is None:
            return None
        best = max(best, i)
    return best


@dataclass(frozen=True)
class GroupAudit:
    targets: FrozenSet[State]
    min_level: int
    min_count: float
    passed: bool
    counterexample: Tuple[Transition, ...] = ()

    @property
    def counterexample_events(self) -> Tuple[Event, ...]:
        return tuple(e for _, e, _ in self.counterexample)


@dataclass(frozen=True)
class AuditReport:
    u: int
    groups: Tuple[GroupAudit, ...]

    @property
    def passed(self) -> bool:
        return all(g.passed for g in self.groups)

    def render(self) -> str:
        lines = []
        for j, g in enumerate(self.groups):
            verdict = "pass" if g.passed else "FAIL"
            count = "inf" if math.isinf(g.min_count) else str(int(g.min_count))
            lines.append(f"group {j} {{{', '.join(sorted_names(g.targets))}}} level>={g.min_level}: "
                         f"min protections {count} (need {self.u}) {verdict}")
            if not g.passed:
                path = " ".join([g.counterexample[0][0]] + [f"-{e}-> {r}" for _, e, r in g.counterexample]) \
                    if g.counterexample else "(initial state is a target)"
                lines.append(f"  counterexample: {path}")
        lines.append("all groups pass" if self.passed else "audit failed")
        return "\n".join(lines)


def audit_policy(
    a: Automaton,
    policy: Policy,
    groups: Sequence[Tuple[Iterable[State], int]],
    u: int,
    cfg: SecurityConfig,
) -> AuditReport:
    """Check every group gets ``u`` protections of level ``>= v_j`` on every string into it."""
    out = []
    for targets, v in groups:
        targets = frozenset(targets)
        count, path = weakest_policy_path(a, targets, policy, v, cfg)
        passed = count >= u
        out.append(GroupAudit(targets, v, count, passed, () if passed else tuple(path)))
    return AuditReport(u, tuple(out))
