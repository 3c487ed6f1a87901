"""Minimum-cost protection policies via supervisory control.

Protectable events are read as controllable. Each supervisor disables one
"cut" of transitions separating the initial state from the secrets; the cut
is relabeled to fresh uncontrollable events so the next supervisor has to
find a different one. ``u`` such cuts give ``u`` protections on every string
that reaches a secret.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .automaton import Automaton, Event, ModelError, State, check_model, sorted_names
from .costmodel import (
    CostLevels,
    SecurityConfig,
    build_cost_levels,
    candidate_events,
)
from .policy import CONTROL, PROTECTION, Policy
from .reachability import min_designated_count
from .supcon import (
    RelabelMap,
    Specification,
    Supervisor,
    build_specification,
    control_policy,
    relabel,
    resolve_event,
    supcon,
)

logger = logging.getLogger(__name__)

#: One cost index is shared by all ``u`` supervisors; indices are tried in
#: increasing order until ``u`` nonempty supervisors exist.
JOINT = "joint"
#: Each supervisor scans cost indices from ``v`` independently.
PER_ITERATION = "per_iteration"
#: Per-iteration trace when it reaches the least feasible index, else joint.
AUTO = "auto"


class Unsolvable(Exception):
    """No policy meets the requirement; carries where the search gave up."""

    def __init__(self, message: str, group: Optional[int] = None, last_index: Optional[int] = None):
        super().__init__(message)
        self.group = group
        self.last_index = last_index


@dataclass(frozen=True)
class UscpInstance:
    """Uniform-importance problem: protect ``secrets`` ``u`` times at level ``>= v``."""

    plant: Automaton
    secrets: FrozenSet[State]
    u: int
    v: int
    cfg: SecurityConfig
    cost: CostLevels

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "secrets", frozenset(self.secrets))
        if not self.secrets:
            raise ModelError("secret set is empty")
        if not self.secrets <= self.plant.states:
            raise ModelError(f"secrets not in plant: {sorted_names(self.secrets - self.plant.states)}")
        if self.u < 1:
            raise ModelError(f"u must be >= 1, got {self.u}")
        if not 0 <= self.v <= self.cfg.n - 1:
            raise ModelError(f"v must lie in [0, {self.cfg.n - 1}], got {self.v}")

    @classmethod
    def build(cls, plant: Automaton, secrets=None, u: int = 1, v: int = 0,
              threshold: int = 1, cfg: Optional[SecurityConfig] = None) -> "UscpInstance":
        """Validate ``plant`` (trim required) and derive the cost levels."""
        check_model(plant)
        cfg = cfg or SecurityConfig.from_automaton(plant, threshold)
        secrets = plant.secrets if secrets is None else secrets
        return cls(plant, frozenset(secrets), u, v, cfg, build_cost_levels(plant, cfg))


@dataclass(frozen=True)
class UhscpInstance:
    """Heterogeneous problem: group ``j`` needs ``u`` protections at level ``>= v_levels[j]``."""

    plant: Automaton
    secret_groups: Tuple[FrozenSet[State], ...]
    u: int
    v_levels: Tuple[int, ...]
    cfg: SecurityConfig
    cost: CostLevels

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self):
        groups = tuple(frozenset(g) for g in self.secret_groups)
        object.__setattr__(self, "secret_groups", groups)
        object.__setattr__(self, "v_levels", tuple(self.v_levels))
        if not groups:
            raise ModelError("at least one secret group is required")
        if len(groups) != len(self.v_levels):
            raise ModelError("need exactly one security level per secret group")
        seen: set = set()
        for g in groups:
            if not g:
                raise ModelError("secret groups must be nonempty")
            if g & seen:
                raise ModelError("secret groups must be disjoint")
            if not g <= self.plant.states:
                raise ModelError(f"secrets not in plant: {sorted_names(g - self.plant.states)}")
            seen |= g
        if self.u < 1:
            raise ModelError(f"u must be >= 1, got {self.u}")
        if any(b < a for a, b in zip(self.v_levels, self.v_levels[1:])):
            raise ModelError("security levels must be non-decreasing across groups")
        if not all(0 <= v <= self.cfg.n - 1 for v in self.v_levels):
            raise ModelError(f"security levels must lie in [0, {self.cfg.n - 1}]")

    @classmethod
    def build(cls, plant: Automaton, secret_groups, u: int, v_levels, threshold: int = 1,
              cfg: Optional[SecurityConfig] = None) -> "UhscpInstance":
        check_model(plant)
        cfg = cfg or SecurityConfig.from_automaton(plant, threshold)
        return cls(plant, tuple(secret_groups), u, tuple(v_levels), cfg, build_cost_levels(plant, cfg))

    def group(self, j: int) -> UscpInstance:
        return UscpInstance(self.plant, self.secret_groups[j], self.u, self.v_levels[j], self.cfg, self.cost)


@dataclass(frozen=True)
class SynthesisResult:
    """Output of :func:`ucc_u` / :func:`uhcc_u`.

    For the heterogeneous problem the per-iteration fields are concatenated
    in group order and ``groups`` holds the individual group results.
    """

    supervisors: Tuple[Supervisor, ...]
    iteration_policies: Tuple[Policy, ...]
    iteration_indices: Tuple[int, ...]
    merged_policy: Policy
    i_min: int
    relabel_history: Tuple[RelabelMap, ...]
    secrets: FrozenSet[State] = frozenset()
    v: int = 0
    groups: Tuple["SynthesisResult", ...] = field(default=())

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class SolvabilityReport:
    """``detail`` holds ``(i, per-group minimum designated counts, all pass)``."""

    solvable: bool
    witness_index: Optional[int]
    failing_group: Optional[int] = None
    detail: Tuple[Tuple[int, Tuple[float, ...], bool], ...] = ()


def ucc(plant: Automaton, spec: Specification, v: int, cost: CostLevels, cfg: SecurityConfig,
        start: Optional[int] = None, stop: Optional[int] = None) -> Optional[Tuple[Supervisor, int]]:
    """First nonempty supremal supervisor over cost indices ``start..stop`` (default ``v..n``)."""
    start = v if start is None else start
    stop = cost.n if stop is None else stop
    controllable = plant.protectable
    for i in range(start, stop + 1):
        gamma = candidate_events(cost, cfg, i, v) & controllable
        s = supcon(plant, spec, gamma)
        logger.debug("ucc: i=%d |gamma|=%d empty=%s", i, len(gamma), s.empty)
        if not s.empty:
            return s, i
    return None


def _iterate(inst: UscpInstance, start: int, stop: int):
    """Run the ``u`` supervisor iterations; cost indices are searched in ``start..stop``."""
    plant = inst.plant
    supervisors: List[Supervisor] = []
    policies: List[Policy] = []
    indices: List[int] = []
    history: List[RelabelMap] = []
    for j in range(inst.u):
        spec = build_specification(plant, inst.secrets)
        found = ucc(plant, spec, inst.v, inst.cost, inst.cfg, start=start, stop=stop)
        if found is None:
            return None, j
        sup, i = found
        d = control_policy(plant, sup)
        supervisors.append(sup)
        indices.append(i)
        policies.append(Policy.from_pairs((q, resolve_event(e, history)) for q, e in d.pairs()))
        plant, rmap = relabel(plant, d, j)
        history.append(rmap)
    return (supervisors, policies, indices, history), None


def _joint(inst: UscpInstance, start: int):
    n = inst.cost.n
    for i in range(start, n + 1):
        found, j = _iterate(inst, i, i)
        if found is not None:
            return found
        logger.debug("cost index %d: supervisor %d empty", i, j)
    raise Unsolvable(f"no cost index up to {n} admits {inst.u} supervisors", last_index=n)


def solve_uscp(inst: UscpInstance, index_scan: str = AUTO) -> SynthesisResult:
    """Like :func:`ucc_u` but raises :class:`Unsolvable` instead of returning ``None``."""
    n = inst.cost.n
    if index_scan == PER_ITERATION:
        found, j = _iterate(inst, inst.v, n)
        if found is None:
            raise Unsolvable(f"supervisor {j} is empty for every cost index up to {n}", last_index=n)
    elif index_scan == JOINT:
        found = _joint(inst, inst.v)
    elif index_scan == AUTO:
        found, _ = _iterate(inst, inst.v, n)
        witness = check_solvability_uscp(inst).witness_index
        if witness is None:
            raise Unsolvable(f"no cost index up to {n} admits {inst.u} supervisors", last_index=n)
        if found is None or found[2][-1] != witness:
            found = _joint(inst, witness)
    else:
        raise ValueError(f"unknown index_scan {index_scan!r}")
    supervisors, policies, indices, history = found
    return SynthesisResult(
        supervisors=tuple(supervisors),
        iteration_policies=tuple(policies),
        iteration_indices=tuple(indices),
        merged_policy=merge_policies(policies),
        i_min=indices[-1],
        relabel_history=tuple(history),
        secrets=inst.secrets,
        v=inst.v,
    )


def ucc_u(inst: UscpInstance, index_scan: str = AUTO) -> Optional[SynthesisResult]:
    """``u`` supervisors and the minimum cost index, or ``None`` if unsolvable.

    ``PER_ITERATION`` lets every supervisor pick its own cheapest index. That
    can spend a cheap cut too early and then find no disjoint second cut
    although one exists at a higher index. ``JOINT`` fixes one index for all
    ``u`` supervisors and has no such gap. ``AUTO`` keeps the per-iteration
    run when it ends at the least feasible index and otherwise falls back to
    the joint scan from that index.
    """
    try:
        return solve_uscp(inst, index_scan)
    except Unsolvable:
        return None


def merge_policies(policies: Iterable[Policy]) -> Policy:
    pairs = [p for pol in policies for p in pol.pairs()]
    return Policy.from_pairs(pairs, CONTROL)


def solve_uhscp(inst: UhscpInstance, index_scan: str = AUTO, parallel: bool = False) -> SynthesisResult:
    """Run :func:`solve_uscp` once per secret group, each from the original plant."""
    jobs = [inst.group(j) for j in range(len(inst.secret_groups))]

    def one(j: int):
        try:
            return solve_uscp(jobs[j], index_scan)
        except Unsolvable as exc:
            return Unsolvable(str(exc), group=j, last_index=exc.last_index)

    if parallel and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
            results = list(pool.map(one, range(len(jobs))))
    else:
        results = [one(j) for j in range(len(jobs))]
    for r in results:
        if isinstance(r, Unsolvable):
            raise Unsolvable(f"group {r.group}: {r}", group=r.group, last_index=r.last_index)
    return SynthesisResult(
        supervisors=tuple(s for r in results for s in r.supervisors),
        iteration_policies=tuple(p for r in results for p in r.iteration_policies),
        iteration_indices=tuple(i for r in results for i in r.iteration_indices),
        merged_policy=merge_policies(r.merged_policy for r in results),
        i_min=max(r.i_min for r in results),
        relabel_history=tuple(m for r in results for m in r.relabel_history),
        secrets=frozenset().union(*inst.secret_groups),
        v=inst.v_levels[0],
        groups=tuple(results),
    )


def uhcc_u(inst: UhscpInstance, index_scan: str = AUTO, parallel: bool = False) -> Optional[SynthesisResult]:
    try:
        return solve_uhscp(inst, index_scan, parallel)
    except Unsolvable:
        return None


def _group_candidates(inst, i: int, v: int) -> FrozenSet[Event]:
    # the union over levels v..i is empty when i < v
    if i < v:
        return frozenset()
    return candidate_events(inst.cost, inst.cfg, i, v)


def _least_index(inst, targets: Sequence[FrozenSet[State]], v_levels: Sequence[int]) -> SolvabilityReport:
    lo, n = v_levels[0], inst.cost.n
    detail = []
    witness = None
    prev_pass = False
    for i in range(lo, n + 1):
        counts = tuple(
            min_designated_count(inst.plant, t, _group_candidates(inst, i, v))
            for t, v in zip(targets, v_levels)
        )
        passing = all(c >= inst.u for c in counts)
        detail.append((i, counts, passing))
        # below the lowest index the upper condition holds vacuously
        if witness is None and passing and (i == lo or not prev_pass):
            witness = i
        prev_pass = passing
    failing = None
    if witness is None and detail:
        failing = next(k for k, c in enumerate(detail[-1][1]) if c < inst.u)
    return SolvabilityReport(witness is not None, witness, failing, tuple(detail))


def check_solvability_uscp(inst: UscpInstance) -> SolvabilityReport:
    """Least ``i`` in ``[v, n]`` where the secrets are ``u``-securely reachable w.r.t. the candidates at ``i`` but not at ``i - 1``."""
    return _least_index(inst, [inst.secrets], [inst.v])


def check_solvability_uhscp(inst: UhscpInstance) -> SolvabilityReport:
    return _least_index(inst, list(inst.secret_groups), list(inst.v_levels))


def to_protection_policy(d: Policy, plant: Optional[Automaton] = None) -> Policy:
    """Read disabled events as protected ones; content is unchanged."""
    if plant is not None:
        for q, e in d.pairs():
            at = plant.alphabet.get(e)
            if at is None or not at.protectable:
                raise RuntimeError(f"policy entry ({q}, {e}) is not a protectable event")
    return d.with_kind(PROTECTION)
