"""Usability-aware minimum-cost secret protection for finite automata.

Protection synthesis is reduced to supervisory control: protectable events
are treated as controllable, and protecting a transition means disabling it.
"""
from .automaton import (
    Automaton,
    EventAttrs,
    ModelError,
    check_model,
    coreachable_states,
    is_trim,
    reachable_states,
    run,
    step,
    validate,
)
from .costmodel import (
    ConfigError,
    CostLevels,
    CostRecord,
    SecurityConfig,
    build_cost_levels,
    candidate_events,
    events_of_level,
    usability_set,
)
from .policy import Policy
from .reachability import (
    UNREACHABLE,
    is_uv_securely_reachable,
    min_designated_count,
    min_policy_protection_count,
)
from .supcon import (
    Specification,
    Supervisor,
    build_specification,
    control_policy,
    is_empty_by_lemma,
    relabel,
    supcon,
)
from .synthesis import (
    AUTO,
    JOINT,
    PER_ITERATION,
    SolvabilityReport,
    SynthesisResult,
    UhscpInstance,
    Unsolvable,
    UscpInstance,
    check_solvability_uhscp,
    check_solvability_uscp,
    to_protection_policy,
    ucc,
    ucc_u,
    uhcc_u,
)

__version__ = "0.1.0"
