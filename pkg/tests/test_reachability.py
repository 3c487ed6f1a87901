import math

import pytest

from secprot.automaton import ModelError, run
from secprot.policy import Policy
from secprot.reachability import (
    UNREACHABLE,
    is_uv_securely_reachable,
    min_designated_count,
    min_policy_protection_count,
    weakest_policy_path,
    zero_one_search,
)

from conftest import SECRETS

C01 = {"s0", "s5", "s1", "s6", "s7", "s8"}


def test_cheapest_level_alone_is_avoidable(plant):
    # q0 -s1-> q2 -s2-> q1 -s6-> q6 -s9-> q9 -s10-> q10 uses neither s0 nor s5
    assert min_designated_count(plant, SECRETS, {"s0", "s5"}) == 0


def test_two_designated_events_needed_with_levels_0_and_1(plant):
    assert min_designated_count(plant, SECRETS, C01) == 2
    assert is_uv_securely_reachable(plant, SECRETS, C01, 2)
    assert not is_uv_securely_reachable(plant, SECRETS, {"s0", "s5"}, 2)


def test_group_two_needs_index_three(plant):
    assert not is_uv_securely_reachable(plant, {"q10"}, {"s6", "s7", "s8", "s9"}, 2)
    assert min_designated_count(plant, {"q10"}, {"s6", "s7", "s8", "s9", "s10"}) == 2


def test_empty_designated_set(plant):
    assert min_designated_count(plant, {"q10"}, set()) == 0


def test_unreachable_target_is_vacuously_secure(plant):
    a = plant.replace(states=plant.states | {"q99"})
    assert min_designated_count(a, {"q99"}, {"s0"}) == UNREACHABLE
    assert math.isinf(UNREACHABLE)
    assert is_uv_securely_reachable(a, {"q99"}, set(), 100)


def test_bad_arguments(plant):
    with pytest.raises(ModelError):
        min_designated_count(plant, {"nowhere"}, set())
    with pytest.raises(ModelError):
        is_uv_securely_reachable(plant, SECRETS, C01, 0)


def test_initial_target_has_empty_path(plant):
    assert zero_one_search(plant, frozenset({"q0"}), lambda q, e: 1) == (0, [])


def test_policy_counts_on_grouped_example(plant, cfg, uhscp_merged):
    assert min_policy_protection_count(plant, {"q10"}, uhscp_merged, 1, cfg) == 2
    assert min_policy_protection_count(plant, {"q7", "q8"}, uhscp_merged, 0, cfg) == 2


def test_policy_level_filter(plant, cfg, uhscp_merged):
    # s5 sits at level 0, so it stops counting once level 1 is required
    assert min_policy_protection_count(plant, {"q7", "q8"}, uhscp_merged, 1, cfg) == 1


def test_empty_policy_counts_zero(plant, cfg):
    assert min_policy_protection_count(plant, {"q7"}, Policy.empty(), 0, cfg) == 0


def test_policy_on_undefined_transition(plant, cfg):
    with pytest.raises(ModelError):
        min_policy_protection_count(plant, {"q7"}, Policy({"q0": {"s9"}}), 0, cfg)


def test_weakest_path_replays(plant, cfg, uscp_merged):
    count, path = weakest_policy_path(plant, SECRETS, uscp_merged, 0, cfg)
    assert count == 2
    assert run(plant, [e for _, e, _ in path]) in SECRETS
    assert sum((q, e) in uscp_merged for q, e, _ in path) == 2
