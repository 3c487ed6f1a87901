import pytest

from secprot.automaton import Automaton, EventAttrs, ModelError
from secprot.policy import PROTECTION, Policy
from secprot.reachability import min_designated_count, min_policy_protection_count
from secprot.supcon import build_specification, control_policy, relabel
from secprot.synthesis import (
    AUTO,
    JOINT,
    PER_ITERATION,
    UhscpInstance,
    Unsolvable,
    UscpInstance,
    check_solvability_uhscp,
    check_solvability_uscp,
    merge_policies,
    solve_uhscp,
    solve_uscp,
    to_protection_policy,
    ucc,
    ucc_u,
    uhcc_u,
)

from conftest import GROUP1_POLICY, GROUP2_POLICY, SECRETS, UHSCP_MERGED, USCP_D0, USCP_D1, USCP_MERGED

GROUPS = (frozenset({"q7", "q8"}), frozenset({"q10"}))


def uscp(doc, u=2, v=0, secrets=SECRETS):
    return UscpInstance(doc.automaton, secrets, u, v, doc.cfg, doc.cost_levels())


def uhscp(doc, v=(0, 1), u=2, groups=GROUPS):
    return UhscpInstance(doc.automaton, groups, u, v, doc.cfg, doc.cost_levels())


def test_uscp_example(doc):
    r = ucc_u(uscp(doc))
    assert [p.as_dict() for p in r.iteration_policies] == [USCP_D0, USCP_D1]
    assert r.merged_policy.as_dict() == USCP_MERGED
    assert r.iteration_indices == (1, 1)
    assert r.i_min == 1
    assert len(r.supervisors) == 2 and len(r.relabel_history) == 2


def test_uscp_single_round(doc):
    r = ucc_u(uscp(doc, u=1))
    assert len(r.supervisors) == 1
    assert r.merged_policy.as_dict() == USCP_D0
    assert r.i_min == 1


def test_uscp_unsolvable(doc):
    inst = uscp(doc, u=3, v=3)
    assert ucc_u(inst) is None
    with pytest.raises(Unsolvable) as exc:
        solve_uscp(inst)
    assert exc.value.last_index == 4
    rep = check_solvability_uscp(inst)
    assert not rep.solvable and rep.witness_index is None


def test_uhscp_example(doc):
    r = uhcc_u(uhscp(doc))
    g1, g2 = r.groups
    assert g1.merged_policy.as_dict() == GROUP1_POLICY
    assert g2.merged_policy.as_dict() == GROUP2_POLICY
    assert r.merged_policy.as_dict() == UHSCP_MERGED
    assert (g1.i_min, g2.i_min, r.i_min) == (1, 3, 3)
    assert g1.iteration_indices == (0, 1)
    assert [p.as_dict() for p in g1.iteration_policies] == [{"q1": {"s5"}}, {"q5": {"s7", "s8"}}]
    assert g2.iteration_indices == (2, 3)
    assert [p.as_dict() for p in g2.iteration_policies] == [{"q6": {"s9"}, "q8": {"s9"}}, {"q9": {"s10"}}]


def test_uhscp_unsolvable_names_group(doc):
    inst = uhscp(doc, v=(3, 3))
    assert uhcc_u(inst) is None
    with pytest.raises(Unsolvable) as exc:
        solve_uhscp(inst)
    assert exc.value.group == 0
    assert not check_solvability_uhscp(inst).solvable


def test_uhscp_parallel_matches_sequential(doc):
    a = solve_uhscp(uhscp(doc))
    b = solve_uhscp(uhscp(doc), parallel=True)
    assert a == b


def test_group_order_does_not_matter(doc):
    a = solve_uhscp(uhscp(doc, v=(0, 0)))
    b = solve_uhscp(uhscp(doc, v=(0, 0), groups=GROUPS[::-1]))
    assert a.merged_policy == b.merged_policy
    assert a.i_min == b.i_min


def test_single_group_equals_uscp(doc):
    r1 = solve_uhscp(uhscp(doc, v=(0,), groups=(SECRETS,)))
    r2 = solve_uscp(uscp(doc))
    assert r1.merged_policy == r2.merged_policy and r1.i_min == r2.i_min


def test_ucc_first_round(doc, plant):
    sup, i = ucc(plant, build_specification(plant, SECRETS), 0, doc.cost_levels(), doc.cfg)
    assert i == 1
    assert sup.states == {"q0", "q1", "q2", "q3", "q4", "q5"}


def test_ucc_on_relabeled_plant_for_q10(doc, plant):
    g, _ = relabel(plant, Policy({"q6": {"s9"}, "q8": {"s9"}}), 0)
    found = ucc(g, build_specification(g, {"q10"}), 1, doc.cost_levels(), doc.cfg)
    sup, i = found
    assert i == 3
    assert control_policy(g, sup).as_dict() == {"q9": {"s10"}}


def test_unreachable_secret_is_solved_at_v(doc, plant):
    a = plant.replace(states=plant.states | {"q99"}, secrets=frozenset({"q99"}))
    spec = build_specification(a, {"q99"})
    sup, i = ucc(a, spec, 2, doc.cost_levels(), doc.cfg)
    assert i == 2 and sup.states == plant.states
    inst = UscpInstance(a, {"q99"}, 3, 2, doc.cfg, doc.cost_levels())
    rep = check_solvability_uscp(inst)
    assert rep.solvable and rep.witness_index == 2
    r = ucc_u(inst)
    assert r.i_min == 2 and r.merged_policy.is_empty()


def test_grouped_unreachable_secrets(doc, plant):
    a = plant.replace(states=plant.states | {"x1", "x2"})
    inst = UhscpInstance(a, ({"x1"}, {"x2"}), 2, (1, 2), doc.cfg, doc.cost_levels())
    rep = check_solvability_uhscp(inst)
    assert rep.solvable and rep.witness_index == 1


def test_solvability_at_v0_matches_first_condition(doc, plant):
    for u in (1, 2, 3):
        rep = check_solvability_uscp(uscp(doc, u=u))
        first = min_designated_count(plant, SECRETS, {"s0", "s5"}) >= u
        assert (rep.witness_index == 0) == first


def test_solvability_reports(doc):
    rep = check_solvability_uscp(uscp(doc))
    assert rep.solvable and rep.witness_index == 1
    assert [d[2] for d in rep.detail] == [False, True, True, True, True]
    rep = check_solvability_uhscp(uhscp(doc))
    assert rep.solvable and rep.witness_index == 3


def test_merge_policies():
    assert merge_policies([Policy(USCP_D0), Policy(USCP_D1)]).as_dict() == USCP_MERGED
    assert merge_policies([Policy(GROUP1_POLICY), Policy(GROUP2_POLICY)]).as_dict() == UHSCP_MERGED
    assert merge_policies([Policy.empty(), Policy.empty()]).is_empty()


def test_to_protection_policy(plant):
    p = to_protection_policy(Policy(USCP_MERGED), plant)
    assert p.kind == PROTECTION and p.as_dict() == USCP_MERGED
    assert to_protection_policy(Policy.empty()).is_empty()
    with pytest.raises(RuntimeError):
        to_protection_policy(Policy({"q2": {"s2"}}), plant)


def test_synthesized_policies_are_sound(doc, plant, cfg):
    r = ucc_u(uscp(doc))
    assert min_policy_protection_count(plant, SECRETS, r.merged_policy, 0, cfg) >= 2
    r = uhcc_u(uhscp(doc))
    assert min_policy_protection_count(plant, GROUPS[0], r.merged_policy, 0, cfg) >= 2
    assert min_policy_protection_count(plant, GROUPS[1], r.merged_policy, 1, cfg) >= 2


def test_instance_validation(doc):
    with pytest.raises(ModelError):
        uscp(doc, secrets=frozenset())
    with pytest.raises(ModelError):
        uscp(doc, u=0)
    with pytest.raises(ModelError):
        uscp(doc, v=4)
    with pytest.raises(ModelError):
        uhscp(doc, v=(1, 0))
    with pytest.raises(ModelError):
        uhscp(doc, groups=(frozenset({"q7"}), frozenset({"q7", "q10"})))
    with pytest.raises(ModelError):
        uhscp(doc, v=(0,))
    with pytest.raises(ValueError):
        solve_uscp(uscp(doc), index_scan="sideways")


def greedy_trap():
    """Two cuts exist at index 1, but the cheap cut found at index 0 blocks the second one."""
    alphabet = {"a": EventAttrs(True, 0), "c": EventAttrs(True, 1), "x": EventAttrs(False)}
    trans = [("q0", "c", "g"), ("q0", "a", "b"), ("b", "x", "g"), ("b", "c", "t"),
             ("g", "a", "b2"), ("b2", "x", "t")]
    return Automaton({"q0", "b", "g", "t", "b2"}, alphabet, trans, "q0", {"t"}, {"t"})


def test_per_iteration_scan_misses_a_solution():
    inst = UscpInstance.build(greedy_trap(), u=2, v=0)
    assert check_solvability_uscp(inst).witness_index == 1
    assert ucc_u(inst, PER_ITERATION) is None
    for scan in (JOINT, AUTO):
        r = ucc_u(inst, scan)
        assert r.i_min == 1
        assert min_policy_protection_count(inst.plant, {"t"}, r.merged_policy, 0, inst.cfg) >= 2
