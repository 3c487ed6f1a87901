"""Why the supervisor index is fixed across rounds by default.

Letting each round pick its own cheapest cost index can spend the only cheap
cut in round one and leave nothing disjoint for round two, even though two
disjoint cuts exist one index higher.
"""
from secprot.automaton import Automaton, EventAttrs
from secprot.synthesis import AUTO, JOINT, PER_ITERATION, UscpInstance, check_solvability_uscp, ucc_u

alphabet = {"a": EventAttrs(True, 0), "c": EventAttrs(True, 1), "x": EventAttrs(False)}
trans = [
    ("q0", "c", "g"), ("q0", "a", "b"),
    ("b", "x", "g"), ("b", "c", "t"),
    ("g", "a", "b2"), ("b2", "x", "t"),
]
a = Automaton({"q0", "b", "g", "t", "b2"}, alphabet, trans, "q0", {"t"}, {"t"})
inst = UscpInstance.build(a, u=2, v=0)

# %% every path to t carries two protectable events once level-1 events count
print("witness index:", check_solvability_uscp(inst).witness_index)

# %% compare the scans
for scan in (PER_ITERATION, JOINT, AUTO):
    r = ucc_u(inst, scan)
    if r is None:
        print(f"{scan:>13}: no policy")
    else:
        print(f"{scan:>13}: i_min={r.i_min} rounds={[p.as_dict() for p in r.iteration_policies]}")
