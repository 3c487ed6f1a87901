"""Uniform secrets on the shipped eleven-state example."""
from secprot.automaton import sorted_names
from secprot.cli import fixture_path, format_cost_table
from secprot.documents import load_model
from secprot.synthesis import check_solvability_uscp, to_protection_policy, ucc_u
from secprot.verify import audit_policy

# %% load the model; the secrets are q7, q8, q10 and two protections are required
doc = load_model(fixture_path("running_example"))
a = doc.automaton
print(len(a.states), "states,", len(a.transitions), "transitions")
print("secrets:", sorted_names(a.secrets), "u =", doc.u, "v =", doc.v[0])

# %% cost levels at threshold T = 2
print(format_cost_table(doc))

# %% the solvability check gives the cheapest feasible index before we synthesize anything
inst = doc.instance()
rep = check_solvability_uscp(inst)
for i, counts, ok in rep.detail:
    print(f"i={i}  fewest candidate events on a path to a secret: {counts[0]}  {'ok' if ok else '-'}")
print("witness index:", rep.witness_index)

# %% two supervisors; the second one runs on the relabeled plant
result = ucc_u(inst)
for k, (i, d) in enumerate(zip(result.iteration_indices, result.iteration_policies)):
    print(f"supervisor {k} at index {i}: {d.as_dict()}")
print("i_min =", result.i_min)

# %% read disabled events as protections and audit every path to a secret
policy = to_protection_policy(result.merged_policy, a)
for q, events in policy.entries.items():
    print(q, "->", sorted(events))
print(audit_policy(a, policy, doc.groups_with_levels(), doc.u, doc.cfg).render())
