"""Two secret groups of rising importance, plus a Graphviz rendering."""
from pathlib import Path

from secprot.automaton import sorted_names
from secprot.cli import fixture_path
from secprot.documents import load_model
from secprot.dot import to_dot
from secprot.synthesis import uhcc_u
from secprot.verify import audit_policy

doc = load_model(fixture_path("running_example_groups"))
inst = doc.instance()

# %% group {q7, q8} may use level-0 events; group {q10} needs level 1 or above
result = uhcc_u(inst, parallel=True)
for j, g in enumerate(result.groups):
    print(f"group {j} {sorted_names(g.secrets)} v={g.v}: i_min={g.i_min}")
    for i, d in zip(g.iteration_indices, g.iteration_policies):
        print(f"   index {i}: {d.as_dict()}")
print("overall i_min =", result.i_min)

# %% merged policy
print(result.merged_policy.as_dict())

# %% dropping the second group's protections leaves q10 exposed
weak = result.groups[0].merged_policy
print(audit_policy(doc.automaton, weak, doc.groups_with_levels(), doc.u, doc.cfg).render())

# %% write a dot file; render with `dot -Tsvg grouped.dot -o grouped.svg`
out = Path("grouped.dot")
out.write_text(to_dot(doc.automaton, result.merged_policy, name="grouped"))
print("wrote", out.resolve())
