import re

from secprot.dot import to_dot
from secprot.policy import Policy


def nodes(text):
    return re.findall(r'^  "([^"]+)"(?: \[[^]]*\])?;$', text, re.M)


def test_fixture_size(plant):
    text = to_dot(plant)
    assert len(nodes(text)) == 11
    assert text.count(" -> ") == 16
    assert "class=protected" not in text


def test_styles(plant):
    text = to_dot(plant)
    assert re.search(r'"q3" \[shape=doublecircle\]', text)
    assert re.search(r'"q7" \[shape=doublecircle, style=filled', text)
    assert re.search(r'"q8" \[style=filled', text)
    assert '"q0" [xlabel="initial"]' in text


def test_grouped_policy_overlay(plant, uhscp_merged):
    text = to_dot(plant, uhscp_merged)
    protected = [l for l in text.splitlines() if "class=protected" in l]
    # five states carry protections, one of them (q5) on two edges
    assert len(protected) == 6
    assert len({l.split()[0] for l in protected}) == 5
    assert all("(protected)" in l for l in protected)


def test_empty_overlay_and_determinism(plant):
    assert to_dot(plant, Policy.empty()) == to_dot(plant)
    assert to_dot(plant) == to_dot(plant.replace())
