import pytest

from secprot.cli import fixture_path
from secprot.documents import load_model
from secprot.policy import Policy

# Hand-written expectations for the shipped running example.
USCP_D0 = {"q1": {"s6"}, "q2": {"s5"}, "q5": {"s7", "s8"}}
USCP_D1 = {"q0": {"s0", "s1"}}
USCP_MERGED = {"q0": {"s0", "s1"}, "q1": {"s6"}, "q2": {"s5"}, "q5": {"s7", "s8"}}
GROUP1_POLICY = {"q1": {"s5"}, "q5": {"s7", "s8"}}
GROUP2_POLICY = {"q6": {"s9"}, "q8": {"s9"}, "q9": {"s10"}}
UHSCP_MERGED = {**GROUP1_POLICY, **GROUP2_POLICY}
SECRETS = frozenset({"q7", "q8", "q10"})


@pytest.fixture(scope="session")
def doc():
    return load_model(fixture_path("running_example"))


@pytest.fixture(scope="session")
def group_doc():
    return load_model(fixture_path("running_example_groups"))


@pytest.fixture(scope="session")
def plant(doc):
    return doc.automaton


@pytest.fixture(scope="session")
def cfg(doc):
    return doc.cfg


@pytest.fixture(scope="session")
def cost(doc):
    return doc.cost_levels()


@pytest.fixture
def uscp_merged():
    return Policy(USCP_MERGED)


@pytest.fixture
def uhscp_merged():
    return Policy(UHSCP_MERGED)
