import time

from secprot.automaton import check_model, is_trim
from secprot.generate import layered_automaton, random_automaton, random_trim_automaton, random_uhscp, random_uscp
from secprot.synthesis import UscpInstance, ucc_u


def test_generators_are_seeded():
    assert random_automaton(11) == random_automaton(11)
    assert layered_automaton(3, n_states=200) == layered_automaton(3, n_states=200)


def test_random_instances_are_well_formed():
    for seed in range(50):
        a = random_trim_automaton(seed)
        check_model(a)
        assert a.secrets
        inst = random_uhscp(seed)
        assert frozenset().union(*inst.secret_groups) == inst.plant.secrets
        assert list(inst.v_levels) == sorted(inst.v_levels)
        assert random_uscp(seed).u >= 1


def test_layered_shape():
    a = layered_automaton(0)
    assert len(a.states) == 1000 and len(a.alphabet) == 20
    assert is_trim(a)
    assert 0 < len(a.secrets) <= 20 and a.secrets <= a.marked


def _solve_time(n):
    a = layered_automaton(n, n_states=n, n_events=20)
    t = time.perf_counter()
    ucc_u(UscpInstance.build(a, u=3, v=0, threshold=2))
    return time.perf_counter() - t


def test_runtime_grows_at_most_quadratically():
    # loose regression bound: 4x the states may cost up to 16x, with slack for noise
    small = min(_solve_time(250) for _ in range(3))
    large = min(_solve_time(1000) for _ in range(3))
    assert large <= 16 * small * 3 + 0.05
