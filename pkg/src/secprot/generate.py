"""Seeded random models for property tests and scale runs."""
from __future__ import annotations

import random
from typing import List, Optional

from .automaton import Automaton, EventAttrs, coreachable_states, reachable_states
from .costmodel import SecurityConfig, build_cost_levels
from .synthesis import UhscpInstance, UscpInstance


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_automaton(seed, max_states: int = 8, max_events: int = 5, edge_prob: float = 0.35,
                     max_levels: int = 3) -> Automaton:
    """Deterministic automaton with random marking, secrets and event levels. Not necessarily trim."""
    rng = _rng(seed)
    n = rng.randint(1, max_states)
    m = rng.randint(1, max_events)
    levels = rng.randint(1, max_levels)
    states = [f"q{k}" for k in range(n)]
    alphabet = {}
    for k in range(m):
        if rng.random() < 0.7:
            alphabet[f"e{k}"] = EventAttrs(True, rng.randrange(levels))
        else:
            alphabet[f"e{k}"] = EventAttrs(False)
    trans = [(q, e, rng.choice(states)) for q in states for e in alphabet if rng.random() < edge_prob]
    marked = [q for q in states if rng.random() < 0.35]
    secrets = [q for q in states[1:] if rng.random() < 0.3]
    return Automaton(states, alphabet, trans, "q0", marked, secrets)


def trim(a: Automaton) -> Optional[Automaton]:
    """Restrict to the accessible and co-accessible part, or ``None`` if the initial state drops out."""
    keep = reachable_states(a) & coreachable_states(a)
    if a.initial not in keep:
        return None
    return a.replace(
        states=keep,
        transitions=[t for t in a.transitions if t[0] in keep and t[2] in keep],
        marked=a.marked & keep,
        secrets=a.secrets & keep,
    )


def random_trim_automaton(seed, max_states: int = 6, max_events: int = 5, tries: int = 200) -> Automaton:
    """Trim automaton with at least one secret state."""
    rng = _rng(seed)
    for _ in range(tries):
        a = trim(random_automaton(rng, max_states, max_events, edge_prob=0.45))
        if a is not None and a.secrets:
            return a
    raise RuntimeError("no trim automaton with secrets found")


def random_uscp(seed, max_states: int = 6, max_events: int = 5, max_u: int = 3) -> UscpInstance:
    rng = _rng(seed)
    a = random_trim_automaton(rng, max_states, max_events)
    cfg = SecurityConfig.from_automaton(a, rng.randint(1, 3))
    return UscpInstance(a, a.secrets, rng.randint(1, max_u), rng.randrange(cfg.n), cfg,
                        build_cost_levels(a, cfg))


def random_uhscp(seed, max_states: int = 6, max_events: int = 5, max_groups: int = 3,
                 max_u: int = 3) -> UhscpInstance:
    rng = _rng(seed)
    a = random_trim_automaton(rng, max_states, max_events)
    cfg = SecurityConfig.from_automaton(a, rng.randint(1, 3))
    secrets = sorted(a.secrets)
    rng.shuffle(secrets)
    k = rng.randint(1, min(max_groups, len(secrets)))
    cuts = sorted(rng.sample(range(1, len(secrets)), k - 1))
    groups = [frozenset(secrets[lo:hi]) for lo, hi in zip([0] + cuts, cuts + [len(secrets)])]
    v = sorted(rng.randrange(cfg.n) for _ in groups)
    return UhscpInstance(a, tuple(groups), rng.randint(1, max_u), tuple(v), cfg, build_cost_levels(a, cfg))


def layered_automaton(seed, n_states: int = 1000, n_events: int = 20, width: int = 20,
                      n_levels: int = 4, gate_every: int = 5, back_prob: float = 0.1) -> Automaton:
    """Trim layered automaton whose last layer holds the secrets.

    Every ``gate_every``-th layer boundary is crossed only by protectable
    events, so a requirement of ``u`` protections is met once there are at
    least ``u`` gates. Back edges add cycles without skipping gates.
    """
    rng = _rng(seed)
    n_unprot = max(1, n_events // 5)
    alphabet = {f"e{k}": EventAttrs(False) for k in range(n_unprot)}
    for k in range(n_unprot, n_events):
        alphabet[f"e{k}"] = EventAttrs(True, (k - n_unprot) % n_levels)
    protectable = [e for e, at in alphabet.items() if at.protectable]
    events = list(alphabet)

    layers: List[List[str]] = [["q0"]]
    idx = 1
    while idx < n_states:
        size = min(width, n_states - idx)
        layers.append([f"q{idx + k}" for k in range(size)])
        idx += size

    trans = []

    for li, layer in enumerate(layers[:-1]):
        nxt = layers[li + 1]
        pool = protectable if (li + 1) % gate_every == 0 else events
        # each successor gets at least one predecessor
        owner = {r: layer[k % len(layer)] for k, r in enumerate(nxt)}
        musts = {}
        for r, q in owner.items():
            musts.setdefault(q, []).append(r)
        for q in layer:
            free = list(pool)
            rng.shuffle(free)
            targets = musts.get(q, []) + rng.sample(nxt, min(len(nxt), rng.randint(1, 2)))
            seen_t = set()
            for r in targets:
                if r in seen_t or not free:
                    continue
                seen_t.add(r)
                trans.append((q, free.pop(), r))
            if li > 0 and rng.random() < back_prob and free:
                trans.append((q, free.pop(), rng.choice(layers[li - 1])))

    last = layers[-1]
    marked = set(last)
    for layer in layers[1:-1]:
        marked.update(q for q in layer if rng.random() < 0.05)
    states = [q for layer in layers for q in layer]
    return Automaton(states, alphabet, trans, "q0", marked, set(last))
