"""Seeded generators of small plants and supervisors for property tests and demos."""
from __future__ import annotations

import random
from itertools import combinations

from .conversion import FiniteSupervisor
from .infostate import InfoState, decision_key, macro_observable_reach, odot
from .oracle import explore
from .plant import Plant, canonical
from .synthesis import IsMapping


def all_decisions(p: Plant) -> list[frozenset]:
    ctrl = canonical(p.controllable)
    return sorted((frozenset(c) for r in range(len(ctrl) + 1) for c in combinations(ctrl, r)),
                  key=decision_key)


def random_plant(rng: random.Random, max_states: int = 5, max_obs: int = 2, max_ctrl: int = 2,
                 max_unobs_uc: int = 1, density: float = 0.45, name: str = "rand") -> Plant:
    """Deterministic plant with states ``0..n-1``.

    Observable events are ``o*``, controllable unobservable ones ``c*`` and
    uncontrollable unobservable ones ``u*``.  Some observable events are
    made controllable as well when ``max_ctrl`` allows it.
    """
    n = rng.randint(2, max_states)
    states = [str(i) for i in range(n)]
    obs = [f"o{i + 1}" for i in range(rng.randint(1, max_obs))]
    n_ctrl = rng.randint(0, max_ctrl)
    c_unobs = [f"c{i + 1}" for i in range(rng.randint(0, n_ctrl))]
    ctrl = set(c_unobs)
    for o in rng.sample(obs, min(len(obs), n_ctrl - len(c_unobs))):
        ctrl.add(o)
    u_unobs = [f"u{i + 1}" for i in range(rng.randint(0, max_unobs_uc))]
    events = obs + c_unobs + u_unobs
    transitions = []
    for x in states:
        for e in events:
            if rng.random() < density:
                transitions.append((x, e, rng.choice(states)))
    secret = [x for x in states if rng.random() < 0.35]
    return Plant.build(name, transitions, initial="0", observable=obs, controllable=ctrl,
                       secret=secret, events=events, states=states)


def random_decision_set(rng: random.Random, p: Plant, max_options: int = 2) -> frozenset:
    pool = all_decisions(p)
    k = rng.randint(1, min(max_options, len(pool)))
    return frozenset(rng.sample(pool, k))


def random_is_mapping(rng: random.Random, p: Plant, max_options: int = 2) -> IsMapping:
    """Reachability-closed IS-mapping with random non-empty decision sets."""
    y0 = frozenset({frozenset({p.initial})})
    entries: dict = {}
    todo, seen = [y0], {y0}
    while todo:
        y = todo.pop()
        for m in sorted(y, key=lambda m: sorted(m)):
            entries[InfoState(m, y)] = random_decision_set(rng, p, max_options)
        z = odot(p, frozenset((m, entries[InfoState(m, y)]) for m in y))
        for o in canonical(p.observable):
            y2 = macro_observable_reach(p, z, o)
            if y2 is not None and y2 not in seen:
                seen.add(y2)
                todo.append(y2)
    return IsMapping(p.name, entries)


def random_finite_supervisor(rng: random.Random, p: Plant, max_memory: int = 3,
                             max_options: int = 2) -> FiniteSupervisor:
    """Finite supervisor with a total memory update."""
    mem = [f"q{i}" for i in range(rng.randint(1, max_memory))]
    output = {q: random_decision_set(rng, p, max_options) for q in mem}
    update = {}
    for q in mem:
        for g in sorted(output[q], key=decision_key):
            for o in canonical(p.observable):
                update[q, g, o] = rng.choice(mem)
    return FiniteSupervisor(tuple(mem), mem[0], output, update)


def is_information_state_based(p: Plant, sn: FiniteSupervisor, depth: int) -> bool:
    """False when two histories with one information state receive different sets.

    Compares the offered decision sets across histories that share the
    supervisor estimate and the intruder's set of such estimates, up to ``depth``.
    """
    cl = explore(p, sn, depth)
    offered: dict = {}
    for level in cl.levels:
        by_obs: dict = {}
        for n in level.values():
            by_obs.setdefault(n.obs, set()).add(n.states)
        for n in level.values():
            key = (n.states, frozenset(by_obs[n.obs]))
            if offered.setdefault(key, n.offered) != n.offered:
                return False
    return True
