"""Brute-force closed-loop semantics used as ground truth by the test-suite.

Nothing here calls the reach operators of :mod:`ndopacity.plant` or the
macro-level operators of :mod:`ndopacity.infostate`; estimates are read off
enumerated runs of the transition table.

:func:`explore` merges decision histories that agree on their observation
sequence, on the set of plant states consistent with them and (for finite
supervisors) on the memory state.  The closed loop's future only depends on
that data, so the quotient loses nothing.  :func:`enumerate_extended`
unfolds it back into explicit extended strings.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple, Optional, Sequence, Union

from .conversion import FiniteSupervisor
from .infostate import decision_key
from .plant import CapExceeded, ModelError, OpacityVerdict, Plant, canonical, natural_key
from .synthesis import IsMapping

Supervisor = Union[IsMapping, FiniteSupervisor]


@dataclass(frozen=True)
class DepthBound:
    max_observable_length: int = 5
    max_unobservable_run: Optional[int] = None  # None means |X|

    def __post_init__(self):
        if self.max_observable_length < 1:
            raise ModelError("observable length bound must be >= 1")
        if self.max_unobservable_run is not None and self.max_unobservable_run < 1:
            raise ModelError("unobservable run bound must be >= 1")

    def run_bound(self, p: Plant) -> int:
        return self.max_unobservable_run or len(p.states)


def _moves(p: Plant) -> dict:
    table: dict = {}
    for (x, e), y in p.delta.items():
        table.setdefault(x, []).append((e, y))
    return table


def _enabled(p: Plant, g: frozenset, e: str) -> bool:
    return e in g or e not in p.controllable


def _silent_closure(p: Plant, moves: dict, states: frozenset, g: frozenset) -> frozenset:
    """End states of every run that starts in ``states`` and only fires
    unobservable events enabled by ``g``."""
    seen = set(states)
    frontier = list(states)
    while frontier:
        x = frontier.pop()
        for e, y in moves.get(x, ()):
            if e not in p.observable and _enabled(p, g, e) and y not in seen:
                seen.add(y)
                frontier.append(y)
    return frozenset(seen)


@dataclass
class HistoryClass:
    """Decision histories sharing observations, consistent states and memory."""

    obs: tuple
    states: frozenset  # hat E_S of every history in the class
    memory: Optional[str]
    offered: frozenset = frozenset()
    tails: dict = field(default_factory=dict)  # decision -> E_S after it
    children: dict = field(default_factory=dict)  # (decision, event) -> key

    @property
    def key(self) -> tuple:
        return (self.obs, self.states, self.memory)


class ObservationRecord(NamedTuple):
    estimates: frozenset  # hat E_I(s): supervisor estimates the intruder considers
    augmented: frozenset  # pairs (E_S after a decision, that decision)
    flat: frozenset  # X_I(s)


@dataclass
class ClosedLoop:
    plant: Plant
    depth: int
    levels: list
    records: dict

    def node(self, key) -> HistoryClass:
        return self.levels[len(key[0])][key]

    @property
    def root(self) -> HistoryClass:
        return next(iter(self.levels[0].values()))

    def observations(self) -> list[tuple]:
        return sorted(self.records, key=lambda s: (len(s), [natural_key(o) for o in s]))


def _offer(p: Plant, sup: Supervisor, level: dict) -> None:
    if isinstance(sup, IsMapping):
        by_obs: dict = {}
        for n in level.values():
            by_obs.setdefault(n.obs, set()).add(n.states)
        for n in level.values():
            n.offered = sup[n.states, frozenset(by_obs[n.obs])]
    else:
        for n in level.values():
            n.offered = sup.decisions(n.memory)


def explore(p: Plant, sup: Supervisor, depth: int) -> ClosedLoop:
    """Closed-loop behaviour for every observation sequence of length <= depth."""
    moves = _moves(p)
    finite = isinstance(sup, FiniteSupervisor)
    root = HistoryClass((), frozenset({p.initial}), sup.initial if finite else None)
    levels = [{root.key: root}]
    records: dict = {}
    for k in range(depth + 1):
        level = levels[k]
        _offer(p, sup, level)
        for n in level.values():
            for g in n.offered:
                n.tails[g] = _silent_closure(p, moves, n.states, g)
        grouped: dict = {}
        for n in level.values():
            est, aug, flat = grouped.setdefault(n.obs, (set(), set(), set()))
            est.add(n.states)
            for g, tail in n.tails.items():
                aug.add((tail, g))
                flat.update(tail)
        for s, (est, aug, flat) in grouped.items():
            records[s] = ObservationRecord(frozenset(est), frozenset(aug), frozenset(flat))
        if k == depth:
            break
        nxt: dict = {}
        for n in level.values():
            for g, tail in n.tails.items():
                for o in p.observable:
                    if not _enabled(p, g, o):
                        continue
                    after = frozenset(y for x in tail for e, y in moves.get(x, ()) if e == o)
                    if not after:
                        continue
                    mem = sup.next(n.memory, g, o) if finite else None
                    child = HistoryClass(n.obs + (o,), after, mem)
                    nxt.setdefault(child.key, child)
                    n.children[g, o] = child.key
        levels.append(nxt)
    return ClosedLoop(p, depth, levels, records)


def enumerate_extended(p: Plant, sup: Supervisor, b: DepthBound = DepthBound()) -> set:
    """Every extended string of the closed loop within ``b``.

    Strings are tuples alternating frozenset decisions and event names.
    Unobservable runs longer than the bound are cut.
    """
    cl = explore(p, sup, b.max_observable_length)
    run_cap = b.run_bound(p)
    moves = _moves(p)
    out = {()}

    def expand(rho: tuple, x: str, g: frozenset, n: HistoryClass, run: int):
        out.add(rho)
        for e, y in moves.get(x, ()):
            if not _enabled(p, g, e):
                continue
            if e not in p.observable:
                if run < run_cap:
                    out.add(rho + (e,))
                    expand(rho + (e, g), y, g, n, run + 1)
            elif len(n.obs) < cl.depth:
                child = cl.node(n.children[g, e])
                out.add(rho + (e,))
                for g2 in child.offered:
                    expand(rho + (e, g2), y, g2, child, 0)

    root = cl.root
    for g in root.offered:
        expand((g,), p.initial, g, root, 0)
    return out


def _check_obs(p: Plant, s: Sequence[str]) -> tuple:
    s = tuple(s)
    for o in s:
        if o not in p.observable:
            raise ModelError(f"{o!r} is not an observable event")
    return s


def intruder_state_estimate(p: Plant, sup: Supervisor, s: Sequence[str],
                            b: DepthBound = DepthBound()) -> frozenset:
    """X_I(s); empty when the closed loop cannot generate ``s``."""
    s = _check_obs(p, s)
    if len(s) > b.max_observable_length:
        raise ModelError(f"observation longer than the bound {b.max_observable_length}")
    rec = explore(p, sup, len(s)).records.get(s)
    return rec.flat if rec else frozenset()


def intruder_macro_estimate(p: Plant, sup: Supervisor, s: Sequence[str]) -> frozenset:
    """Set of supervisor estimates consistent with observing ``s``."""
    s = _check_obs(p, s)
    rec = explore(p, sup, len(s)).records.get(s)
    return rec.estimates if rec else frozenset()


def opacity_from(cl: ClosedLoop) -> OpacityVerdict:
    for s in cl.observations():
        flat = cl.records[s].flat
        if flat and flat <= cl.plant.secret:
            return OpacityVerdict(False, s)
    return OpacityVerdict(True, None)


def check_closed_loop_opacity(p: Plant, sup: Supervisor, b: DepthBound = DepthBound()) -> OpacityVerdict:
    """Shortest generated observation exposing the secret, up to the bound."""
    return opacity_from(explore(p, sup, b.max_observable_length))


def deterministic_mapping(p: Plant, choice: dict) -> IsMapping:
    """IS-mapping of an estimate-feedback deterministic supervisor."""
    return IsMapping(p.name, {(m, frozenset({m})): frozenset({g}) for m, g in choice.items()})


def brute_force_deterministic_exists(p: Plant, b: DepthBound = DepthBound(), cap: int = 100_000) -> bool:
    """Whether some deterministic estimate-feedback supervisor keeps the secret.

    Backtracks over assignments estimate -> decision restricted to the
    estimates the partial assignment reaches.  A branch dies as soon as a
    decision makes its own estimate secret-revealing, which every candidate
    extending it would also do.  Each surviving complete candidate is
    re-checked with :func:`check_closed_loop_opacity`.  ``cap`` bounds the
    number of search nodes.
    """
    moves = _moves(p)
    decisions = sorted(
        (frozenset(c) for r in range(len(p.controllable) + 1)
         for c in combinations(canonical(p.controllable), r)),
        key=decision_key,
    )
    observations = canonical(p.observable)
    visited = 0

    def successors(m, g):
        tail = _silent_closure(p, moves, m, g)
        if tail <= p.secret:
            return None
        out = []
        for o in observations:
            if _enabled(p, g, o):
                nxt = frozenset(y for x in tail for e, y in moves.get(x, ()) if e == o)
                if nxt:
                    out.append(nxt)
        return out

    def search(choice: dict, pending: list) -> bool:
        nonlocal visited
        visited += 1
        if visited > cap:
            raise CapExceeded(visited, cap, "deterministic candidates")
        if not pending:
            theta = deterministic_mapping(p, choice)
            depth = max(b.max_observable_length, len(choice))
            return opacity_from(explore(p, theta, depth)).opaque
        m, rest = pending[0], pending[1:]
        for g in decisions:
            succ = successors(m, g)
            if succ is None:
                continue
            choice[m] = g
            new = [m2 for m2 in dict.fromkeys(succ) if m2 not in choice and m2 not in rest]
            if search(choice, rest + new):
                return True
            del choice[m]
        return False

    return search({}, [frozenset({p.initial})])

