"""Generalized bipartite transition system (G-BTS) and its pruning.

Y-states are macro-states where the supervisor picks a macro-control-decision;
Z-states are augmented macro-states where the plant emits an observation.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .infostate import (
    DEFAULT_CAP,
    aug_macro_key,
    flatten,
    fmt_aug_macro,
    fmt_macro,
    fmt_macro_decision,
    iter_compatible_decisions,
    macro_decision_key,
    macro_key,
    macro_observable_reach,
    odot,
    strip,
)
from .plant import ModelError, Plant, canonical


class UnknownState(ModelError):
    pass


@dataclass
class Gbts:
    """A G-BTS restricted to states reachable from ``y0``.

    ``h_yz[y][d]`` is the Z-state reached from ``y`` under ``d`` and
    ``h_zy[z][o]`` the Y-state reached from ``z`` on observation ``o``.
    An empty structure (``y0`` removed) has no Y-states at all.
    """

    plant: Plant
    y0: frozenset
    h_yz: dict = field(default_factory=dict)
    h_zy: dict = field(default_factory=dict)

    @property
    def y_states(self) -> frozenset:
        return frozenset(self.h_yz)

    @property
    def z_states(self) -> frozenset:
        return frozenset(self.h_zy)

    @property
    def empty(self) -> bool:
        return self.y0 not in self.h_yz

    def __contains__(self, state) -> bool:
        return state in self.h_yz or state in self.h_zy

    def __len__(self) -> int:
        return len(self.h_yz) + len(self.h_zy)

    def transitions(self) -> int:
        return sum(map(len, self.h_yz.values())) + sum(map(len, self.h_zy.values()))


def build_total(p: Plant, cap: int = DEFAULT_CAP, collapse_inactive: bool = True) -> Gbts:
    """Breadth-first construction of the reachable all-feasible G-BTS."""
    y0 = frozenset({frozenset({p.initial})})
    t = Gbts(p, y0)
    observations = canonical(p.observable)
    queue = deque([y0])
    t.h_yz[y0] = {}
    while queue:
        y = queue.popleft()
        row_cache: dict = {}
        out = t.h_yz[y]
        for d in iter_compatible_decisions(p, y, cap, collapse_inactive):
            parts = []
            for row in d:
                if row not in row_cache:
                    row_cache[row] = odot(p, (row,))
                parts.append(row_cache[row])
            z = frozenset().union(*parts)
            out[d] = z
            if z in t.h_zy:
                continue
            succ = {}
            t.h_zy[z] = succ
            for o in observations:
                y2 = macro_observable_reach(p, z, o)
                if y2 is None:
                    continue
                succ[o] = y2
                if y2 not in t.h_yz:
                    t.h_yz[y2] = {}
                    queue.append(y2)
    return t


def revealing_z_states(t: Gbts, p: Plant | None = None) -> frozenset:
    """Z-states whose flattened estimate lies inside the secret set."""
    p = p or t.plant
    return frozenset(z for z in t.h_zy if flatten(strip(z)) <= p.secret)


def _trim(t: Gbts, y_keep, z_keep) -> Gbts:
    out = Gbts(t.plant, t.y0)
    if t.y0 not in y_keep:
        return out
    queue = deque([t.y0])
    out.h_yz[t.y0] = {}
    while queue:
        y = queue.popleft()
        for d, z in t.h_yz[y].items():
            if z not in z_keep:
                continue
            out.h_yz[y][d] = z
            if z in out.h_zy:
                continue
            out.h_zy[z] = {}
            for o, y2 in t.h_zy[z].items():
                if y2 not in y_keep:
                    continue
                out.h_zy[z][o] = y2
                if y2 not in out.h_yz:
                    out.h_yz[y2] = {}
                    queue.append(y2)
    return out


def restrict(t: Gbts, keep: Iterable) -> Gbts:
    """Keep only the listed states (and transitions between them), then re-trim."""
    keep = set(keep)
    return _trim(t, keep & set(t.h_yz), keep & set(t.h_zy))


def feasible_observations(p: Plant, z) -> list[str]:
    return [o for o in canonical(p.observable) if macro_observable_reach(p, z, o) is not None]


def inconsistent_states(t: Gbts) -> tuple[frozenset, frozenset]:
    """Y-states without a decision and Z-states missing a feasible observation."""
    bad_y = frozenset(y for y, out in t.h_yz.items() if not out)
    bad_z = frozenset(
        z for z, out in t.h_zy.items()
        if any(o not in out for o in feasible_observations(t.plant, z))
    )
    return bad_y, bad_z


class PruneRound(NamedTuple):
    removed_y: frozenset
    removed_z: frozenset
    unreachable: int  # states dropped by the reachability re-trim

    @property
    def changed(self) -> bool:
        return bool(self.removed_y or self.removed_z or self.unreachable)


def prune_rounds(t0: Gbts) -> tuple[Gbts, list[PruneRound]]:
    """Apply the consistency operator until nothing changes.

    Returns the fixed point and one record per application, the last one
    being the application that changed nothing.
    """
    t = t0
    rounds = []
    while True:
        bad_y, bad_z = inconsistent_states(t)
        nxt = _trim(t, set(t.h_yz) - bad_y, set(t.h_zy) - bad_z)
        dropped = len(t) - len(nxt) - len(bad_y) - len(bad_z)
        rounds.append(PruneRound(bad_y, bad_z, dropped))
        if not rounds[-1].changed:
            return t, rounds
        t = nxt


def prune_to_fixpoint(t0: Gbts) -> Gbts:
    return prune_rounds(t0)[0]


def remove_revealing(t: Gbts) -> Gbts:
    return restrict(t, (set(t.h_yz) | set(t.h_zy)) - revealing_z_states(t))


def build_pruned(p: Plant, cap: int = DEFAULT_CAP, collapse_inactive: bool = True) -> Gbts:
    """T* for ``p``: total G-BTS, minus secret-revealing Z-states, pruned."""
    return prune_to_fixpoint(remove_revealing(build_total(p, cap, collapse_inactive)))


def decisions_at(t: Gbts, y) -> list[frozenset]:
    if y not in t.h_yz:
        raise UnknownState(f"Y-state {fmt_macro(y)} not in G-BTS")
    return sorted(t.h_yz[y], key=macro_decision_key)


def check_structure(t: Gbts) -> None:
    """Re-verify the transition conditions; raises AssertionError on violation."""
    p = t.plant
    for y, out in t.h_yz.items():
        for d, z in out.items():
            assert {m for m, _ in d} == set(y) and len(d) == len(y), "incompatible decision"
            assert odot(p, d) == z, "Z-state differs from odot(d)"
            assert z in t.h_zy
    for z, out in t.h_zy.items():
        for o, y in out.items():
            assert macro_observable_reach(p, z, o) == y, "Y-state differs from observable reach"
            assert y in t.h_yz


def to_dot(t: Gbts, name: str | None = None) -> str:
    """Graphviz rendering: Y-states as boxes, Z-states as ellipses."""
    ys = sorted(t.h_yz, key=macro_key)
    zs = sorted(t.h_zy, key=aug_macro_key)
    ids = {y: f"y{i}" for i, y in enumerate(ys)}
    ids.update({z: f"z{i}" for i, z in enumerate(zs)})

    def q(s: str) -> str:
        return '"' + s.replace('"', '\\"') + '"'

    lines = [f"digraph {q(name or t.plant.name)} {{", "  rankdir=LR;"]
    for y in ys:
        extra = ", penwidth=2" if y == t.y0 else ""
        lines.append(f"  {ids[y]} [shape=box, label={q(fmt_macro(y))}{extra}];")
    for z in zs:
        lines.append(f"  {ids[z]} [shape=ellipse, label={q(fmt_aug_macro(z))}];")
    for y in ys:
        for d in sorted(t.h_yz[y], key=macro_decision_key):
            lines.append(f"  {ids[y]} -> {ids[t.h_yz[y][d]]} [label={q(fmt_macro_decision(d))}];")
    for z in zs:
        for o in canonical(t.h_zy[z]):
            lines.append(f"  {ids[z]} -> {ids[t.h_zy[z][o]]} [label={q(o)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
