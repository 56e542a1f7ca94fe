"""Finite-memory non-deterministic supervisors and their conversion to IS-mappings."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .infostate import (
    InfoState,
    decision_key,
    fmt_decision,
    fmt_macro,
    fmt_micro,
    macro_observable_reach,
    micro_key,
    odot,
)
from .plant import ModelError, Plant, canonical, natural_key, observable_reach, unobservable_reach
from .synthesis import IsMapping


class SupervisorUndefined(LookupError):
    pass


@dataclass(frozen=True)
class FiniteSupervisor:
    """Supervisor with finite memory.

    ``output[q]`` is the decision set offered in memory state ``q``;
    ``update[q, g, o]`` is the memory state after applying ``g`` and then
    observing ``o``.  Replaying a decision history through ``update``
    yields the decision set offered for that history.
    """

    states: tuple
    initial: str
    output: Mapping[str, frozenset]
    update: Mapping[tuple, str] = field(default_factory=dict)

    def __post_init__(self):
        states = tuple(sorted(set(self.states), key=natural_key))
        object.__setattr__(self, "states", states)
        if self.initial not in states:
            raise ModelError(f"initial memory state {self.initial!r} not declared")
        out = {}
        for q, opts in self.output.items():
            if q not in states:
                raise ModelError(f"output for undeclared memory state {q!r}")
            opts = frozenset(frozenset(g) for g in opts)
            if not opts:
                raise ModelError(f"empty decision set at memory state {q!r}")
            out[q] = opts
        upd = {}
        for (q, g, o), q2 in self.update.items():
            if q not in states or q2 not in states:
                raise ModelError(f"update references undeclared memory state ({q!r} -> {q2!r})")
            upd[q, frozenset(g), o] = q2
        object.__setattr__(self, "output", MappingProxyType(out))
        object.__setattr__(self, "update", MappingProxyType(upd))

    def decisions(self, q: str) -> frozenset:
        try:
            return self.output[q]
        except KeyError:
            raise SupervisorUndefined(f"no output at memory state {q!r}") from None

    def next(self, q: str, g: frozenset, o: str) -> str:
        try:
            return self.update[q, g, o]
        except KeyError:
            raise SupervisorUndefined(
                f"no update for memory {q!r}, decision {fmt_decision(g)}, event {o}") from None

    def replay(self, h) -> str:
        """Memory state after decision history ``h`` (decisions at even positions)."""
        q = self.initial
        for k in range(1, len(h), 2):
            q = self.next(q, h[k - 1], h[k])
        return q

    def check(self, p: Plant) -> None:
        for opts in self.output.values():
            for g in opts:
                p.check_decision(g)
        for (_, g, o) in self.update:
            p.check_decision(g)
            if o not in p.observable:
                raise ModelError(f"update on non-observable event {o!r}")

    def to_json(self) -> str:
        doc = {
            "states": list(self.states),
            "initial": self.initial,
            "output": {q: [canonical(g) for g in sorted(self.output[q], key=decision_key)]
                       for q in self.states if q in self.output},
            "update": [
                {"from": q, "decision": canonical(g), "event": o, "to": q2}
                for (q, g, o), q2 in sorted(
                    self.update.items(),
                    key=lambda kv: (natural_key(kv[0][0]), decision_key(kv[0][1]), natural_key(kv[0][2])))
            ],
        }
        return json.dumps(doc, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "FiniteSupervisor":
        try:
            doc = json.loads(text)
            update = {}
            for u in doc.get("update", []):
                key = (u["from"], frozenset(u["decision"]), u["event"])
                if key in update:
                    raise ModelError(f"duplicate update entry {key}")
                update[key] = u["to"]
            return cls(
                states=tuple(doc["states"]),
                initial=doc["initial"],
                output={q: frozenset(frozenset(g) for g in opts) for q, opts in doc["output"].items()},
                update=update,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelError(f"malformed supervisor: {exc}") from exc

    @classmethod
    def from_mapping(cls, p: Plant, theta: IsMapping) -> "FiniteSupervisor":
        """Wrap an IS-mapping; memory states are its reachable information states."""
        def name(i: InfoState) -> str:
            return f"{fmt_micro(i.estimate)}@{fmt_macro(i.macro)}"

        y0 = frozenset({frozenset({p.initial})})
        start = InfoState(frozenset({p.initial}), y0)
        output, update = {}, {}
        todo, seen = [start], {start}
        while todo:
            i = todo.pop()
            opts = theta[i]
            output[name(i)] = opts
            z = odot(p, theta.d_theta(i.macro))
            for g in opts:
                tail = unobservable_reach(p, i.estimate, g)
                for o in canonical(p.observable):
                    if not p.allows(g, o):
                        continue
                    m2 = observable_reach(p, tail, o)
                    if not m2:
                        continue
                    nxt = InfoState(m2, macro_observable_reach(p, z, o))
                    update[name(i), g, o] = name(nxt)
                    if nxt not in seen:
                        seen.add(nxt)
                        todo.append(nxt)
        return cls(tuple(output), name(start), output, update)


def convert(p: Plant, sn: FiniteSupervisor) -> IsMapping:
    """Build an IS-mapping from a possibly history-dependent finite supervisor.

    Each Y-layer is a set of (estimate, memory state) pairs; an information
    state receives the union of the decision sets of every memory state that
    shares its estimate in the first layer visiting its macro-state.
    """
    observations = canonical(p.observable)
    y0 = frozenset({(frozenset({p.initial}), sn.initial)})
    visited = {frozenset({frozenset({p.initial})})}
    entries: dict = {}

    def expand(y):
        macro = frozenset(m for m, _ in y)
        for m in sorted(macro, key=micro_key):
            opts = frozenset().union(*(sn.decisions(q) for m2, q in y if m2 == m))
            entries[InfoState(m, macro)] = opts
        z = {(unobservable_reach(p, m, g), q, g) for m, q in y for g in sn.decisions(q)}
        for o in observations:
            y2 = set()
            for m, q, g in z:
                if p.allows(g, o):
                    m2 = observable_reach(p, m, o)
                    if m2:
                        y2.add((m2, sn.next(q, g, o)))
            if not y2:
                continue
            key = frozenset(m for m, _ in y2)
            if key not in visited:
                visited.add(key)
                yield frozenset(y2)

    # iterative DFS preserving the recursive visiting order
    stack = [expand(y0)]
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
        else:
            stack.append(expand(nxt))
    return IsMapping(p.name, entries)
