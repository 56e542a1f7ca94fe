"""IS-mappings and their extraction from the pruned G-BTS."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterator, Mapping, Optional

from .gbts import Gbts, build_pruned, decisions_at
from .infostate import (
    DEFAULT_CAP,
    InfoState,
    decision_key,
    fmt_decision_set,
    fmt_macro,
    fmt_micro,
    info_key,
    macro_decision_lt,
    micro_key,
)
from .plant import ModelError, Plant, canonical


class ThetaUndefined(LookupError):
    def __init__(self, estimate, macro):
        self.estimate = estimate
        self.macro = macro
        super().__init__(f"IS-mapping undefined at ({fmt_micro(estimate)}, {fmt_macro(macro)})")


@dataclass(frozen=True)
class IsMapping:
    """Partial map from information states to non-deterministic decision sets."""

    plant: str
    entries: Mapping[InfoState, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (m, y), opts in self.entries.items():
            m, y = frozenset(m), frozenset(frozenset(x) for x in y)
            if m not in y:
                raise ModelError(f"estimate {fmt_micro(m)} not in macro-state {fmt_macro(y)}")
            opts = frozenset(frozenset(g) for g in opts)
            if not opts:
                raise ModelError("empty decision set")
            clean[InfoState(m, y)] = opts
        ordered = dict(sorted(clean.items(), key=lambda kv: info_key(kv[0])))
        object.__setattr__(self, "entries", MappingProxyType(ordered))

    def __getitem__(self, key) -> frozenset:
        m, y = key
        try:
            return self.entries[InfoState(m, y)]
        except KeyError:
            raise ThetaUndefined(m, y) from None

    def __contains__(self, key) -> bool:
        return InfoState(*key) in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[InfoState]:
        return iter(self.entries)

    def items(self):
        return self.entries.items()

    def d_theta(self, y) -> frozenset:
        """Macro-control-decision issued at macro-state ``y``."""
        return frozenset((m, self[m, y]) for m in y)

    def describe(self) -> str:
        return "\n".join(
            f"({fmt_micro(i.estimate)}, {fmt_macro(i.macro)}) -> {fmt_decision_set(opts)}"
            for i, opts in self.items()
        )

    # JSON ---------------------------------------------------------------

    def to_json(self) -> str:
        entries = []
        for i, opts in self.items():
            entries.append({
                "estimate": canonical(i.estimate),
                "macro": [canonical(m) for m in sorted(i.macro, key=micro_key)],
                "decisions": [canonical(g) for g in sorted(opts, key=decision_key)],
            })
        return json.dumps({"plant": self.plant, "entries": entries}, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "IsMapping":
        try:
            doc = json.loads(text)
            entries = {}
            for e in doc["entries"]:
                key = InfoState(frozenset(e["estimate"]), frozenset(frozenset(m) for m in e["macro"]))
                if key in entries:
                    raise ModelError(f"duplicate entry {fmt_micro(key.estimate)}")
                entries[key] = frozenset(frozenset(g) for g in e["decisions"])
            return cls(str(doc["plant"]), entries)
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelError(f"malformed IS-mapping: {exc}") from exc


def check_mapping(p: Plant, theta: IsMapping) -> None:
    """Reject names unknown to ``p`` and decisions on non-controllable events."""
    for i, opts in theta.items():
        for x in i.estimate | frozenset().union(*i.macro):
            p.check_state(x)
        for g in opts:
            p.check_decision(g)


class Strategy(enum.Enum):
    FIRST = "first"
    LOCALLY_MAXIMAL = "max"


def locally_maximal(cands: list[frozenset]) -> frozenset:
    """First candidate not strictly less permissive than another candidate."""
    if not cands:
        raise ModelError("no candidate macro-control-decisions")
    for d in cands:
        if not any(macro_decision_lt(d, other) for other in cands if other is not d):
            return d
    raise AssertionError("strict order has no maximal element")  # pragma: no cover


def choose(cands: list[frozenset], strategy: Strategy) -> frozenset:
    if strategy is Strategy.FIRST:
        return cands[0]
    return locally_maximal(cands)


def extract(t: Gbts, strategy: Strategy = Strategy.LOCALLY_MAXIMAL) -> Optional[IsMapping]:
    """Depth-first extraction of an IS-mapping from a pruned G-BTS."""
    if t.empty:
        return None
    entries = {}
    visited = {t.y0}
    stack = [t.y0]
    while stack:
        y = stack.pop()
        d = choose(decisions_at(t, y), strategy)
        for m, opts in d:
            entries[InfoState(m, y)] = opts
        z = t.h_yz[y][d]
        for o in reversed(canonical(t.h_zy[z])):
            y2 = t.h_zy[z][o]
            if y2 not in visited:
                visited.add(y2)
                stack.append(y2)
    return IsMapping(t.plant.name, entries)


def synthesize(
    p: Plant,
    strategy: Strategy = Strategy.LOCALLY_MAXIMAL,
    cap: int = DEFAULT_CAP,
) -> Optional[IsMapping]:
    """Opacity-enforcing IS-mapping for ``p``, or ``None`` when none exists."""
    return extract(build_pruned(p, cap), strategy)
