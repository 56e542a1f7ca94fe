"""Plant model, reach operators, natural projection and open-loop opacity.

A plant is a deterministic finite automaton whose alphabet is split twice:
into observable/unobservable events and into controllable/uncontrollable
events.  A control decision is stored as the set of *enabled controllable*
events; uncontrollable events are always implicitly enabled.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

Micro = frozenset  # frozenset[str] of state names
Decision = frozenset  # frozenset[str] of enabled controllable events

_TOKEN = re.compile(r"^[^\s#]+$")


class ModelError(ValueError):
    """Invalid input: unknown names, malformed structures, bad arguments."""


class ParseError(ModelError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class CapExceeded(RuntimeError):
    """Raised when an exhaustive enumeration would exceed its size cap."""

    def __init__(self, count: int, cap: int, what: str = "antichains"):
        self.count = count
        self.cap = cap
        super().__init__(f"{what}: more than {cap} candidates (stopped at {count})")


@lru_cache(maxsize=None)
def natural_key(name: str) -> tuple:
    """Sort key that orders digit runs numerically ("9" < "10")."""
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p)
                 for p in re.findall(r"\d+|\D+", name))


def canonical(names: Iterable[str]) -> list[str]:
    return sorted(names, key=natural_key)


def names_key(names: Iterable[str]) -> tuple:
    return tuple(natural_key(n) for n in canonical(names))


def fmt_names(names: Iterable[str]) -> str:
    return "{" + ",".join(canonical(names)) + "}"


@dataclass(frozen=True)
class Plant:
    """G = (X, Sigma, delta, x0) with event partitions and secret states.

    Build instances with :meth:`build`; the constructor expects already
    validated, canonically ordered data.
    """

    name: str
    states: tuple[str, ...]
    events: tuple[str, ...]
    observable: frozenset[str]
    controllable: frozenset[str]
    initial: str
    secret: frozenset[str]
    delta: Mapping[tuple[str, str], str]
    _out: Mapping[str, Mapping[str, str]] = field(repr=False, compare=False, default=None)

    @classmethod
    def build(
        cls,
        name: str,
        transitions: Iterable[tuple[str, str, str]],
        initial: str,
        observable: Iterable[str],
        controllable: Iterable[str],
        secret: Iterable[str] = (),
        events: Iterable[str] | None = None,
        states: Iterable[str] = (),
    ) -> "Plant":
        transitions = list(transitions)
        observable = frozenset(observable)
        controllable = frozenset(controllable)
        secret = frozenset(secret)
        if events is None:
            events = {e for _, e, _ in transitions} | observable | controllable
        events = frozenset(events)
        for tok in [name, *events]:
            if not _TOKEN.match(tok):
                raise ModelError(f"invalid token {tok!r}")
        for label, subset in (("observable", observable), ("controllable", controllable)):
            extra = subset - events
            if extra:
                raise ModelError(f"{label} events not in alphabet: {fmt_names(extra)}")
        all_states = {initial, *secret, *states}
        delta: dict[tuple[str, str], str] = {}
        for src, ev, dst in transitions:
            if ev not in events:
                raise ModelError(f"unknown event {ev!r} in transition {src} {ev} {dst}")
            if (src, ev) in delta and delta[src, ev] != dst:
                raise ModelError(f"nondeterministic transition from {src!r} on {ev!r}")
            delta[src, ev] = dst
            all_states.update((src, dst))
        for st in all_states:
            if not _TOKEN.match(st):
                raise ModelError(f"invalid state name {st!r}")
        return cls(
            name=name,
            states=tuple(canonical(all_states)),
            events=tuple(canonical(events)),
            observable=observable,
            controllable=controllable,
            initial=initial,
            secret=secret,
            delta=MappingProxyType(dict(sorted(delta.items(), key=lambda kv: (natural_key(kv[0][0]), natural_key(kv[0][1]))))),
        )

    def __post_init__(self):
        out: dict[str, dict[str, str]] = {x: {} for x in self.states}
        for (src, ev), dst in self.delta.items():
            out[src][ev] = dst
        object.__setattr__(self, "_out", MappingProxyType({x: MappingProxyType(d) for x, d in out.items()}))

    @cached_property
    def unobservable(self) -> frozenset[str]:
        return frozenset(self.events) - self.observable

    @cached_property
    def uncontrollable(self) -> frozenset[str]:
        return frozenset(self.events) - self.controllable

    @cached_property
    def all_enabled(self) -> Decision:
        return frozenset(self.controllable)

    def successors(self, x: str) -> Mapping[str, str]:
        """Outgoing transitions of ``x`` as an event -> target mapping."""
        return self._out[x]

    def allows(self, decision: Decision, event: str) -> bool:
        """Whether ``event`` is enabled under ``decision`` (uncontrollables always are)."""
        return event in decision or event not in self.controllable

    def check_state(self, x: str) -> None:
        if x not in self._out:
            raise ModelError(f"unknown state {x!r}")

    def check_event(self, e: str) -> None:
        if e not in self.events:
            raise ModelError(f"unknown event {e!r}")

    def check_decision(self, g: Iterable[str]) -> Decision:
        g = frozenset(g)
        bad = g - self.controllable
        if bad:
            raise ModelError(f"decision enables non-controllable events {fmt_names(bad)}")
        return g

    def __repr__(self) -> str:
        return f"Plant({self.name!r}, |X|={len(self.states)}, |delta|={len(self.delta)})"


def step(p: Plant, x: str, s: Sequence[str]) -> Optional[str]:
    """Extended transition function; ``None`` when some step is undefined."""
    p.check_state(x)
    for e in s:
        p.check_event(e)
    for e in s:
        nxt = p.successors(x).get(e)
        if nxt is None:
            return None
        x = nxt
    return x


def unobservable_reach(p: Plant, m: Iterable[str], g: Iterable[str]) -> Micro:
    """States reachable from ``m`` through unobservable events enabled by ``g``."""
    g = frozenset(g)
    seen = set(m)
    for x in seen:
        p.check_state(x)
    stack = list(seen)
    unobs = p.unobservable
    while stack:
        x = stack.pop()
        for e, y in p.successors(x).items():
            if e in unobs and p.allows(g, e) and y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


def observable_reach(p: Plant, m: Iterable[str], o: str) -> Micro:
    if o not in p.observable:
        raise ModelError(f"{o!r} is not an observable event")
    out = set()
    for x in m:
        y = p.successors(x).get(o)
        if y is not None:
            out.add(y)
    return frozenset(out)


def project(p: Plant, s: Sequence[str]) -> tuple[str, ...]:
    """Natural projection onto observable events."""
    for e in s:
        p.check_event(e)
    return tuple(e for e in s if e in p.observable)


def observer_estimate(p: Plant, obs: Sequence[str]) -> Micro:
    """Open-loop state estimate after ``obs`` (all controllable events enabled)."""
    m = unobservable_reach(p, {p.initial}, p.all_enabled)
    for o in obs:
        m = unobservable_reach(p, observable_reach(p, m, o), p.all_enabled)
        if not m:
            break
    return m


class OpacityVerdict(NamedTuple):
    opaque: bool
    witness: Optional[tuple[str, ...]] = None

    def __str__(self) -> str:
        if self.opaque:
            return "opaque"
        return "not opaque, witness: " + (" ".join(self.witness) or "<empty>")


def verify_open_loop_opacity(p: Plant, depth: int | None = None) -> OpacityVerdict:
    """Current-state opacity of the uncontrolled plant.

    Breadth-first search over the observer; the first revealing estimate
    found gives a shortest witness (ties broken by canonical event order).
    The observer is exact, so ``depth`` only has to be positive.
    """
    if depth is not None and depth < 1:
        raise ModelError("depth must be positive")
    start = unobservable_reach(p, {p.initial}, p.all_enabled)
    obs_events = canonical(p.observable)
    queue = deque([(start, ())])
    seen = {start}
    while queue:
        m, word = queue.popleft()
        if m <= p.secret:
            return OpacityVerdict(False, word)
        for o in obs_events:
            nxt = unobservable_reach(p, observable_reach(p, m, o), p.all_enabled)
            if nxt and nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, word + (o,)))
    return OpacityVerdict(True)


# --- .des text format -------------------------------------------------------

def parse_des(text: str) -> Plant:
    name = None
    fields: dict[str, list[str]] = {}
    transitions: list[tuple[str, str, str]] = []
    seen_pairs: set[tuple[str, str]] = set()
    in_trans = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if name is None:
            toks = line.split()
            if len(toks) != 2 or toks[0] != "plant":
                raise ParseError("expected 'plant <name>'", lineno)
            name = toks[1]
            continue
        if in_trans:
            toks = line.split()
            if len(toks) != 3:
                raise ParseError("expected 'src event dst'", lineno)
            if (toks[0], toks[1]) in seen_pairs:
                raise ParseError(f"duplicate transition for ({toks[0]}, {toks[1]})", lineno)
            seen_pairs.add((toks[0], toks[1]))
            transitions.append((toks[0], toks[1], toks[2]))
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in ("events", "observable", "controllable", "initial", "secret", "trans"):
            raise ParseError(f"unexpected line {line!r}", lineno)
        if key in fields:
            raise ParseError(f"duplicate '{key}:' line", lineno)
        fields[key] = rest.split()
        if key == "trans":
            if fields[key]:
                raise ParseError("'trans:' takes no arguments", lineno)
            in_trans = True
    if name is None:
        raise ParseError("empty plant file")
    for key in ("events", "observable", "controllable", "initial"):
        if key not in fields:
            raise ParseError(f"missing '{key}:' line")
    if len(fields["initial"]) != 1:
        raise ParseError("exactly one initial state required")
    events = fields["events"]
    if len(set(events)) != len(events):
        raise ParseError("duplicate event in 'events:'")
    try:
        return Plant.build(
            name,
            transitions,
            initial=fields["initial"][0],
            observable=fields["observable"],
            controllable=fields["controllable"],
            secret=fields.get("secret", []),
            events=events,
        )
    except ModelError as exc:
        raise ParseError(str(exc)) from exc


def load_des(path) -> Plant:
    with open(path, encoding="utf-8") as fh:
        return parse_des(fh.read())


def dump_des(p: Plant) -> str:
    lines = [
        f"plant {p.name}",
        "events: " + " ".join(p.events),
        "observable: " + " ".join(canonical(p.observable)),
        "controllable: " + " ".join(canonical(p.controllable)),
        f"initial: {p.initial}",
        "secret: " + " ".join(canonical(p.secret)),
        "trans:",
    ]
    lines += [f"{src} {ev} {dst}" for (src, ev), dst in p.delta.items()]
    return "\n".join(line.rstrip() for line in lines) + "\n"
