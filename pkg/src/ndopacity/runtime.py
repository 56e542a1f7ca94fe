"""Closed-loop semantics: extended strings, estimate recursions, online decoding."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from .infostate import (
    InfoState,
    flatten,
    fmt_decision,
    fmt_decision_set,
    fmt_macro,
    fmt_micro,
    decision_key,
    macro_observable_reach,
    odot,
    strip,
)
from .plant import ModelError, Plant, canonical, observable_reach, unobservable_reach
from .synthesis import IsMapping, ThetaUndefined


class InfeasibleHistory(ModelError):
    pass


class InfeasibleObservation(ModelError):
    pass


class ObservationNotEnabled(ModelError):
    pass


def _is_decision(item) -> bool:
    return isinstance(item, frozenset)


def check_extended(p: Plant, rho: Sequence) -> None:
    """Extended strings alternate decision, event, decision, ... starting with a decision."""
    for k, item in enumerate(rho):
        if k % 2 == 0:
            if not _is_decision(item):
                raise ModelError(f"position {k}: expected a control decision, got {item!r}")
            p.check_decision(item)
        else:
            if not isinstance(item, str):
                raise ModelError(f"position {k}: expected an event, got {item!r}")
            p.check_event(item)


def observe_project(p: Plant, rho: Sequence) -> tuple:
    """Erase every unobservable event together with the decision following it."""
    check_extended(p, rho)
    if not rho:
        return ()
    out = [rho[0]]
    for k in range(1, len(rho), 2):
        if rho[k] in p.observable:
            out.append(rho[k])
            if k + 1 < len(rho):
                out.append(rho[k + 1])
    return tuple(out)


def events_of(rho: Sequence) -> tuple[str, ...]:
    return tuple(rho[1::2])


def _walk_history(p: Plant, h: Sequence) -> tuple[frozenset, frozenset]:
    check_extended(p, h)
    m = frozenset({p.initial})
    m_plus = None
    for k, item in enumerate(h):
        if k % 2 == 0:
            m_plus = unobservable_reach(p, m, item)
        else:
            if item not in p.observable:
                raise ModelError(f"decision history contains unobservable event {item!r}")
            if not p.allows(h[k - 1], item):
                raise InfeasibleHistory(f"{item} is disabled by {fmt_decision(h[k - 1])}")
            m = observable_reach(p, m_plus, item)
            if not m:
                raise InfeasibleHistory(f"{item} cannot occur from {fmt_micro(m_plus)}")
    return m, m_plus


def sup_estimate_after_obs(p: Plant, h: Sequence) -> frozenset:
    """Supervisor estimate right after the last observation of ``h``."""
    if len(h) % 2 == 1:
        raise ModelError("history must be empty or end with an observable event")
    return _walk_history(p, h)[0]


def sup_estimate_after_dec(p: Plant, h: Sequence) -> frozenset:
    """Supervisor estimate including the unobservable tail of the last decision."""
    if len(h) % 2 == 0:
        raise ModelError("history must end with a control decision")
    return _walk_history(p, h)[1]


class IntruderEstimate(NamedTuple):
    macro: frozenset
    macro_plus: frozenset
    flat: frozenset


def intruder_estimates(p: Plant, theta: IsMapping, s: Sequence[str]) -> IntruderEstimate:
    """Macro-level information flow along observation ``s`` under ``theta``."""
    y = frozenset({frozenset({p.initial})})
    z = odot(p, theta.d_theta(y))
    for o in s:
        if o not in p.observable:
            raise ModelError(f"{o!r} is not observable")
        y = macro_observable_reach(p, z, o)
        if y is None:
            raise InfeasibleObservation(f"{o} cannot occur after {' '.join(s)}")
        z = odot(p, theta.d_theta(y))
    return IntruderEstimate(y, z, flatten(strip(z)))


def reach_closure(p: Plant, theta: IsMapping) -> frozenset:
    """Information states reachable from the initial one under ``theta``."""
    y0 = frozenset({frozenset({p.initial})})
    seen_y = {y0}
    queue = deque([y0])
    out = set()
    observations = canonical(p.observable)
    while queue:
        y = queue.popleft()
        out.update(InfoState(m, y) for m in y)
        z = odot(p, theta.d_theta(y))
        for o in observations:
            y2 = macro_observable_reach(p, z, o)
            if y2 is not None and y2 not in seen_y:
                seen_y.add(y2)
                queue.append(y2)
    return frozenset(out)


def is_reachability_closed(p: Plant, theta: IsMapping) -> bool:
    try:
        reach_closure(p, theta)
    except ThetaUndefined:
        return False
    return True


@dataclass
class Session:
    """Online decoder for an IS-mapping, optionally co-simulating the plant.

    Call :meth:`step` once with ``obs=None`` to issue the initial decision,
    then once per observed event.  Decisions depend only on ``(m, macro)``;
    ``history`` is kept for diagnostics.
    """

    plant: Plant
    theta: IsMapping
    seed: int = 0
    m: frozenset = None
    m_plus: Optional[frozenset] = None
    macro: frozenset = None
    macro_plus: Optional[frozenset] = None
    applied: Optional[frozenset] = None
    offered: Optional[frozenset] = None
    history: list = field(default_factory=list)
    true_state: Optional[str] = None
    rng: random.Random = field(init=False, repr=False)
    steps: int = 0

    def __post_init__(self):
        self.rng = random.Random(self.seed)
        if self.m is None:
            self.m = frozenset({self.plant.initial})
            self.macro = frozenset({self.m})

    @property
    def info(self) -> InfoState:
        return InfoState(self.m, self.macro)

    @property
    def flat(self) -> frozenset:
        return flatten(strip(self.macro_plus)) if self.macro_plus is not None else frozenset()

    def enabled_observations(self) -> list[str]:
        """Observations the supervisor considers possible under the applied decision."""
        if self.applied is None:
            return []
        return [o for o in canonical(self.plant.observable)
                if self.plant.allows(self.applied, o) and observable_reach(self.plant, self.m_plus, o)]

    def step(self, obs: Optional[str] = None) -> frozenset:
        p = self.plant
        if obs is None:
            if self.applied is not None:
                raise ModelError("initial decision already issued; pass an observation")
        else:
            if self.applied is None:
                raise ModelError("issue the initial decision before observing")
            if obs not in p.observable:
                raise ObservationNotEnabled(f"{obs!r} is not an observable event")
            if not p.allows(self.applied, obs):
                raise ObservationNotEnabled(f"{obs} disabled by {fmt_decision(self.applied)}")
            m = observable_reach(p, self.m_plus, obs)
            if not m:
                raise ObservationNotEnabled(f"{obs} cannot occur from {fmt_micro(self.m_plus)}")
            self.m = m
            self.macro = macro_observable_reach(p, self.macro_plus, obs)
            self.history.append(obs)
        self.offered = self.theta[self.m, self.macro]
        options = sorted(self.offered, key=decision_key)
        self.applied = self.rng.choice(options)
        self.m_plus = unobservable_reach(p, self.m, self.applied)
        self.macro_plus = odot(p, self.theta.d_theta(self.macro))
        self.history.append(self.applied)
        self.steps += 1
        return self.applied

    def transcript_line(self, obs: Optional[str]) -> str:
        return (
            f"step {self.steps - 1} obs={obs or '-'} issued={fmt_decision_set(self.offered)} "
            f"picked={fmt_decision(self.applied)} m={fmt_micro(self.m)} "
            f"macro={fmt_macro(self.macro)} flat={fmt_micro(self.flat)}"
        )


def decode_step(session: Session, obs: Optional[str] = None) -> tuple[Session, frozenset]:
    issued = session.step(obs)
    return session, issued


class PlantSimulator:
    """Hidden plant run consistent with the decisions a session applies."""

    def __init__(self, plant: Plant, seed: int = 0):
        self.plant = plant
        self.state = plant.initial
        self.rng = random.Random(f"plant:{seed}")

    def candidates(self, decision: frozenset, obs: str) -> list[str]:
        """States reachable unobservably now from which ``obs`` can fire."""
        p = self.plant
        if not p.allows(decision, obs):
            return []
        reach = unobservable_reach(p, {self.state}, decision)
        return [x for x in canonical(reach) if obs in p.successors(x)]

    def enabled(self, decision: frozenset) -> list[str]:
        return [o for o in canonical(self.plant.observable) if self.candidates(decision, o)]

    def fire(self, decision: frozenset, obs: str) -> str:
        cands = self.candidates(decision, obs)
        if not cands:
            raise InfeasibleObservation(f"{obs} cannot occur from plant state {self.state}")
        x = self.rng.choice(cands)
        self.state = self.plant.successors(x)[obs]
        return self.state
