"""Micro/macro states, macro-control-decisions and their reach operators.

Everything here is a plain hashable value built from frozensets:

* micro-state ``m``: ``frozenset`` of plant states
* control decision ``g``: ``frozenset`` of enabled controllable events
* augmented micro-state: ``(m, g)``
* macro-state: ``frozenset`` of micro-states
* augmented macro-state: ``frozenset`` of augmented micro-states
* decision set: non-empty ``frozenset`` of control decisions
* macro-control-decision: ``frozenset`` of ``(m, decision_set)`` pairs,
  one pair per micro-state of the macro-state it is paired with
"""
from __future__ import annotations

from itertools import chain, combinations, product
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional

from .plant import (
    CapExceeded,
    ModelError,
    Plant,
    canonical,
    fmt_names,
    names_key,
    observable_reach,
    unobservable_reach,
)

DEFAULT_CAP = 64


class InfoState(NamedTuple):
    """Information state (supervisor estimate, intruder's macro-state)."""

    estimate: frozenset
    macro: frozenset


# --- construction helpers ---------------------------------------------------

def micro(*states: str) -> frozenset:
    return frozenset(states)


def macro(*micros: Iterable[str]) -> frozenset:
    return frozenset(frozenset(m) for m in micros)


def decision(*events: str) -> frozenset:
    return frozenset(events)


def irredundant(options: Iterable[Iterable[str]]) -> frozenset:
    """Drop every option strictly contained in another one."""
    opts = {frozenset(g) for g in options}
    return frozenset(g for g in opts if not any(g < h for h in opts))


def decision_set(options: Iterable[Iterable[str]], normalize: bool = True) -> frozenset:
    opts = irredundant(options) if normalize else frozenset(frozenset(g) for g in options)
    if not opts:
        raise ModelError("a decision set needs at least one control decision")
    return opts


def macro_decision(rows: Mapping[Iterable[str], Iterable[Iterable[str]]] | Iterable) -> frozenset:
    """Build a macro-control-decision from ``{micro: options}`` or pairs."""
    items = rows.items() if isinstance(rows, Mapping) else rows
    out = {}
    for m, opts in items:
        m = frozenset(m)
        if m in out:
            raise ModelError(f"micro-state {fmt_names(m)} assigned twice")
        out[m] = decision_set(opts, normalize=False)
    return frozenset(out.items())


def domain(d: frozenset) -> frozenset:
    return frozenset(m for m, _ in d)


def compatible(d: frozenset, y: frozenset) -> bool:
    return len(d) == len(y) and domain(d) == y


# --- canonical ordering and rendering ---------------------------------------

def micro_key(m) -> tuple:
    return names_key(m)


decision_key = micro_key


def aug_key(a) -> tuple:
    return micro_key(a[0]), decision_key(a[1])


def macro_key(y) -> tuple:
    return tuple(sorted(micro_key(m) for m in y))


def aug_macro_key(z) -> tuple:
    return tuple(sorted(aug_key(a) for a in z))


def decision_set_key(opts) -> tuple:
    return tuple(sorted(decision_key(g) for g in opts))


def macro_decision_key(d) -> tuple:
    return tuple(sorted((micro_key(m), decision_set_key(opts)) for m, opts in d))


def info_key(i) -> tuple:
    return macro_key(i[1]), micro_key(i[0])


fmt_micro = fmt_names
fmt_decision = fmt_names


def fmt_aug(a) -> str:
    return f"({fmt_micro(a[0])},{fmt_decision(a[1])})"


def fmt_macro(y) -> str:
    return "{" + ",".join(fmt_micro(m) for m in sorted(y, key=micro_key)) + "}"


def fmt_aug_macro(z) -> str:
    return "{" + ",".join(fmt_aug(a) for a in sorted(z, key=aug_key)) + "}"


def fmt_decision_set(opts) -> str:
    return "{" + ",".join(fmt_decision(g) for g in sorted(opts, key=decision_key)) + "}"


def fmt_macro_decision(d) -> str:
    rows = sorted(d, key=lambda row: micro_key(row[0]))
    return "[" + "; ".join(f"{fmt_micro(m)}=>{fmt_decision_set(opts)}" for m, opts in rows) + "]"


# --- reach operators ----------------------------------------------------------

def odot(p: Plant, d: Iterable) -> frozenset:
    """Unobservable reach of a macro-control-decision."""
    return frozenset(
        (unobservable_reach(p, m, g), g) for m, opts in d for g in opts
    )


def macro_observable_reach(p: Plant, z: Iterable, o: str) -> Optional[frozenset]:
    """Observable reach of an augmented macro-state; ``None`` when nothing moves.

    Micro-states with an empty observable reach are dropped.
    """
    out = set()
    for m, g in z:
        if p.allows(g, o):
            nxt = observable_reach(p, m, o)
            if nxt:
                out.add(nxt)
    return frozenset(out) if out else None


def strip(z: Iterable) -> frozenset:
    return frozenset(m for m, _ in z)


def flatten(y: Iterable[Iterable[str]]) -> frozenset:
    return frozenset(chain.from_iterable(y))


# --- permissiveness orderings ------------------------------------------------

def decision_set_leq(a, b) -> bool:
    return all(any(g <= h for h in b) for g in a)


def decision_set_lt(a, b) -> bool:
    return decision_set_leq(a, b) and any(g < h for g in a for h in b)


def macro_decision_lt(d1, d2) -> bool:
    r1, r2 = dict(d1), dict(d2)
    if r1.keys() != r2.keys():
        raise ModelError("macro-control-decisions over different macro-states")
    return (all(decision_set_leq(r1[m], r2[m]) for m in r1)
            and any(decision_set_lt(r1[m], r2[m]) for m in r1))


# --- enumeration ---------------------------------------------------------------

def effective_decision(p: Plant, m, g) -> frozenset:
    """Restrict ``g`` to controllable events that can actually fire from ``m``.

    Events enabled by ``g`` but undefined everywhere in the unobservable
    reach of ``m`` never occur, so the restricted decision yields the same
    reach and the same observable continuations.
    """
    reach = unobservable_reach(p, m, g)
    active = {e for x in reach for e in p.successors(x) if e in g}
    return frozenset(active)


def _powerset(events: Iterable[str]) -> Iterator[frozenset]:
    evs = canonical(events)
    return (frozenset(c) for r in range(len(evs) + 1) for c in combinations(evs, r))


def antichains(elements: Iterable[frozenset], cap: int | None = None) -> list[frozenset]:
    """All non-empty antichains (under set inclusion) of ``elements``."""
    elems = sorted(set(elements), key=decision_key)
    found: list[frozenset] = []

    def extend(start: int, current: list[frozenset]) -> None:
        for j in range(start, len(elems)):
            e = elems[j]
            if any(e <= c or c <= e for c in current):
                continue
            chosen = current + [e]
            found.append(frozenset(chosen))
            if cap is not None and len(found) > cap:
                raise CapExceeded(len(found), cap)
            extend(j + 1, chosen)

    extend(0, [])
    return sorted(found, key=decision_set_key)


def micro_options(p: Plant, m, cap: int = DEFAULT_CAP, collapse_inactive: bool = True) -> list[frozenset]:
    """Irredundant decision sets available at micro-state ``m``.

    With ``collapse_inactive`` (the default) decisions that differ only in
    events unable to fire from ``m`` are identified first.
    """
    gammas = _powerset(p.controllable)
    if collapse_inactive:
        gammas = {effective_decision(p, m, g) for g in gammas}
    return antichains(gammas, cap)


def iter_compatible_decisions(p: Plant, y, cap: int = DEFAULT_CAP, collapse_inactive: bool = True) -> Iterator[frozenset]:
    micros = sorted(y, key=micro_key)
    options = [micro_options(p, m, cap, collapse_inactive) for m in micros]
    for choice in product(*options):
        yield frozenset(zip(micros, choice))


def enumerate_compatible_decisions(p: Plant, y, cap: int = DEFAULT_CAP, collapse_inactive: bool = True) -> list[frozenset]:
    """Every compatible irredundant macro-control-decision at ``y``, canonically ordered."""
    return list(iter_compatible_decisions(p, y, cap, collapse_inactive))
