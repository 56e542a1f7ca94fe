"""The twelve-state running-example plant, rebuilt from its textual constraints.

Only the behaviour described in words is known for this plant, so the
transition table below is a minimal completion.  :func:`reconstruct_fixture`
re-checks every textual constraint whenever it builds the plant.
"""
from __future__ import annotations

from .plant import (
    Plant,
    dump_des,
    observable_reach,
    project,
    step,
    unobservable_reach,
)

FIG1_TRANSITIONS = [
    ("0", "c1", "1"),
    ("0", "c2", "3"),
    # state 2 needs both controllable events enabled
    ("1", "c2", "2"),
    ("3", "c1", "2"),
    ("1", "o1", "4"),
    ("1", "o2", "5"),
    ("3", "o1", "5"),
    ("3", "o2", "4"),
    ("2", "o3", "4"),
    ("5", "c1", "6"),
    ("5", "c2", "7"),
    ("6", "c2", "8"),
    ("7", "c1", "8"),
    ("6", "o1", "9"),
    ("6", "o2", "10"),
    ("7", "o1", "10"),
    ("7", "o2", "11"),
]


class FixtureError(AssertionError):
    pass


def _check(cond: bool, what: str) -> None:
    if not cond:
        raise FixtureError(f"fixture constraint violated: {what}")


def reconstruct_fixture() -> Plant:
    p = Plant.build(
        "paper-fig1",
        FIG1_TRANSITIONS,
        initial="0",
        observable=["o1", "o2", "o3"],
        controllable=["c1", "c2"],
        secret=["0", "4", "10"],
        events=["c1", "c2", "o1", "o2", "o3"],
        states=[str(i) for i in range(12)],
    )
    S = lambda *xs: frozenset(str(x) for x in xs)  # noqa: E731
    c1, c2, both = {"c1"}, {"c2"}, {"c1", "c2"}

    _check(len(p.states) == 12, "twelve states 0..11")
    _check(p.uncontrollable == p.observable and p.unobservable == p.controllable,
           "observable events are exactly the uncontrollable ones")
    _check(step(p, "0", ["c1"]) == "1" and step(p, "0", ["c2"]) == "3", "0 -c1-> 1, 0 -c2-> 3")
    _check(step(p, "1", ["o1"]) == "4" and step(p, "3", ["o1"]) == "5", "1 -o1-> 4, 3 -o1-> 5")
    _check(step(p, "2", ["o3"]) == "4", "2 -o3-> 4")
    for g in (set(), c1, c2):
        _check("2" not in unobservable_reach(p, {"0"}, g), f"2 unreachable under {sorted(g)}")
    _check("2" in unobservable_reach(p, {"0"}, both), "2 reachable under {c1,c2}")
    _check(unobservable_reach(p, {"0"}, c1) == S(0, 1), "UR_{c1}({0}) = {0,1}")
    _check(unobservable_reach(p, {"0"}, c2) == S(0, 3), "UR_{c2}({0}) = {0,3}")
    _check(unobservable_reach(p, {"0"}, set()) == S(0), "UR_{}({0}) = {0}")
    _check(observable_reach(p, S(0, 1), "o2") == S(5), "NX_o2({0,1}) = {5}")
    _check(observable_reach(p, S(0, 1), "o1") == S(4), "NX_o1({0,1}) = {4}")
    _check(observable_reach(p, S(0, 3), "o1") == S(5), "NX_o1({0,3}) = {5}")
    _check(observable_reach(p, S(0, 3), "o2") == S(4), "o2 after {c2} also leads to {{4},{5}}")
    _check(unobservable_reach(p, {"5"}, both) == S(5, 6, 7, 8), "UR_{c1,c2}({5}) = {5,6,7,8}")
    _check(unobservable_reach(p, {"5"}, c1) == S(5, 6), "UR_{c1}({5}) = {5,6}")
    _check(unobservable_reach(p, {"5"}, c2) == S(5, 7), "UR_{c2}({5}) = {5,7}")
    _check(observable_reach(p, S(5, 6, 7, 8), "o1") == S(9, 10), "NX_o1({5,6,7,8}) = {9,10}")
    _check(observable_reach(p, S(5, 6, 7, 8), "o2") == S(10, 11), "NX_o2({5,6,7,8}) = {10,11}")
    _check(step(p, "0", "c2 o1 c2 o1".split()) == "10", "delta(c2 o1 c2 o1) = 10")
    _check(step(p, "0", "c2 o1 c1 o1".split()) == "9", "delta(c2 o1 c1 o1) = 9")
    _check(project(p, "c2 o1 c2 o1".split()) == ("o1", "o1"), "P(c2 o1 c2 o1) = o1 o1")
    for g in (set(), c1, c2, both):
        _check(unobservable_reach(p, {"4"}, g) == S(4), "UR of {4} is {4} under every decision")
    for o in ("o1", "o2", "o3"):
        _check(not observable_reach(p, S(4), o), f"4 has no {o} transition")
    for o in ("o1", "o2", "o3"):
        _check(not observable_reach(p, S(0), o), f"0 emits no {o} directly")
    _check(unobservable_reach(p, {"10"}, both) == S(10), "10 has no controllable exits")
    return p


def fixture_des() -> str:
    return dump_des(reconstruct_fixture())
