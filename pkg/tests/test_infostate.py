import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ndopacity.infostate import (
    InfoState,
    antichains,
    decision,
    decision_set,
    decision_set_leq,
    decision_set_lt,
    effective_decision,
    enumerate_compatible_decisions,
    flatten,
    fmt_aug,
    fmt_aug_macro,
    fmt_decision_set,
    fmt_macro,
    fmt_macro_decision,
    fmt_micro,
    irredundant,
    macro,
    macro_decision,
    macro_decision_lt,
    macro_observable_reach,
    micro,
    micro_options,
    odot,
    strip,
)
from ndopacity.plant import CapExceeded, ModelError, Plant, observable_reach, unobservable_reach
from tests.strategies import plants

E, C1, C2, C12 = decision(), decision("c1"), decision("c2"), decision("c1", "c2")


def test_odot_examples(fig1):
    d0 = macro_decision({micro("0"): [C1, C2]})
    assert odot(fig1, d0) == {(micro("0", "1"), C1), (micro("0", "3"), C2)}
    d = macro_decision({micro("4"): [E], micro("5"): [C1, C2]})
    assert odot(fig1, d) == {(micro("4"), E), (micro("5", "6"), C1), (micro("5", "7"), C2)}
    flat = Plant.build("flat", [("0", "o", "1")], "0", ["o"], [])
    assert odot(flat, macro_decision({micro("0"): [E]})) == {(micro("0"), E)}


def test_macro_observable_reach_examples(fig1):
    z0 = frozenset({(micro("0", "1"), C1), (micro("0", "3"), C2)})
    assert macro_observable_reach(fig1, z0, "o1") == macro(["4"], ["5"])
    z1 = frozenset({(micro("4"), E), (micro("5", "6", "7", "8"), C12)})
    assert macro_observable_reach(fig1, z1, "o2") == macro(["10", "11"])
    assert macro_observable_reach(fig1, z0, "o3") is None


def test_strip_examples():
    z1 = {(micro("4"), C1), (micro("4"), C2), (micro("5", "6"), C1), (micro("5", "7"), C2)}
    assert strip(z1) == macro(["4"], ["5", "6"], ["5", "7"])
    assert strip({(micro("3"), C1)}) == macro(["3"])
    assert strip({(micro("0", "1"), C1), (micro("0", "3"), C2)}) == macro(["0", "1"], ["0", "3"])
    assert flatten(strip(z1)) == micro("4", "5", "6", "7")


def test_decision_set_orderings():
    assert decision_set_lt({C1, C2}, {C12})
    a = frozenset({C1, C2})
    assert decision_set_leq(a, a) and not decision_set_lt(a, a)
    assert not decision_set_leq({C12}, {C1, C2})


def test_macro_decision_lt_examples():
    m4, m5 = micro("4"), micro("5")
    d9 = macro_decision({m4: [E], m5: [E]})
    d10 = macro_decision({m4: [E], m5: [C1, C2]})
    d11 = macro_decision({m4: [E], m5: [C12]})
    assert macro_decision_lt(d10, d11)
    assert macro_decision_lt(d9, d10)
    assert not macro_decision_lt(d11, d11)
    with pytest.raises(ModelError):
        macro_decision_lt(d9, macro_decision({m4: [E]}))


@pytest.mark.parametrize("n, count", [(0, 1), (1, 2), (2, 5), (3, 19)])
def test_antichain_counts(n, count):
    events = [f"c{i}" for i in range(1, n + 1)]
    p = Plant.build("lattice", [("0", e, "0") for e in events], "0", [], events)
    assert len(micro_options(p, micro("0"), collapse_inactive=False)) == count
    assert len(enumerate_compatible_decisions(p, macro(["0"]))) == count


def test_antichain_cap():
    elems = [frozenset(c) for c in ([], ["a"], ["b"], ["c"], ["a", "b"], ["a", "c"], ["b", "c"], ["a", "b", "c"])]
    assert len(antichains(elems)) == 19
    with pytest.raises(CapExceeded) as exc:
        antichains(elems, cap=10)
    assert exc.value.count > 10


def test_running_example_initial_options(fig1):
    opts = micro_options(fig1, micro("0"))
    assert [fmt_decision_set(o) for o in opts] == ["{{}}", "{{c1}}", "{{c1},{c2}}", "{{c1,c2}}", "{{c2}}"]
    # controllable events cannot fire from a deadlocked estimate
    assert micro_options(fig1, micro("4")) == [frozenset({E})]


def test_effective_decision(fig1):
    assert effective_decision(fig1, micro("4"), C12) == E
    assert effective_decision(fig1, micro("0"), C1) == C1
    assert effective_decision(fig1, micro("5"), C12) == C12


def test_compatible_product(fig1):
    ds = enumerate_compatible_decisions(fig1, macro(["4"], ["5"]))
    assert len(ds) == 5
    assert all({m for m, _ in d} == {micro("4"), micro("5")} for d in ds)


def test_rendering():
    assert fmt_micro(micro("1", "0")) == "{0,1}"
    assert fmt_micro(E) == "{}"
    assert fmt_aug((micro("0", "1"), C1)) == "({0,1},{c1})"
    assert fmt_macro(macro(["5"], ["4"])) == "{{4},{5}}"
    assert fmt_decision_set({C2, C1}) == "{{c1},{c2}}"
    d = macro_decision({micro("5"): [C12], micro("4"): [E]})
    assert fmt_macro_decision(d) == "[{4}=>{{}}; {5}=>{{c1,c2}}]"
    assert fmt_aug_macro({(micro("0", "3"), C2), (micro("0", "1"), C1)}) == "{({0,1},{c1}),({0,3},{c2})}"
    assert fmt_macro(macro(["10"], ["9"])) == "{{9},{10}}"


def test_decision_set_normalization():
    assert decision_set([C1, C12, E]) == {C12}
    assert decision_set([C1, C12], normalize=False) == {C1, C12}
    with pytest.raises(ModelError):
        decision_set([])
    with pytest.raises(ModelError):
        macro_decision([(micro("0"), [E]), (micro("0"), [C1])])


def test_info_state_fields():
    i = InfoState(micro("0"), macro(["0"]))
    assert i.estimate in i.macro


# --- properties ------------------------------------------------------------

option_sets = st.lists(st.sets(st.sampled_from(["c1", "c2", "c3"])), min_size=1, max_size=4)


@given(option_sets)
def test_irredundant_is_antichain(opts):
    r = irredundant(opts)
    assert all(not (a < b) for a in r for b in r)
    assert decision_set_leq(opts, r) and decision_set_leq(r, opts)


@given(option_sets, option_sets, option_sets)
def test_leq_preorder(a, b, c):
    a, b, c = (irredundant(x) for x in (a, b, c))
    assert decision_set_leq(a, a)
    if decision_set_leq(a, b) and decision_set_leq(b, c):
        assert decision_set_leq(a, c)
    assert not decision_set_lt(a, a)


@given(option_sets, option_sets, option_sets)
def test_macro_lt_irreflexive_transitive(a, b, c):
    m = micro("x")
    d1, d2, d3 = (macro_decision({m: irredundant(x)}) for x in (a, b, c))
    assert not macro_decision_lt(d1, d1)
    if macro_decision_lt(d1, d2) and macro_decision_lt(d2, d3):
        assert macro_decision_lt(d1, d3)


@settings(max_examples=60, deadline=None)
@given(plants(), st.data())
def test_odot_and_nx_properties(p, data):
    y = frozenset(frozenset(data.draw(st.sets(st.sampled_from(p.states), min_size=1)))
                  for _ in range(data.draw(st.integers(1, 2))))
    ds = enumerate_compatible_decisions(p, y)
    assert ds, "at least one compatible decision"
    d = data.draw(st.sampled_from(ds))
    z = odot(p, d)
    assert strip(z)
    assert len(z) <= sum(len(opts) for _, opts in d)
    for m, opts in d:
        assert all(not (a < b) for a in opts for b in opts)
        for g in opts:
            assert (unobservable_reach(p, m, g), g) in z
    for o in p.observable:
        defined = any(p.allows(g, o) and observable_reach(p, m, o) for m, g in z)
        assert (macro_observable_reach(p, z, o) is not None) == defined


@settings(max_examples=40, deadline=None)
@given(plants())
def test_collapse_preserves_reach(p):
    import itertools
    for x in p.states:
        m = micro(x)
        for r in range(len(p.controllable) + 1):
            for g in itertools.combinations(sorted(p.controllable), r):
                g = frozenset(g)
                eg = effective_decision(p, m, g)
                assert eg <= g
                tail = unobservable_reach(p, m, g)
                assert unobservable_reach(p, m, eg) == tail
                for o in p.observable:
                    fires = bool(observable_reach(p, tail, o))
                    assert (p.allows(g, o) and fires) == (p.allows(eg, o) and fires)
