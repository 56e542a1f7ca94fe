import pytest

from ndopacity import fixture
from ndopacity.gbts import build_pruned
from ndopacity.infostate import macro


def test_fixture_shape(fig1):
    assert fig1.states == tuple(str(i) for i in range(12))
    assert fig1.controllable == {"c1", "c2"} == fig1.unobservable
    assert fig1.observable == {"o1", "o2", "o3"}
    assert fig1.secret == {"0", "4", "10"}


def test_pruned_y_states(fig1):
    ys = build_pruned(fig1).y_states
    for y in (macro(["4"], ["5"]), macro(["10", "11"]), macro(["9", "10"])):
        assert y in ys


@pytest.mark.parametrize("broken", [
    ("2", "o3", "5"),
    ("6", "o2", "11"),
    ("3", "o2", "5"),
])
def test_broken_table_is_rejected(monkeypatch, broken):
    table = [t for t in fixture.FIG1_TRANSITIONS if t[:2] != broken[:2]] + [broken]
    monkeypatch.setattr(fixture, "FIG1_TRANSITIONS", table)
    with pytest.raises(fixture.FixtureError):
        fixture.reconstruct_fixture()


def test_fixture_des_text():
    text = fixture.fixture_des()
    assert text.startswith("plant paper-fig1\n")
    assert "secret: 0 4 10\n" in text
