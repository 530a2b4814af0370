import pytest
from hypothesis import given, strategies as st

from stubbornmc.kernel import (
    ALL, Model, ModelError, UsageError, decode_state, encode_state, fire_checked, rule_targets,
)
from stubbornmc.models import build_fixture, build_peterson

from conftest import VARIANTS, complete_space, model


def test_encode_all_zero_vector():
    # one byte per 8-bit value, in order
    assert encode_state((0,) * 13) == bytes(13)


def test_encode_equal_and_distinct():
    a = (1, 2, 3)
    assert encode_state(a) == encode_state((1, 2, 3))
    assert encode_state(a) != encode_state((1, 2, 4))


def test_encode_wide_values_little_endian():
    assert encode_state((1, 0x0203), width=16) == b"\x01\x00\x03\x02"
    assert decode_state(b"\x01\x00\x03\x02", width=16) == (1, 0x0203)


@pytest.mark.parametrize("width,bad", [(8, 256), (4, 16), (12, 4096), (8, -1)])
def test_encode_overflow_is_model_error(width, bad):
    with pytest.raises(ModelError, match="overflow"):
        encode_state((0, bad), width=width)


@given(
    st.integers(min_value=1, max_value=40).flatmap(
        lambda w: st.tuples(st.just(w), st.lists(st.integers(0, 2**w - 1), max_size=12))
    )
)
def test_encode_round_trip(case):
    width, values = case
    assert decode_state(encode_state(values, width), width) == tuple(values)


@given(st.lists(st.integers(0, 255), min_size=1, max_size=8), st.lists(st.integers(0, 255), min_size=1, max_size=8))
def test_encode_injective(a, b):
    if len(a) == len(b):
        assert (encode_state(a) == encode_state(b)) == (a == b)


@pytest.mark.parametrize("variant", VARIANTS)
def test_round_trip_over_reachable_states(variant):
    space = complete_space(variant, 2)
    for s in space.states():
        assert decode_state(encode_state(s)) == s


def test_fire_checked_first_transition_of_npr():
    m = build_peterson("non-progress-revealing", 2)
    s = m.initial_state
    succ = fire_checked(m, s, 0)
    assert succ[0] == 1 and succ[2] == 0  # S[0] = 1, j[0] = 0
    assert succ[1:] == s[1:] and succ[0] != s[0]


def test_fire_checked_termination_transition():
    m = build_peterson("non-progress-revealing", 2)
    succ = fire_checked(m, m.initial_state, 3)
    assert succ[1] == 8 and succ[0] == 0


def test_fire_checked_disabled_returns_none_and_keeps_state():
    m = build_peterson("non-progress-revealing", 2)
    s = fire_checked(m, m.initial_state, 3)
    before = tuple(s)
    assert fire_checked(m, s, 1) is None  # terminated customer
    assert fire_checked(m, s, 3) is None
    assert s == before


def test_fire_checked_rejects_bad_transition():
    m = build_peterson("plain", 2)
    with pytest.raises(UsageError):
        fire_checked(m, m.initial_state, 2)
    with pytest.raises(UsageError):
        fire_checked(m, m.initial_state, -1)


def test_fire_checked_reports_overflow():
    m = Model("grow", 1, (250,), fire=lambda s, t: (s[0] + 10,))
    with pytest.raises(ModelError, match="overflow"):
        fire_checked(m, m.initial_state, 0)


def test_fire_checked_reports_overflow_for_narrow_width():
    m = Model("grow", 1, (3,), fire=lambda s, t: (s[0] + 1,), width=2)
    with pytest.raises(ModelError, match="overflow"):
        fire_checked(m, m.initial_state, 0)


def test_model_rejects_out_of_range_initial_state():
    with pytest.raises(ModelError):
        Model("bad", 0, (300,), fire=lambda s, t: None)


def test_rule_targets_expands_all_and_validates():
    m = Model("r", 3, (0,), fire=lambda s, t: None, stubborn_rule=lambda s, t: ALL if t == 0 else (5,))
    assert list(rule_targets(m, (0,), 0)) == [0, 1, 2]
    with pytest.raises(ModelError):
        rule_targets(m, (0,), 1)


@pytest.mark.parametrize("variant", VARIANTS)
def test_firing_is_deterministic_and_pure(variant):
    m = model(variant, 2)
    for s in complete_space(variant, 2).states():
        frozen = tuple(s)
        for t in m.transitions:
            assert m.fire(s, t) == m.fire(s, t)
        assert s == frozen


def test_fixture_models_are_deterministic():
    for name in ["empty", "diamond", "lasso", "broken-rules"]:
        m = build_fixture(name)
        for t in m.transitions:
            assert m.fire(m.initial_state, t) == m.fire(m.initial_state, t)
